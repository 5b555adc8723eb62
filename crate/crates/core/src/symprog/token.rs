//! Lexer: byte stream to tokens with Python-style line structure.
//!
//! Indentation is tracked with a stack (a tab advances to the next multiple
//! of eight columns). Newlines inside parentheses or brackets are ignored, as
//! are blank and comment-only lines. A trailing backslash joins physical
//! lines. String literals are recognized only to be rejected, so that the
//! error names the construct instead of pointing at a stray quote.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::FrontendError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum TokKind {
    // Synthetic line-structure tokens.
    Newline,
    Indent,
    Dedent,
    EndOfInput,
    // Lexemes.
    Ident(String),
    Keyword(Kw),
    Int(BigInt),
    Real(f64),
    // Operators and punctuation.
    Plus,
    Minus,
    Star,
    DoubleStar,
    Slash,
    DoubleSlash,
    Percent,
    Assign,
    PlusAssign,
    MinusAssign,
    StarAssign,
    SlashAssign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Kw {
    Def,
    Return,
    If,
    Elif,
    Else,
    For,
    In,
    While,
    And,
    Or,
    Not,
    True,
    False,
    Pass,
}

impl TokKind {
    pub(super) fn is_synthetic(&self) -> bool {
        matches!(
            self,
            TokKind::Newline | TokKind::Indent | TokKind::Dedent | TokKind::EndOfInput
        )
    }

    pub(super) fn describe(&self) -> String {
        match self {
            TokKind::Newline => "end of line".to_string(),
            TokKind::Indent => "indent".to_string(),
            TokKind::Dedent => "dedent".to_string(),
            TokKind::EndOfInput => "end of input".to_string(),
            TokKind::Ident(name) => format!("identifier `{name}`"),
            TokKind::Keyword(kw) => format!("`{}`", kw.as_str()),
            TokKind::Int(v) => format!("integer literal `{v}`"),
            TokKind::Real(v) => format!("number literal `{v}`"),
            TokKind::Plus => "`+`".to_string(),
            TokKind::Minus => "`-`".to_string(),
            TokKind::Star => "`*`".to_string(),
            TokKind::DoubleStar => "`**`".to_string(),
            TokKind::Slash => "`/`".to_string(),
            TokKind::DoubleSlash => "`//`".to_string(),
            TokKind::Percent => "`%`".to_string(),
            TokKind::Assign => "`=`".to_string(),
            TokKind::PlusAssign => "`+=`".to_string(),
            TokKind::MinusAssign => "`-=`".to_string(),
            TokKind::StarAssign => "`*=`".to_string(),
            TokKind::SlashAssign => "`/=`".to_string(),
            TokKind::Eq => "`==`".to_string(),
            TokKind::Ne => "`!=`".to_string(),
            TokKind::Lt => "`<`".to_string(),
            TokKind::Le => "`<=`".to_string(),
            TokKind::Gt => "`>`".to_string(),
            TokKind::Ge => "`>=`".to_string(),
            TokKind::LParen => "`(`".to_string(),
            TokKind::RParen => "`)`".to_string(),
            TokKind::LBracket => "`[`".to_string(),
            TokKind::RBracket => "`]`".to_string(),
            TokKind::Comma => "`,`".to_string(),
            TokKind::Colon => "`:`".to_string(),
            TokKind::Dot => "`.`".to_string(),
        }
    }
}

impl Kw {
    fn from_word(word: &str) -> Option<Kw> {
        Some(match word {
            "def" => Kw::Def,
            "return" => Kw::Return,
            "if" => Kw::If,
            "elif" => Kw::Elif,
            "else" => Kw::Else,
            "for" => Kw::For,
            "in" => Kw::In,
            "while" => Kw::While,
            "and" => Kw::And,
            "or" => Kw::Or,
            "not" => Kw::Not,
            "True" => Kw::True,
            "False" => Kw::False,
            "pass" => Kw::Pass,
            _ => None?,
        })
    }

    pub(super) fn as_str(self) -> &'static str {
        match self {
            Kw::Def => "def",
            Kw::Return => "return",
            Kw::If => "if",
            Kw::Elif => "elif",
            Kw::Else => "else",
            Kw::For => "for",
            Kw::In => "in",
            Kw::While => "while",
            Kw::And => "and",
            Kw::Or => "or",
            Kw::Not => "not",
            Kw::True => "True",
            Kw::False => "False",
            Kw::Pass => "pass",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Token {
    pub kind: TokKind,
    pub line: u32,
    pub col: u32,
    pub start: usize,
    pub end: usize,
}

struct Lexer<'s> {
    src: &'s [u8],
    pos: usize,
    line: u32,
    col: u32,
    bracket_depth: u32,
    indents: Vec<u32>,
    out: Vec<Token>,
}

pub(super) fn lex(src: &str) -> Result<Vec<Token>, FrontendError> {
    let mut lx = Lexer {
        src: src.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
        bracket_depth: 0,
        indents: alloc::vec![0],
        out: Vec::new(),
    };
    lx.run()?;
    Ok(lx.out)
}

impl<'s> Lexer<'s> {
    fn run(&mut self) -> Result<(), FrontendError> {
        loop {
            if self.bracket_depth == 0 {
                if !self.start_logical_line()? {
                    break;
                }
            }
            if !self.lex_line_tokens()? {
                break;
            }
        }
        // Close any open blocks at end of input.
        if self
            .out
            .last()
            .is_some_and(|t| !matches!(t.kind, TokKind::Newline))
            && self.out.iter().any(|t| !t.kind.is_synthetic())
        {
            self.emit_here(TokKind::Newline);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.emit_here(TokKind::Dedent);
        }
        self.emit_here(TokKind::EndOfInput);
        Ok(())
    }

    /// Consume indentation and blank/comment lines; emit INDENT/DEDENT.
    /// Returns false at end of input.
    fn start_logical_line(&mut self) -> Result<bool, FrontendError> {
        loop {
            let mut width: u32 = 0;
            loop {
                match self.peek() {
                    Some(b' ') => {
                        width += 1;
                        self.bump();
                    }
                    Some(b'\t') => {
                        width = (width / 8 + 1) * 8;
                        self.bump();
                    }
                    _ => break,
                }
            }
            match self.peek() {
                None => return Ok(false),
                Some(b'\n') => {
                    self.bump_newline();
                    continue;
                }
                Some(b'\r') => {
                    self.bump();
                    continue;
                }
                Some(b'#') => {
                    self.skip_comment();
                    continue;
                }
                Some(_) => {
                    let current = *self.indents.last().unwrap();
                    if width > current {
                        self.indents.push(width);
                        self.emit_here(TokKind::Indent);
                    } else if width < current {
                        while width < *self.indents.last().unwrap() {
                            self.indents.pop();
                            self.emit_here(TokKind::Dedent);
                        }
                        if width != *self.indents.last().unwrap() {
                            return Err(FrontendError::parse(
                                self.line,
                                self.col,
                                "unindent does not match any outer indentation level",
                            ));
                        }
                    }
                    return Ok(true);
                }
            }
        }
    }

    /// Lex tokens until the end of the logical line. Returns false at end of
    /// input.
    fn lex_line_tokens(&mut self) -> Result<bool, FrontendError> {
        loop {
            match self.peek() {
                None => return Ok(false),
                Some(b' ') | Some(b'\t') | Some(b'\r') => {
                    self.bump();
                }
                Some(b'#') => {
                    self.skip_comment();
                }
                Some(b'\n') => {
                    if self.bracket_depth > 0 {
                        self.bump_newline();
                        continue;
                    }
                    let (line, col, pos) = (self.line, self.col, self.pos);
                    self.bump_newline();
                    self.out.push(Token {
                        kind: TokKind::Newline,
                        line,
                        col,
                        start: pos,
                        end: pos,
                    });
                    return Ok(true);
                }
                Some(b'\\') => {
                    // Explicit line continuation.
                    if self.peek_at(1) == Some(b'\n') {
                        self.bump();
                        self.bump_newline();
                    } else if self.peek_at(1) == Some(b'\r') && self.peek_at(2) == Some(b'\n') {
                        self.bump();
                        self.bump();
                        self.bump_newline();
                    } else {
                        return Err(FrontendError::parse(
                            self.line,
                            self.col,
                            "stray `\\` outside a line continuation",
                        ));
                    }
                }
                Some(c) => {
                    self.lex_token(c)?;
                }
            }
        }
    }

    fn lex_token(&mut self, first: u8) -> Result<(), FrontendError> {
        let (line, col, start) = (self.line, self.col, self.pos);
        let kind = match first {
            b'0'..=b'9' => self.lex_number()?,
            b'.' => {
                if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                    self.lex_number()?
                } else {
                    self.bump();
                    TokKind::Dot
                }
            }
            b'\'' | b'"' => {
                return Err(FrontendError::validate(
                    "string literals are not supported; programs compute numbers only",
                ));
            }
            c if c == b'_' || c.is_ascii_alphabetic() => self.lex_word(),
            _ => self.lex_operator()?,
        };
        self.out.push(Token { kind, line, col, start, end: self.pos });
        Ok(())
    }

    fn lex_word(&mut self) -> TokKind {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c == b'_' || c.is_ascii_alphanumeric())
        {
            self.bump();
        }
        let word = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match Kw::from_word(word) {
            Some(kw) => TokKind::Keyword(kw),
            None => TokKind::Ident(word.to_string()),
        }
    }

    fn lex_number(&mut self) -> Result<TokKind, FrontendError> {
        let (line, col, start) = (self.line, self.col, self.pos);
        let mut saw_dot = false;
        let mut saw_exp = false;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some(b'.') {
            saw_dot = true;
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mut ahead = 1;
            if matches!(self.peek_at(1), Some(b'+') | Some(b'-')) {
                ahead = 2;
            }
            if self.peek_at(ahead).is_some_and(|c| c.is_ascii_digit()) {
                saw_exp = true;
                for _ in 0..=ahead {
                    self.bump();
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if saw_dot || saw_exp {
            let value: f64 = text.parse().map_err(|_| {
                FrontendError::parse(line, col, format!("malformed number literal `{text}`"))
            })?;
            Ok(TokKind::Real(value))
        } else {
            let value: BigInt = text.parse().map_err(|_| {
                FrontendError::parse(line, col, format!("malformed integer literal `{text}`"))
            })?;
            Ok(TokKind::Int(value))
        }
    }

    fn lex_operator(&mut self) -> Result<TokKind, FrontendError> {
        let c = self.peek().unwrap();
        let next = self.peek_at(1);
        let (kind, width) = match (c, next) {
            (b'*', Some(b'*')) => (TokKind::DoubleStar, 2),
            (b'*', Some(b'=')) => (TokKind::StarAssign, 2),
            (b'*', _) => (TokKind::Star, 1),
            (b'/', Some(b'/')) => (TokKind::DoubleSlash, 2),
            (b'/', Some(b'=')) => (TokKind::SlashAssign, 2),
            (b'/', _) => (TokKind::Slash, 1),
            (b'+', Some(b'=')) => (TokKind::PlusAssign, 2),
            (b'+', _) => (TokKind::Plus, 1),
            (b'-', Some(b'=')) => (TokKind::MinusAssign, 2),
            (b'-', _) => (TokKind::Minus, 1),
            (b'%', _) => (TokKind::Percent, 1),
            (b'=', Some(b'=')) => (TokKind::Eq, 2),
            (b'=', _) => (TokKind::Assign, 1),
            (b'!', Some(b'=')) => (TokKind::Ne, 2),
            (b'<', Some(b'=')) => (TokKind::Le, 2),
            (b'<', _) => (TokKind::Lt, 1),
            (b'>', Some(b'=')) => (TokKind::Ge, 2),
            (b'>', _) => (TokKind::Gt, 1),
            (b'(', _) => (TokKind::LParen, 1),
            (b')', _) => (TokKind::RParen, 1),
            (b'[', _) => (TokKind::LBracket, 1),
            (b']', _) => (TokKind::RBracket, 1),
            (b',', _) => (TokKind::Comma, 1),
            (b':', _) => (TokKind::Colon, 1),
            _ => {
                return Err(FrontendError::parse(
                    self.line,
                    self.col,
                    format!("unexpected character `{}`", c as char),
                ));
            }
        };
        match kind {
            TokKind::LParen | TokKind::LBracket => self.bracket_depth += 1,
            TokKind::RParen | TokKind::RBracket => {
                self.bracket_depth = self.bracket_depth.saturating_sub(1)
            }
            _ => {}
        }
        for _ in 0..width {
            self.bump();
        }
        Ok(kind)
    }

    fn skip_comment(&mut self) {
        while self.peek().is_some_and(|c| c != b'\n') {
            self.bump();
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) {
        debug_assert!(self.pos < self.src.len());
        // Columns count bytes; fine for diagnostics.
        self.pos += 1;
        self.col += 1;
    }

    fn bump_newline(&mut self) {
        debug_assert_eq!(self.peek(), Some(b'\n'));
        self.pos += 1;
        self.line += 1;
        self.col = 1;
    }

    fn emit_here(&mut self, kind: TokKind) {
        self.out.push(Token {
            kind,
            line: self.line,
            col: self.col,
            start: self.pos,
            end: self.pos,
        });
    }
}
