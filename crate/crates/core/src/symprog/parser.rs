//! Recursive descent parser over the token stream.
//!
//! Produces raw `FunctionDef`s with unresolved call targets; name resolution
//! and the rest of the compile gate live in `validate`. Disallowed constructs
//! with recognizable syntax (imports, attribute access, expression
//! statements) are reported as validation errors so callers can distinguish
//! them from plain syntax damage.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{BinOp, BoolOp, CallTarget, CmpOp, Expr, FunctionDef, RangeArgs, Stmt, UnaryOp};
use super::token::{Kw, TokKind, Token};
use super::FrontendError;

/// Statement-introducing words from the host language family that the
/// grammar deliberately excludes. Recognized only to name the rejected
/// construct in the error.
const BANNED_STMT_WORDS: &[&str] = &[
    "import", "from", "class", "lambda", "global", "nonlocal", "del", "with", "try", "except",
    "finally", "raise", "assert", "yield", "break", "continue", "match",
];

pub(super) fn parse_module(tokens: &[Token]) -> Result<Vec<FunctionDef>, FrontendError> {
    let mut p = Parser { tokens, pos: 0 };
    let mut functions = Vec::new();
    loop {
        match &p.peek().kind {
            TokKind::EndOfInput => break,
            TokKind::Newline => {
                p.pos += 1;
            }
            TokKind::Keyword(Kw::Def) => functions.push(p.function_def()?),
            _ => {
                if let TokKind::Ident(word) = &p.peek().kind {
                    if BANNED_STMT_WORDS.contains(&word.as_str()) {
                        return Err(FrontendError::validate(format!(
                            "disallowed construct: `{word}` statement"
                        )));
                    }
                }
                return Err(p.unexpected("`def` at top level"));
            }
        }
    }
    if functions.is_empty() {
        return Err(FrontendError::validate("program defines no functions"));
    }
    Ok(functions)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_kind(&self) -> &TokKind {
        &self.peek().kind
    }

    fn advance(&mut self) -> &Token {
        let tok = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokKind) -> bool {
        if self.peek_kind() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokKind) -> Result<(), FrontendError> {
        if self.peek_kind() == &kind {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&format!("{}", kind.describe())))
        }
    }

    fn unexpected(&self, wanted: &str) -> FrontendError {
        let tok = self.peek();
        FrontendError::parse(
            tok.line,
            tok.col,
            format!("expected {wanted}, found {}", tok.kind.describe()),
        )
    }

    fn ident(&mut self, role: &str) -> Result<String, FrontendError> {
        match self.peek_kind().clone() {
            TokKind::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.unexpected(role)),
        }
    }

    fn function_def(&mut self) -> Result<FunctionDef, FrontendError> {
        self.expect(TokKind::Keyword(Kw::Def))?;
        let name = self.ident("function name")?;
        self.expect(TokKind::LParen)?;
        let mut params = Vec::new();
        if self.peek_kind() != &TokKind::RParen {
            loop {
                params.push(self.ident("parameter name")?);
                if !self.eat(&TokKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokKind::RParen)?;
        self.expect(TokKind::Colon)?;
        let body = self.block()?;
        Ok(FunctionDef { name, params, body })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, FrontendError> {
        self.expect(TokKind::Newline)?;
        self.expect(TokKind::Indent)?;
        let mut stmts = Vec::new();
        loop {
            match self.peek_kind() {
                TokKind::Dedent => {
                    self.advance();
                    break;
                }
                TokKind::Newline => {
                    self.advance();
                }
                TokKind::EndOfInput => break,
                _ => stmts.push(self.statement()?),
            }
        }
        if stmts.is_empty() {
            return Err(self.unexpected("at least one statement in block"));
        }
        Ok(stmts)
    }

    fn statement(&mut self) -> Result<Stmt, FrontendError> {
        match self.peek_kind().clone() {
            TokKind::Keyword(Kw::Return) => {
                self.advance();
                let value = self.expression()?;
                self.end_simple_stmt()?;
                Ok(Stmt::Return { value })
            }
            TokKind::Keyword(Kw::Pass) => {
                self.advance();
                self.end_simple_stmt()?;
                Ok(Stmt::Pass)
            }
            TokKind::Keyword(Kw::If) => self.if_stmt(),
            TokKind::Keyword(Kw::While) => {
                self.advance();
                let cond = self.expression()?;
                self.expect(TokKind::Colon)?;
                let body = self.block()?;
                Ok(Stmt::While { cond, body })
            }
            TokKind::Keyword(Kw::For) => self.for_stmt(),
            TokKind::Keyword(Kw::Def) => Err(FrontendError::validate(
                "disallowed construct: nested function definition",
            )),
            TokKind::Ident(name) => {
                if BANNED_STMT_WORDS.contains(&name.as_str()) {
                    return Err(FrontendError::validate(format!(
                        "disallowed construct: `{name}` statement"
                    )));
                }
                let op = match self.tokens.get(self.pos + 1).map(|t| &t.kind) {
                    Some(TokKind::Assign) => None,
                    Some(TokKind::PlusAssign) => Some(BinOp::Add),
                    Some(TokKind::MinusAssign) => Some(BinOp::Sub),
                    Some(TokKind::StarAssign) => Some(BinOp::Mul),
                    Some(TokKind::SlashAssign) => Some(BinOp::Div),
                    _ => {
                        // Not an assignment; parse as an expression to decide
                        // between "expression statement" (disallowed) and a
                        // syntax error.
                        let _ = self.expression()?;
                        return Err(FrontendError::validate(
                            "disallowed construct: expression statement (assign it or return it)",
                        ));
                    }
                };
                self.advance(); // target
                self.advance(); // assignment operator
                let value = self.expression()?;
                self.end_simple_stmt()?;
                Ok(Stmt::Assign { target: name, op, value })
            }
            _ => {
                // Anything else that opens a valid expression is an
                // expression statement, which the grammar excludes.
                if self.expression().is_ok() {
                    return Err(FrontendError::validate(
                        "disallowed construct: expression statement (assign it or return it)",
                    ));
                }
                Err(self.unexpected("a statement"))
            }
        }
    }

    fn end_simple_stmt(&mut self) -> Result<(), FrontendError> {
        match self.peek_kind() {
            TokKind::Newline => {
                self.advance();
                Ok(())
            }
            TokKind::EndOfInput => Ok(()),
            TokKind::Dedent => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }

    fn if_stmt(&mut self) -> Result<Stmt, FrontendError> {
        self.expect(TokKind::Keyword(Kw::If))?;
        let mut arms = Vec::new();
        let cond = self.expression()?;
        self.expect(TokKind::Colon)?;
        arms.push((cond, self.block()?));
        let mut else_body = None;
        loop {
            match self.peek_kind() {
                TokKind::Keyword(Kw::Elif) => {
                    self.advance();
                    let cond = self.expression()?;
                    self.expect(TokKind::Colon)?;
                    arms.push((cond, self.block()?));
                }
                TokKind::Keyword(Kw::Else) => {
                    self.advance();
                    self.expect(TokKind::Colon)?;
                    else_body = Some(self.block()?);
                    break;
                }
                _ => break,
            }
        }
        Ok(Stmt::If { arms, else_body })
    }

    fn for_stmt(&mut self) -> Result<Stmt, FrontendError> {
        self.expect(TokKind::Keyword(Kw::For))?;
        let var = self.ident("loop variable")?;
        self.expect(TokKind::Keyword(Kw::In))?;
        let callee = self.ident("`range`")?;
        if callee != "range" {
            return Err(FrontendError::validate(format!(
                "for loops iterate over range(...) only, found `{callee}`"
            )));
        }
        self.expect(TokKind::LParen)?;
        let first = self.expression()?;
        let mut rest = Vec::new();
        while self.eat(&TokKind::Comma) {
            rest.push(self.expression()?);
        }
        self.expect(TokKind::RParen)?;
        if rest.len() > 2 {
            return Err(FrontendError::validate(
                "range(...) takes at most three arguments",
            ));
        }
        let mut it = rest.into_iter();
        let range = match (it.next(), it.next()) {
            (None, _) => RangeArgs { start: None, stop: first, step: None },
            (Some(stop), step) => RangeArgs { start: Some(first), stop, step },
        };
        self.expect(TokKind::Colon)?;
        let body = self.block()?;
        Ok(Stmt::For { var, range, body })
    }

    fn expression(&mut self) -> Result<Expr, FrontendError> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Expr, FrontendError> {
        let first = self.and_expr()?;
        if self.peek_kind() != &TokKind::Keyword(Kw::Or) {
            return Ok(first);
        }
        let mut terms = alloc::vec![first];
        while self.eat(&TokKind::Keyword(Kw::Or)) {
            terms.push(self.and_expr()?);
        }
        Ok(Expr::BoolChain { op: BoolOp::Or, terms })
    }

    fn and_expr(&mut self) -> Result<Expr, FrontendError> {
        let first = self.not_expr()?;
        if self.peek_kind() != &TokKind::Keyword(Kw::And) {
            return Ok(first);
        }
        let mut terms = alloc::vec![first];
        while self.eat(&TokKind::Keyword(Kw::And)) {
            terms.push(self.not_expr()?);
        }
        Ok(Expr::BoolChain { op: BoolOp::And, terms })
    }

    fn not_expr(&mut self) -> Result<Expr, FrontendError> {
        if self.eat(&TokKind::Keyword(Kw::Not)) {
            let operand = self.not_expr()?;
            return Ok(Expr::Unary { op: UnaryOp::Not, operand: Box::new(operand) });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, FrontendError> {
        let first = self.arith()?;
        let mut rest = Vec::new();
        loop {
            let op = match self.peek_kind() {
                TokKind::Eq => CmpOp::Eq,
                TokKind::Ne => CmpOp::Ne,
                TokKind::Lt => CmpOp::Lt,
                TokKind::Le => CmpOp::Le,
                TokKind::Gt => CmpOp::Gt,
                TokKind::Ge => CmpOp::Ge,
                _ => break,
            };
            self.advance();
            rest.push((op, self.arith()?));
        }
        if rest.is_empty() {
            Ok(first)
        } else {
            Ok(Expr::Compare { first: Box::new(first), rest })
        }
    }

    fn arith(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                TokKind::Plus => BinOp::Add,
                TokKind::Minus => BinOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                TokKind::Star => BinOp::Mul,
                TokKind::Slash => BinOp::Div,
                TokKind::DoubleSlash => BinOp::FloorDiv,
                TokKind::Percent => BinOp::Mod,
                _ => break,
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        match self.peek_kind() {
            TokKind::Minus => {
                self.advance();
                let operand = self.unary()?;
                Ok(Expr::Unary { op: UnaryOp::Neg, operand: Box::new(operand) })
            }
            TokKind::Plus => {
                self.advance();
                let operand = self.unary()?;
                Ok(Expr::Unary { op: UnaryOp::Pos, operand: Box::new(operand) })
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, FrontendError> {
        let base = self.postfix()?;
        if self.eat(&TokKind::DoubleStar) {
            // Right-associative; the exponent may itself be signed.
            let exp = self.unary()?;
            return Ok(Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exp),
            });
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr, FrontendError> {
        let mut expr = self.atom()?;
        loop {
            match self.peek_kind() {
                TokKind::LParen => {
                    let callee = match &expr {
                        Expr::Name(name) => name.clone(),
                        _ => {
                            return Err(FrontendError::validate(
                                "calls must target a named function or builtin",
                            ));
                        }
                    };
                    self.advance();
                    let mut args = Vec::new();
                    if self.peek_kind() != &TokKind::RParen {
                        loop {
                            args.push(self.expression()?);
                            if !self.eat(&TokKind::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(TokKind::RParen)?;
                    expr = Expr::Call { callee, target: CallTarget::Unresolved, args };
                }
                TokKind::LBracket => {
                    self.advance();
                    let index = self.expression()?;
                    self.expect(TokKind::RBracket)?;
                    expr = Expr::Index { seq: Box::new(expr), index: Box::new(index) };
                }
                TokKind::Dot => {
                    return Err(FrontendError::validate(
                        "disallowed construct: attribute access",
                    ));
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    fn atom(&mut self) -> Result<Expr, FrontendError> {
        match self.peek_kind().clone() {
            TokKind::Int(v) => {
                self.advance();
                Ok(Expr::Int(v))
            }
            TokKind::Real(v) => {
                self.advance();
                Ok(Expr::Real(v))
            }
            TokKind::Keyword(Kw::True) => {
                self.advance();
                Ok(Expr::Bool(true))
            }
            TokKind::Keyword(Kw::False) => {
                self.advance();
                Ok(Expr::Bool(false))
            }
            TokKind::Ident(name) => {
                self.advance();
                Ok(Expr::Name(name))
            }
            TokKind::LParen => {
                self.advance();
                let inner = self.expression()?;
                self.expect(TokKind::RParen)?;
                Ok(inner)
            }
            TokKind::LBracket => {
                self.advance();
                let mut items = Vec::new();
                if self.peek_kind() != &TokKind::RBracket {
                    loop {
                        items.push(self.expression()?);
                        if !self.eat(&TokKind::Comma) {
                            break;
                        }
                    }
                }
                self.expect(TokKind::RBracket)?;
                Ok(Expr::List(items))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
