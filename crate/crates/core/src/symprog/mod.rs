//! The restricted imperative arithmetic language for solution programs.
//!
//! Programs are written in an indentation-delimited subset resembling a tiny
//! slice of Python: function definitions, assignments, `if`/`elif`/`else`,
//! `for ... in range(...)`, `while`, and `return`, over arbitrary-precision
//! integers, 64-bit floats, booleans, and fixed lists. There are no strings,
//! no imports, no attribute access, and no I/O. The grammar is documented in
//! `docs/grammar.ebnf` at the repository root.
//!
//! The front end is split into [`parse`] (lexing + recursive descent +
//! validation, producing an immutable [`Program`]) and [`execute`]
//! (deterministic tree-walking evaluation under [`ExecLimits`]).

mod ast;
mod interp;
mod parser;
mod token;
mod validate;
mod value;

pub use ast::{
    BinOp, BoolOp, Builtin, CallTarget, CmpOp, Expr, FunctionDef, Program, RangeArgs, Stmt,
    UnaryOp,
};
pub use interp::{execute, Budget, ExecError, ExecLimits, ExecOutcome};
pub use value::{format_value, FormatError, Value};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Upper bound on AST node count accepted by [`parse`].
pub const DEFAULT_MAX_NODES: usize = 10_000;

/// Where a raw program came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    LlmExtracted,
    Fixture,
}

/// Raw program source before parsing.
#[derive(Debug, Clone)]
pub struct SourceProgram {
    pub text: String,
    pub origin: Origin,
}

impl SourceProgram {
    pub fn llm(text: impl Into<String>) -> Self {
        SourceProgram { text: text.into(), origin: Origin::LlmExtracted }
    }

    pub fn fixture(text: impl Into<String>) -> Self {
        SourceProgram { text: text.into(), origin: Origin::Fixture }
    }
}

/// Rejection raised by the compile gate.
///
/// `Parse` marks malformed syntax; `Validate` marks syntactically legal input
/// that uses a construct outside the language (imports, strings, attribute
/// access), an unresolved name, or is missing the `answer` entry function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrontendError {
    Parse { line: u32, column: u32, message: String },
    Validate { reason: String },
}

impl FrontendError {
    pub(crate) fn parse(line: u32, column: u32, message: impl Into<String>) -> Self {
        FrontendError::Parse { line, column, message: message.into() }
    }

    pub(crate) fn validate(reason: impl Into<String>) -> Self {
        FrontendError::Validate { reason: reason.into() }
    }

    /// True when the input was rejected for using a disallowed construct or
    /// name rather than for malformed syntax.
    pub fn is_validation(&self) -> bool {
        matches!(self, FrontendError::Validate { .. })
    }
}

impl fmt::Display for FrontendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrontendError::Parse { line, column, message } => {
                write!(f, "parse error at {line}:{column}: {message}")
            }
            FrontendError::Validate { reason } => write!(f, "validation error: {reason}"),
        }
    }
}

/// Parse and validate a source program.
///
/// Succeeds only for programs inside the restricted grammar that define
/// exactly one `answer` function with at least one parameter and in which
/// every name resolves to a parameter, a prior local assignment, a
/// whitelisted builtin, or another function in the same program. A
/// successful parse guarantees execution never hits an unresolved name.
pub fn parse(src: &SourceProgram) -> Result<Program, FrontendError> {
    parse_with_max_nodes(src, DEFAULT_MAX_NODES)
}

/// [`parse`] with an explicit AST node budget.
pub fn parse_with_max_nodes(
    src: &SourceProgram,
    max_nodes: usize,
) -> Result<Program, FrontendError> {
    if src.text.is_empty() {
        return Err(FrontendError::validate("empty program source"));
    }
    let tokens = token::lex(&src.text)?;
    let functions = parser::parse_module(&tokens)?;
    validate::validate(functions, max_nodes)
}

/// Byte spans of the real lexemes of `src` (keywords, identifiers, literals,
/// operators, punctuation), in source order. Synthetic indentation and
/// line-structure tokens are excluded. Useful for tooling that manipulates
/// program text, e.g. mutation testing of fixture corpora.
pub fn lexeme_spans(src: &str) -> Result<Vec<(usize, usize)>, FrontendError> {
    let tokens = token::lex(src)?;
    Ok(tokens
        .iter()
        .filter(|t| !t.kind.is_synthetic())
        .map(|t| (t.start, t.end))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_src(text: &str) -> Result<Program, FrontendError> {
        parse(&SourceProgram::fixture(text))
    }

    fn assert_validation(text: &str, needle: &str) {
        match parse_src(text) {
            Err(FrontendError::Validate { reason }) => {
                assert!(
                    reason.contains(needle),
                    "expected validation error containing `{needle}`, got `{reason}`"
                );
            }
            other => panic!("expected validation error containing `{needle}`, got {other:?}"),
        }
    }

    fn assert_parse_err(text: &str) {
        match parse_src(text) {
            Err(FrontendError::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn identity_program() {
        let prog = parse_src("def answer(x):\n    return x\n").unwrap();
        assert_eq!(prog.param_names, vec!["x"]);
        assert_eq!(prog.functions.len(), 1);
    }

    #[test]
    fn missing_answer_function() {
        assert_validation("def solve(x):\n    return x\n", "answer");
    }

    #[test]
    fn answer_needs_a_parameter() {
        assert_validation("def answer():\n    return 1\n", "at least one parameter");
    }

    #[test]
    fn duplicate_function_names() {
        assert_validation(
            "def answer(x):\n    return x\n\ndef answer(y):\n    return y\n",
            "more than once",
        );
    }

    #[test]
    fn duplicate_parameter_names() {
        assert_validation("def answer(x, x):\n    return x\n", "repeats parameter");
    }

    #[test]
    fn import_is_a_disallowed_construct() {
        assert_validation(
            "import os\n\ndef answer(a, b):\n    return a + b\n",
            "disallowed construct: `import`",
        );
    }

    #[test]
    fn strings_are_rejected() {
        assert_validation(
            "def answer(x):\n    return \"hello\"\n",
            "string literals are not supported",
        );
    }

    #[test]
    fn attribute_access_is_rejected() {
        assert_validation(
            "def answer(x):\n    return x.real\n",
            "attribute access",
        );
    }

    #[test]
    fn expression_statements_are_rejected() {
        assert_validation(
            "def answer(x):\n    print(x)\n    return x\n",
            "expression statement",
        );
    }

    #[test]
    fn io_like_names_are_unresolved() {
        assert_validation(
            "def answer(x):\n    y = input()\n    return y\n",
            "unknown function `input`",
        );
    }

    #[test]
    fn undefined_local_is_rejected() {
        assert_validation("def answer(x):\n    return y\n", "`y` is not defined");
    }

    #[test]
    fn branch_definitions_do_not_escape_without_else() {
        assert_validation(
            "def answer(x):\n    if x > 0:\n        y = 1\n    return y\n",
            "`y` is not defined",
        );
    }

    #[test]
    fn both_branches_define_is_accepted() {
        parse_src(
            "def answer(x):\n    if x > 0:\n        y = 1\n    else:\n        y = 2\n    return y\n",
        )
        .unwrap();
    }

    #[test]
    fn loop_body_definitions_do_not_escape() {
        assert_validation(
            "def answer(n):\n    for i in range(n):\n        y = i\n    return y\n",
            "`y` is not defined",
        );
    }

    #[test]
    fn augmented_assignment_needs_prior_definition() {
        assert_validation(
            "def answer(n):\n    total += n\n    return total\n",
            "before it is assigned",
        );
    }

    #[test]
    fn call_to_unknown_function() {
        assert_validation(
            "def answer(x):\n    return helper(x)\n",
            "unknown function `helper`",
        );
    }

    #[test]
    fn function_used_as_value() {
        assert_validation(
            "def helper(x):\n    return x\n\ndef answer(x):\n    y = helper\n    return y\n",
            "used as a value",
        );
    }

    #[test]
    fn wrong_arity_is_a_compile_error() {
        assert_validation(
            "def helper(a, b):\n    return a + b\n\ndef answer(x):\n    return helper(x)\n",
            "wrong number of arguments",
        );
    }

    #[test]
    fn builtin_arity_is_checked() {
        assert_validation("def answer(x):\n    return abs(x, x)\n", "wrong number");
        assert_validation("def answer(x):\n    return pow(x)\n", "wrong number");
    }

    #[test]
    fn range_in_expressions_is_rejected() {
        assert_validation(
            "def answer(n):\n    r = range(n)\n    return r\n",
            "unknown function `range`",
        );
    }

    #[test]
    fn nested_defs_are_rejected() {
        assert_validation(
            "def answer(x):\n    def inner(y):\n        return y\n    return x\n",
            "nested function",
        );
    }

    #[test]
    fn node_budget_is_enforced() {
        let mut body = String::from("def answer(x):\n");
        for i in 0..4000 {
            body.push_str(&alloc::format!("    v{i} = x + 1 + 2\n"));
        }
        body.push_str("    return x\n");
        match parse_with_max_nodes(&SourceProgram::fixture(&body), 1000) {
            Err(FrontendError::Validate { reason }) => assert!(reason.contains("AST nodes")),
            other => panic!("expected node budget error, got ok={:?}", other.is_ok()),
        }
    }

    #[test]
    fn syntax_damage_is_a_parse_error() {
        assert_parse_err("def answer(x:\n    return x\n");
        assert_parse_err("def answer(x):\n    return x +\n");
        assert_parse_err("def answer(x):\nreturn x\n");
        assert_parse_err("def answer(x):\n    y = \n    return x\n");
    }

    #[test]
    fn empty_source_is_invalid() {
        assert!(parse_src("").is_err());
        assert_validation("# only a comment\n", "no functions");
    }

    #[test]
    fn indentation_must_be_consistent() {
        assert_parse_err("def answer(x):\n    if x > 0:\n            y = 1\n      return y\n");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        parse_src(
            "# leading comment\n\ndef answer(x):  # trailing\n    # inner\n\n    return x\n",
        )
        .unwrap();
    }

    #[test]
    fn implicit_line_joining_inside_brackets() {
        parse_src("def answer(a, b):\n    return (a +\n            b)\n").unwrap();
    }

    #[test]
    fn backslash_continuation() {
        parse_src("def answer(a, b):\n    return a + \\\n        b\n").unwrap();
    }

    #[test]
    fn dead_code_after_return_is_allowed() {
        parse_src("def answer(x):\n    return x\n    y = 1\n    return y\n").unwrap();
    }

    #[test]
    fn lexeme_spans_reconstruct_tokens() {
        let src = "def answer(x):\n    return x + 1\n";
        let spans = lexeme_spans(src).unwrap();
        let words: Vec<&str> = spans.iter().map(|&(s, e)| &src[s..e]).collect();
        assert_eq!(
            words,
            vec!["def", "answer", "(", "x", ")", ":", "return", "x", "+", "1"]
        );
    }
}
