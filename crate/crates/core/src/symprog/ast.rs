//! Validated AST. Immutable after construction; safe to share across threads.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    FloorDiv,
    Mod,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Pos,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
}

/// Whitelisted builtin functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Abs,
    Min,
    Max,
    Round,
    Int,
    Float,
    Pow,
    Sum,
    Len,
    Floor,
    Ceil,
    Sqrt,
}

impl Builtin {
    pub(super) fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "abs" => Builtin::Abs,
            "min" => Builtin::Min,
            "max" => Builtin::Max,
            "round" => Builtin::Round,
            "int" => Builtin::Int,
            "float" => Builtin::Float,
            "pow" => Builtin::Pow,
            "sum" => Builtin::Sum,
            "len" => Builtin::Len,
            "floor" => Builtin::Floor,
            "ceil" => Builtin::Ceil,
            "sqrt" => Builtin::Sqrt,
            _ => None?,
        })
    }

}

/// Call dispatch, resolved during validation so execution never looks up a
/// name that could be missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallTarget {
    /// Index into [`Program::functions`].
    Function(usize),
    Builtin(Builtin),
    /// Placeholder between parsing and validation.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Real(f64),
    Bool(bool),
    List(Vec<Expr>),
    Name(String),
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// Chained comparison, e.g. `a < b <= c`; short-circuits left to right.
    Compare {
        first: Box<Expr>,
        rest: Vec<(CmpOp, Expr)>,
    },
    /// `and`/`or` chain with short-circuit evaluation.
    BoolChain {
        op: BoolOp,
        terms: Vec<Expr>,
    },
    Index {
        seq: Box<Expr>,
        index: Box<Expr>,
    },
    Call {
        callee: String,
        target: CallTarget,
        args: Vec<Expr>,
    },
}

/// `range(stop)` / `range(start, stop)` / `range(start, stop, step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeArgs {
    pub start: Option<Expr>,
    pub stop: Expr,
    pub step: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Assign {
        target: String,
        /// `Some(op)` for augmented assignment (`+=` and friends).
        op: Option<BinOp>,
        value: Expr,
    },
    If {
        arms: Vec<(Expr, Vec<Stmt>)>,
        else_body: Option<Vec<Stmt>>,
    },
    While {
        cond: Expr,
        body: Vec<Stmt>,
    },
    For {
        var: String,
        range: RangeArgs,
        body: Vec<Stmt>,
    },
    Return {
        value: Expr,
    },
    Pass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Stmt>,
}

/// A parsed, validated program with an `answer` entry function.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub functions: Vec<FunctionDef>,
    /// Index of the `answer` function in `functions`.
    pub entry: usize,
    /// The `answer` function's parameter names, in order.
    pub param_names: Vec<String>,
    pub node_count: usize,
}

impl Program {
    pub fn entry_fn(&self) -> &FunctionDef {
        &self.functions[self.entry]
    }
}

pub(super) fn count_nodes(functions: &[FunctionDef]) -> usize {
    let mut n = 0;
    for f in functions {
        n += 1;
        for s in &f.body {
            n += stmt_nodes(s);
        }
    }
    n
}

fn stmt_nodes(stmt: &Stmt) -> usize {
    match stmt {
        Stmt::Assign { value, .. } => 1 + expr_nodes(value),
        Stmt::If { arms, else_body } => {
            let mut n = 1;
            for (cond, body) in arms {
                n += expr_nodes(cond);
                n += body.iter().map(stmt_nodes).sum::<usize>();
            }
            if let Some(body) = else_body {
                n += body.iter().map(stmt_nodes).sum::<usize>();
            }
            n
        }
        Stmt::While { cond, body } => {
            1 + expr_nodes(cond) + body.iter().map(stmt_nodes).sum::<usize>()
        }
        Stmt::For { range, body, .. } => {
            let mut n = 1;
            if let Some(e) = &range.start {
                n += expr_nodes(e);
            }
            n += expr_nodes(&range.stop);
            if let Some(e) = &range.step {
                n += expr_nodes(e);
            }
            n + body.iter().map(stmt_nodes).sum::<usize>()
        }
        Stmt::Return { value } => 1 + expr_nodes(value),
        Stmt::Pass => 1,
    }
}

fn expr_nodes(expr: &Expr) -> usize {
    match expr {
        Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) | Expr::Name(_) => 1,
        Expr::List(items) => 1 + items.iter().map(expr_nodes).sum::<usize>(),
        Expr::Unary { operand, .. } => 1 + expr_nodes(operand),
        Expr::Binary { lhs, rhs, .. } => 1 + expr_nodes(lhs) + expr_nodes(rhs),
        Expr::Compare { first, rest } => {
            1 + expr_nodes(first) + rest.iter().map(|(_, e)| expr_nodes(e)).sum::<usize>()
        }
        Expr::BoolChain { terms, .. } => 1 + terms.iter().map(expr_nodes).sum::<usize>(),
        Expr::Index { seq, index } => 1 + expr_nodes(seq) + expr_nodes(index),
        Expr::Call { args, .. } => 1 + args.iter().map(expr_nodes).sum::<usize>(),
    }
}
