//! Deterministic tree-walking evaluator with strict resource budgets.
//!
//! Numeric semantics, pinned:
//! - integers are arbitrary precision, bounded by `max_int_bits` at
//!   arithmetic time;
//! - `/` always yields a real; `//` and `%` use floor semantics (the result
//!   sign follows the divisor), for reals too;
//! - `**` yields an integer for an integer base and non-negative integer
//!   exponent, otherwise a real; `sqrt` always yields a real;
//! - `round` rounds half away from zero to an integer;
//! - mixed integer/real arithmetic promotes to real;
//! - booleans never participate in arithmetic, conditions must be boolean.
//!
//! One step is charged per AST node evaluation, so loop iterations consume
//! steps proportionally.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::ast::{
    BinOp, BoolOp, Builtin, CallTarget, CmpOp, Expr, Program, RangeArgs, Stmt, UnaryOp,
};
use super::value::Value;

/// Resource budgets for one execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecLimits {
    pub max_steps: u64,
    pub max_call_depth: u32,
    pub max_int_bits: u64,
    pub max_seq_len: usize,
}

impl Default for ExecLimits {
    fn default() -> Self {
        ExecLimits {
            max_steps: 1_000_000,
            max_call_depth: 32,
            max_int_bits: 4096,
            max_seq_len: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Steps,
    CallDepth,
    IntBits,
    SeqLen,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Steps => write!(f, "step budget"),
            Budget::CallDepth => write!(f, "call depth"),
            Budget::IntBits => write!(f, "integer magnitude"),
            Budget::SeqLen => write!(f, "sequence length"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecError {
    DivisionByZero,
    TypeMismatch(String),
    BudgetExceeded(Budget),
    /// Control flow fell off the end of a function without `return`.
    NoReturn,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExecError::DivisionByZero => write!(f, "division by zero"),
            ExecError::TypeMismatch(msg) => write!(f, "type mismatch: {msg}"),
            ExecError::BudgetExceeded(b) => write!(f, "execution exceeded the {b} budget"),
            ExecError::NoReturn => write!(f, "control flow fell off the end of a function"),
        }
    }
}

/// Result of one execution: a value or an error, plus the steps consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecOutcome {
    pub result: Result<Value, ExecError>,
    pub steps_used: u64,
}

impl ExecOutcome {
    pub fn value(&self) -> Option<&Value> {
        self.result.as_ref().ok()
    }

    pub fn error(&self) -> Option<&ExecError> {
        self.result.as_ref().err()
    }
}

/// Evaluate `answer(args...)`.
///
/// Deterministic: identical `(prog, args, limits)` always produce an
/// identical outcome. The program is never mutated; executions may run in
/// parallel on shared programs without coordination.
pub fn execute(prog: &Program, args: &[Value], limits: &ExecLimits) -> ExecOutcome {
    let mut interp = Interp {
        prog,
        limits,
        steps: 0,
        int_bound: BigUint::one() << usize::try_from(limits.max_int_bits).unwrap_or(usize::MAX),
    };
    let result = interp.entry(args);
    ExecOutcome { result, steps_used: interp.steps }
}

type Env = Vec<(String, Value)>;

enum Flow {
    Normal,
    Returned(Value),
}

struct Interp<'p> {
    prog: &'p Program,
    limits: &'p ExecLimits,
    steps: u64,
    /// `2^max_int_bits`; integer magnitudes may not exceed it.
    int_bound: BigUint,
}

impl<'p> Interp<'p> {
    fn entry(&mut self, args: &[Value]) -> Result<Value, ExecError> {
        let params = &self.prog.param_names;
        if args.len() != params.len() {
            return Err(ExecError::TypeMismatch(format!(
                "answer takes {} arguments, got {}",
                params.len(),
                args.len()
            )));
        }
        for a in args {
            if !a.is_number() {
                return Err(ExecError::TypeMismatch(format!(
                    "arguments must be numbers, got a {}",
                    a.kind_name()
                )));
            }
        }
        self.call(self.prog.entry, args.to_vec(), 1)
    }

    fn charge(&mut self, n: u64) -> Result<(), ExecError> {
        self.steps = self.steps.saturating_add(n);
        if self.steps > self.limits.max_steps {
            Err(ExecError::BudgetExceeded(Budget::Steps))
        } else {
            Ok(())
        }
    }

    fn check_int(&self, v: BigInt) -> Result<Value, ExecError> {
        if v.magnitude() > &self.int_bound {
            Err(ExecError::BudgetExceeded(Budget::IntBits))
        } else {
            Ok(Value::Int(v))
        }
    }

    fn call(&mut self, fn_idx: usize, args: Vec<Value>, depth: u32) -> Result<Value, ExecError> {
        if depth > self.limits.max_call_depth {
            return Err(ExecError::BudgetExceeded(Budget::CallDepth));
        }
        let func = &self.prog.functions[fn_idx];
        debug_assert_eq!(func.params.len(), args.len());
        let mut env: Env = func.params.iter().cloned().zip(args).collect();
        match self.exec_block(&func.body, &mut env, depth)? {
            Flow::Returned(v) => Ok(v),
            Flow::Normal => Err(ExecError::NoReturn),
        }
    }

    fn exec_block(
        &mut self,
        stmts: &[Stmt],
        env: &mut Env,
        depth: u32,
    ) -> Result<Flow, ExecError> {
        for stmt in stmts {
            if let Flow::Returned(v) = self.exec_stmt(stmt, env, depth)? {
                return Ok(Flow::Returned(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_stmt(&mut self, stmt: &Stmt, env: &mut Env, depth: u32) -> Result<Flow, ExecError> {
        self.charge(1)?;
        match stmt {
            Stmt::Assign { target, op, value } => {
                let rhs = self.eval(value, env, depth)?;
                let new = match op {
                    None => rhs,
                    Some(op) => {
                        let current =
                            lookup(env, target).expect("validated: target defined").clone();
                        self.binary(*op, current, rhs)?
                    }
                };
                assign(env, target, new);
                Ok(Flow::Normal)
            }
            Stmt::If { arms, else_body } => {
                for (cond, body) in arms {
                    if self.eval_condition(cond, env, depth)? {
                        return self.exec_block(body, env, depth);
                    }
                }
                if let Some(body) = else_body {
                    return self.exec_block(body, env, depth);
                }
                Ok(Flow::Normal)
            }
            Stmt::While { cond, body } => {
                while self.eval_condition(cond, env, depth)? {
                    self.charge(1)?;
                    if let Flow::Returned(v) = self.exec_block(body, env, depth)? {
                        return Ok(Flow::Returned(v));
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::For { var, range, body } => {
                let (mut i, stop, step) = self.eval_range(range, env, depth)?;
                loop {
                    let proceed = match step.sign() {
                        Sign::Plus => i < stop,
                        Sign::Minus => i > stop,
                        Sign::NoSign => unreachable!("zero step rejected in eval_range"),
                    };
                    if !proceed {
                        break;
                    }
                    self.charge(1)?;
                    assign(env, var, Value::Int(i.clone()));
                    if let Flow::Returned(v) = self.exec_block(body, env, depth)? {
                        return Ok(Flow::Returned(v));
                    }
                    i += &step;
                }
                Ok(Flow::Normal)
            }
            Stmt::Return { value } => {
                let v = self.eval(value, env, depth)?;
                Ok(Flow::Returned(v))
            }
            Stmt::Pass => Ok(Flow::Normal),
        }
    }

    fn eval_condition(&mut self, cond: &Expr, env: &mut Env, depth: u32) -> Result<bool, ExecError> {
        match self.eval(cond, env, depth)? {
            Value::Bool(b) => Ok(b),
            other => Err(ExecError::TypeMismatch(format!(
                "condition must be a boolean, got a {}",
                other.kind_name()
            ))),
        }
    }

    fn eval_range(
        &mut self,
        range: &RangeArgs,
        env: &mut Env,
        depth: u32,
    ) -> Result<(BigInt, BigInt, BigInt), ExecError> {
        let int_arg = |interp: &mut Self, e: &Expr, env: &mut Env| -> Result<BigInt, ExecError> {
            match interp.eval(e, env, depth)? {
                Value::Int(i) => Ok(i),
                other => Err(ExecError::TypeMismatch(format!(
                    "range(...) arguments must be integers, got a {}",
                    other.kind_name()
                ))),
            }
        };
        let start = match &range.start {
            Some(e) => int_arg(self, e, env)?,
            None => BigInt::zero(),
        };
        let stop = int_arg(self, &range.stop, env)?;
        let step = match &range.step {
            Some(e) => int_arg(self, e, env)?,
            None => BigInt::one(),
        };
        if step.is_zero() {
            return Err(ExecError::TypeMismatch("range(...) step must not be zero".into()));
        }
        Ok((start, stop, step))
    }

    fn eval(&mut self, expr: &Expr, env: &mut Env, depth: u32) -> Result<Value, ExecError> {
        self.charge(1)?;
        match expr {
            Expr::Int(v) => Ok(Value::Int(v.clone())),
            Expr::Real(v) => Ok(Value::Real(*v)),
            Expr::Bool(v) => Ok(Value::Bool(*v)),
            Expr::Name(name) => {
                Ok(lookup(env, name).expect("validated: names resolve").clone())
            }
            Expr::List(items) => {
                if items.len() > self.limits.max_seq_len {
                    return Err(ExecError::BudgetExceeded(Budget::SeqLen));
                }
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    out.push(self.eval(item, env, depth)?);
                }
                Ok(Value::Seq(out))
            }
            Expr::Unary { op, operand } => {
                let v = self.eval(operand, env, depth)?;
                match op {
                    UnaryOp::Neg => match v {
                        Value::Int(i) => Ok(Value::Int(-i)),
                        Value::Real(r) => Ok(Value::Real(-r)),
                        other => Err(ExecError::TypeMismatch(format!(
                            "cannot negate a {}",
                            other.kind_name()
                        ))),
                    },
                    UnaryOp::Pos => match v {
                        v @ (Value::Int(_) | Value::Real(_)) => Ok(v),
                        other => Err(ExecError::TypeMismatch(format!(
                            "unary `+` needs a number, got a {}",
                            other.kind_name()
                        ))),
                    },
                    UnaryOp::Not => match v {
                        Value::Bool(b) => Ok(Value::Bool(!b)),
                        other => Err(ExecError::TypeMismatch(format!(
                            "`not` needs a boolean, got a {}",
                            other.kind_name()
                        ))),
                    },
                }
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = self.eval(lhs, env, depth)?;
                let b = self.eval(rhs, env, depth)?;
                self.binary(*op, a, b)
            }
            Expr::Compare { first, rest } => {
                let mut prev = self.eval(first, env, depth)?;
                for (op, e) in rest {
                    let next = self.eval(e, env, depth)?;
                    if !compare(*op, &prev, &next)? {
                        return Ok(Value::Bool(false));
                    }
                    prev = next;
                }
                Ok(Value::Bool(true))
            }
            Expr::BoolChain { op, terms } => {
                for term in terms {
                    let v = self.eval(term, env, depth)?;
                    let b = match v {
                        Value::Bool(b) => b,
                        other => {
                            return Err(ExecError::TypeMismatch(format!(
                                "`and`/`or` need booleans, got a {}",
                                other.kind_name()
                            )));
                        }
                    };
                    match op {
                        BoolOp::And if !b => return Ok(Value::Bool(false)),
                        BoolOp::Or if b => return Ok(Value::Bool(true)),
                        _ => {}
                    }
                }
                Ok(Value::Bool(matches!(op, BoolOp::And)))
            }
            Expr::Index { seq, index } => {
                let s = self.eval(seq, env, depth)?;
                let i = self.eval(index, env, depth)?;
                let items = match s {
                    Value::Seq(items) => items,
                    other => {
                        return Err(ExecError::TypeMismatch(format!(
                            "cannot index a {}",
                            other.kind_name()
                        )));
                    }
                };
                let idx = match i {
                    Value::Int(i) => i,
                    other => {
                        return Err(ExecError::TypeMismatch(format!(
                            "list indices must be integers, got a {}",
                            other.kind_name()
                        )));
                    }
                };
                let len = BigInt::from(items.len());
                let effective = if idx.sign() == Sign::Minus { &idx + &len } else { idx };
                if effective.sign() == Sign::Minus || effective >= len {
                    return Err(ExecError::TypeMismatch("list index out of range".into()));
                }
                let pos = effective.to_usize().expect("bounded by len");
                Ok(items[pos].clone())
            }
            Expr::Call { target, args, callee } => {
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval(a, env, depth)?);
                }
                match target {
                    CallTarget::Function(idx) => self.call(*idx, values, depth + 1),
                    CallTarget::Builtin(b) => self.builtin(*b, values),
                    CallTarget::Unresolved => {
                        unreachable!("validated: call to `{callee}` resolved")
                    }
                }
            }
        }
    }

    fn binary(&mut self, op: BinOp, a: Value, b: Value) -> Result<Value, ExecError> {
        use Value::{Int, Real};
        if !a.is_number() || !b.is_number() {
            let offender = if a.is_number() { &b } else { &a };
            return Err(ExecError::TypeMismatch(format!(
                "arithmetic needs numbers, got a {}",
                offender.kind_name()
            )));
        }
        match op {
            BinOp::Add => match (a, b) {
                (Int(x), Int(y)) => self.check_int(x + y),
                (x, y) => Ok(Real(as_f64(&x) + as_f64(&y))),
            },
            BinOp::Sub => match (a, b) {
                (Int(x), Int(y)) => self.check_int(x - y),
                (x, y) => Ok(Real(as_f64(&x) - as_f64(&y))),
            },
            BinOp::Mul => match (a, b) {
                (Int(x), Int(y)) => self.check_int(x * y),
                (x, y) => Ok(Real(as_f64(&x) * as_f64(&y))),
            },
            BinOp::Div => {
                if is_zero(&b) {
                    return Err(ExecError::DivisionByZero);
                }
                Ok(Real(as_f64(&a) / as_f64(&b)))
            }
            BinOp::FloorDiv => {
                if is_zero(&b) {
                    return Err(ExecError::DivisionByZero);
                }
                match (a, b) {
                    (Int(x), Int(y)) => self.check_int(x.div_floor(&y)),
                    (x, y) => Ok(Real(libm::floor(as_f64(&x) / as_f64(&y)))),
                }
            }
            BinOp::Mod => {
                if is_zero(&b) {
                    return Err(ExecError::DivisionByZero);
                }
                match (a, b) {
                    (Int(x), Int(y)) => self.check_int(x.mod_floor(&y)),
                    (x, y) => {
                        let (xf, yf) = (as_f64(&x), as_f64(&y));
                        Ok(Real(xf - libm::floor(xf / yf) * yf))
                    }
                }
            }
            BinOp::Pow => self.power(a, b),
        }
    }

    fn power(&mut self, base: Value, exp: Value) -> Result<Value, ExecError> {
        use Value::{Int, Real};
        match (&base, &exp) {
            (Int(b), Int(e)) if e.sign() != Sign::Minus => {
                // Integer power. Guard the cost before computing: for a base
                // of at least two bits the result has at least
                // (bits(b) - 1) * e bits.
                if b.magnitude() <= &BigUint::one() {
                    let v = if b.is_zero() {
                        if e.is_zero() {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    } else if b.is_one() {
                        BigInt::one()
                    } else {
                        // b == -1
                        if e.is_even() {
                            BigInt::one()
                        } else {
                            -BigInt::one()
                        }
                    };
                    return Ok(Int(v));
                }
                let bits = b.magnitude().bits();
                let e_u64 = e.to_u64().unwrap_or(u64::MAX);
                if (bits - 1).saturating_mul(e_u64) > self.limits.max_int_bits {
                    return Err(ExecError::BudgetExceeded(Budget::IntBits));
                }
                let e_u32 = u32::try_from(e_u64)
                    .map_err(|_| ExecError::BudgetExceeded(Budget::IntBits))?;
                self.check_int(num_traits::Pow::pow(b, e_u32))
            }
            (Int(_) | Real(_), Int(_) | Real(_)) => {
                Ok(Real(libm::pow(as_f64(&base), as_f64(&exp))))
            }
            _ => {
                let offender = if base.is_number() { &exp } else { &base };
                Err(ExecError::TypeMismatch(format!(
                    "arithmetic needs numbers, got a {}",
                    offender.kind_name()
                )))
            }
        }
    }

    fn builtin(&mut self, b: Builtin, mut args: Vec<Value>) -> Result<Value, ExecError> {
        use Value::{Int, Real};
        let one = |args: &mut Vec<Value>| args.pop().expect("validated arity");
        match b {
            Builtin::Abs => match one(&mut args) {
                Int(i) => Ok(Int(i.abs())),
                Real(r) => Ok(Real(libm::fabs(r))),
                other => Err(type_err("abs", &other)),
            },
            Builtin::Sqrt => match one(&mut args) {
                v @ (Int(_) | Real(_)) => Ok(Real(libm::sqrt(as_f64(&v)))),
                other => Err(type_err("sqrt", &other)),
            },
            Builtin::Float => match one(&mut args) {
                v @ (Int(_) | Real(_)) => Ok(Real(as_f64(&v))),
                other => Err(type_err("float", &other)),
            },
            Builtin::Int => match one(&mut args) {
                Int(i) => Ok(Int(i)),
                Real(r) => self.real_to_int("int", libm::trunc(r)),
                other => Err(type_err("int", &other)),
            },
            Builtin::Round => match one(&mut args) {
                Int(i) => Ok(Int(i)),
                // libm::round rounds half away from zero.
                Real(r) => self.real_to_int("round", libm::round(r)),
                other => Err(type_err("round", &other)),
            },
            Builtin::Floor => match one(&mut args) {
                Int(i) => Ok(Int(i)),
                Real(r) => self.real_to_int("floor", libm::floor(r)),
                other => Err(type_err("floor", &other)),
            },
            Builtin::Ceil => match one(&mut args) {
                Int(i) => Ok(Int(i)),
                Real(r) => self.real_to_int("ceil", libm::ceil(r)),
                other => Err(type_err("ceil", &other)),
            },
            Builtin::Pow => {
                let e = args.pop().expect("validated arity");
                let b = args.pop().expect("validated arity");
                self.power(b, e)
            }
            Builtin::Len => match one(&mut args) {
                Value::Seq(items) => Ok(Int(BigInt::from(items.len()))),
                other => Err(ExecError::TypeMismatch(format!(
                    "len() needs a list, got a {}",
                    other.kind_name()
                ))),
            },
            Builtin::Sum => match one(&mut args) {
                Value::Seq(items) => {
                    let mut int_acc = BigInt::zero();
                    let mut real_acc = 0.0f64;
                    let mut any_real = false;
                    for item in &items {
                        match item {
                            Int(i) => int_acc += i,
                            Real(r) => {
                                any_real = true;
                                real_acc += r;
                            }
                            other => {
                                return Err(ExecError::TypeMismatch(format!(
                                    "sum() needs numbers, got a {}",
                                    other.kind_name()
                                )));
                            }
                        }
                    }
                    if any_real {
                        Ok(Real(big_to_f64(&int_acc) + real_acc))
                    } else {
                        self.check_int(int_acc)
                    }
                }
                other => Err(ExecError::TypeMismatch(format!(
                    "sum() needs a list, got a {}",
                    other.kind_name()
                ))),
            },
            Builtin::Min | Builtin::Max => {
                let name = if b == Builtin::Min { "min" } else { "max" };
                let pool: Vec<Value> = if args.len() == 1 {
                    match args.pop().unwrap() {
                        Value::Seq(items) => items,
                        v @ (Int(_) | Real(_)) => {
                            // min(x) over a single number mirrors host-language
                            // behavior of rejecting non-iterables.
                            return Err(ExecError::TypeMismatch(format!(
                                "{name}() with one argument needs a list, got a {}",
                                v.kind_name()
                            )));
                        }
                        other => return Err(type_err(name, &other)),
                    }
                } else {
                    args
                };
                if pool.is_empty() {
                    return Err(ExecError::TypeMismatch(format!("{name}() of an empty list")));
                }
                let mut best: Option<Value> = None;
                for v in pool {
                    if !v.is_number() {
                        return Err(type_err(name, &v));
                    }
                    best = Some(match best {
                        None => v,
                        Some(cur) => {
                            let replace = if b == Builtin::Min {
                                compare(CmpOp::Lt, &v, &cur)?
                            } else {
                                compare(CmpOp::Gt, &v, &cur)?
                            };
                            if replace {
                                v
                            } else {
                                cur
                            }
                        }
                    });
                }
                Ok(best.expect("non-empty pool"))
            }
        }
    }

    fn real_to_int(&self, what: &str, integral: f64) -> Result<Value, ExecError> {
        if !integral.is_finite() {
            return Err(ExecError::TypeMismatch(format!(
                "{what}() of a non-finite real"
            )));
        }
        let big = BigInt::from_f64(integral).expect("finite integral f64");
        self.check_int(big)
    }
}

fn type_err(name: &str, got: &Value) -> ExecError {
    ExecError::TypeMismatch(format!("{name}() needs a number, got a {}", got.kind_name()))
}

fn lookup<'e>(env: &'e Env, name: &str) -> Option<&'e Value> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
}

fn assign(env: &mut Env, name: &str, value: Value) {
    if let Some(slot) = env.iter_mut().rev().find(|(n, _)| n == name) {
        slot.1 = value;
    } else {
        env.push((String::from(name), value));
    }
}

fn is_zero(v: &Value) -> bool {
    match v {
        Value::Int(i) => i.is_zero(),
        Value::Real(r) => *r == 0.0,
        _ => false,
    }
}

fn big_to_f64(i: &BigInt) -> f64 {
    i.to_f64().unwrap_or(match i.sign() {
        Sign::Minus => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    })
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Int(i) => big_to_f64(i),
        Value::Real(r) => *r,
        _ => unreachable!("callers check numberness"),
    }
}

/// Numeric-aware comparison; orderings are defined for numbers only,
/// equality additionally for booleans and element-wise for sequences.
fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<bool, ExecError> {
    use Value::{Bool, Int, Real, Seq};
    match (a, b) {
        (Int(x), Int(y)) => Ok(cmp_ordering(op, x.cmp(y))),
        (Int(_) | Real(_), Int(_) | Real(_)) => {
            let (xf, yf) = (as_f64(a), as_f64(b));
            Ok(match op {
                CmpOp::Eq => xf == yf,
                CmpOp::Ne => xf != yf,
                CmpOp::Lt => xf < yf,
                CmpOp::Le => xf <= yf,
                CmpOp::Gt => xf > yf,
                CmpOp::Ge => xf >= yf,
            })
        }
        (Bool(x), Bool(y)) => match op {
            CmpOp::Eq => Ok(x == y),
            CmpOp::Ne => Ok(x != y),
            _ => Err(ExecError::TypeMismatch(
                "booleans support `==` and `!=` only".into(),
            )),
        },
        (Seq(x), Seq(y)) => match op {
            CmpOp::Eq | CmpOp::Ne => {
                let mut equal = x.len() == y.len();
                if equal {
                    for (xe, ye) in x.iter().zip(y) {
                        if !values_equal(xe, ye)? {
                            equal = false;
                            break;
                        }
                    }
                }
                Ok(if op == CmpOp::Eq { equal } else { !equal })
            }
            _ => Err(ExecError::TypeMismatch(
                "lists support `==` and `!=` only".into(),
            )),
        },
        _ => Err(ExecError::TypeMismatch(format!(
            "cannot compare a {} with a {}",
            a.kind_name(),
            b.kind_name()
        ))),
    }
}

fn values_equal(a: &Value, b: &Value) -> Result<bool, ExecError> {
    compare(CmpOp::Eq, a, b)
}

fn cmp_ordering(op: CmpOp, ord: core::cmp::Ordering) -> bool {
    use core::cmp::Ordering::*;
    match op {
        CmpOp::Eq => ord == Equal,
        CmpOp::Ne => ord != Equal,
        CmpOp::Lt => ord == Less,
        CmpOp::Le => ord != Greater,
        CmpOp::Gt => ord == Greater,
        CmpOp::Ge => ord != Less,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, SourceProgram};
    use super::*;
    use crate::symprog::format_value;

    fn run(src: &str, args: &[Value]) -> ExecOutcome {
        let prog = parse(&SourceProgram::fixture(src)).unwrap();
        execute(&prog, args, &ExecLimits::default())
    }

    fn eval1(expr_src: &str, arg: Value) -> Result<Value, ExecError> {
        run(&alloc::format!("def answer(x):\n    return {expr_src}\n"), &[arg]).result
    }

    fn answer_str(src: &str, args: &[Value]) -> String {
        format_value(&run(src, args).result.unwrap()).unwrap()
    }

    fn int(v: i64) -> Value {
        Value::int(v)
    }

    #[test]
    fn identity() {
        assert_eq!(eval1("x", int(7)).unwrap(), int(7));
    }

    #[test]
    fn egg_program() {
        let src = "def answer(e, eaten, baked, price):\n    return (e - eaten - baked) * price\n";
        assert_eq!(
            answer_str(src, &[int(16), int(3), int(4), int(2)]),
            "18"
        );
    }

    #[test]
    fn true_division_always_real() {
        assert_eq!(eval1("x / 2", int(7)).unwrap(), Value::Real(3.5));
        assert_eq!(eval1("x / 2", int(8)).unwrap(), Value::Real(4.0));
    }

    #[test]
    fn floor_division_sign_follows_divisor() {
        assert_eq!(eval1("x // 2", int(7)).unwrap(), int(3));
        assert_eq!(eval1("x // 2", int(-7)).unwrap(), int(-4));
        assert_eq!(eval1("x // -2", int(7)).unwrap(), int(-4));
        assert_eq!(eval1("x // -2", int(-7)).unwrap(), int(3));
        assert_eq!(eval1("x // 2.0", int(7)).unwrap(), Value::Real(3.0));
    }

    #[test]
    fn modulo_sign_follows_divisor() {
        assert_eq!(eval1("x % 3", int(7)).unwrap(), int(1));
        assert_eq!(eval1("x % 3", int(-7)).unwrap(), int(2));
        assert_eq!(eval1("x % -3", int(7)).unwrap(), int(-2));
        assert_eq!(eval1("x % 2.5", int(7)).unwrap(), Value::Real(4.5));
    }

    #[test]
    fn power_integer_vs_real() {
        assert_eq!(eval1("x ** 10", int(2)).unwrap(), int(1024));
        assert_eq!(eval1("x ** -1", int(2)).unwrap(), Value::Real(0.5));
        assert_eq!(eval1("x ** 0.5", int(9)).unwrap(), Value::Real(3.0));
        assert_eq!(eval1("x ** 0", int(0)).unwrap(), int(1));
        assert_eq!(eval1("x ** 2", Value::Real(1.5)).unwrap(), Value::Real(2.25));
    }

    #[test]
    fn power_precedence_and_associativity() {
        // Right-associative, binds tighter than unary minus on the left.
        assert_eq!(eval1("x ** 3 ** 2", int(2)).unwrap(), int(512));
        assert_eq!(eval1("-x ** 2", int(2)).unwrap(), int(-4));
        assert_eq!(eval1("2 ** -x", int(1)).unwrap(), Value::Real(0.5));
    }

    #[test]
    fn mixed_arithmetic_promotes_to_real() {
        assert_eq!(eval1("x + 0.5", int(2)).unwrap(), Value::Real(2.5));
        assert_eq!(eval1("x * 1.5", int(4)).unwrap(), Value::Real(6.0));
    }

    #[test]
    fn division_by_zero_variants() {
        assert_eq!(eval1("x / 0", int(1)).unwrap_err(), ExecError::DivisionByZero);
        assert_eq!(eval1("x / 0.0", int(1)).unwrap_err(), ExecError::DivisionByZero);
        assert_eq!(eval1("x // 0", int(1)).unwrap_err(), ExecError::DivisionByZero);
        assert_eq!(eval1("x % 0", int(1)).unwrap_err(), ExecError::DivisionByZero);
    }

    #[test]
    fn booleans_do_not_join_arithmetic() {
        assert!(matches!(
            eval1("x + True", int(1)).unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
        assert!(matches!(
            eval1("-(x > 0)", int(1)).unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
    }

    #[test]
    fn conditions_must_be_boolean() {
        let src = "def answer(x):\n    if x:\n        return 1\n    return 0\n";
        assert!(matches!(
            run(src, &[int(1)]).result.unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
    }

    #[test]
    fn comparison_chaining_short_circuits() {
        assert_eq!(eval1("0 < x < 10", int(5)).unwrap(), Value::Bool(true));
        assert_eq!(eval1("0 < x < 10", int(15)).unwrap(), Value::Bool(false));
        // The chain stops before evaluating the failing tail.
        assert_eq!(eval1("x < 0 < 1 / 0", int(5)).unwrap(), Value::Bool(false));
    }

    #[test]
    fn and_or_short_circuit() {
        assert_eq!(eval1("x > 0 and x < 10", int(5)).unwrap(), Value::Bool(true));
        assert_eq!(eval1("x < 0 and 1 / 0 > 0", int(5)).unwrap(), Value::Bool(false));
        assert_eq!(eval1("x > 0 or 1 / 0 > 0", int(5)).unwrap(), Value::Bool(true));
        assert!(matches!(
            eval1("x and True", int(1)).unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
    }

    #[test]
    fn cross_kind_numeric_comparison() {
        assert_eq!(eval1("x == 1.0", int(1)).unwrap(), Value::Bool(true));
        assert_eq!(eval1("x >= 0.5", int(1)).unwrap(), Value::Bool(true));
    }

    #[test]
    fn while_loop_accumulates() {
        let src = concat!(
            "def answer(n):\n",
            "    total = 0\n",
            "    i = 1\n",
            "    while i <= n:\n",
            "        total += i\n",
            "        i += 1\n",
            "    return total\n",
        );
        assert_eq!(answer_str(src, &[int(100)]), "5050");
    }

    #[test]
    fn for_range_variants() {
        let src = concat!(
            "def answer(n):\n",
            "    total = 0\n",
            "    for i in range(n):\n",
            "        total += i\n",
            "    for i in range(2, n):\n",
            "        total += 1\n",
            "    for i in range(n, 0, -2):\n",
            "        total += i\n",
            "    return total\n",
        );
        // n=6: 15 + 4 + (6+4+2)=12 -> 31
        assert_eq!(answer_str(src, &[int(6)]), "31");
    }

    #[test]
    fn range_rejects_non_integers_and_zero_step() {
        let src = "def answer(n):\n    for i in range(n, 0, 0):\n        pass\n    return 0\n";
        assert!(matches!(
            run(src, &[int(5)]).result.unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
        let src2 = "def answer(n):\n    total = 0\n    for i in range(n / 2):\n        total += 1\n    return total\n";
        assert!(matches!(
            run(src2, &[int(5)]).result.unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
    }

    #[test]
    fn unbounded_loop_hits_step_budget() {
        let src = "def answer(x):\n    while True:\n        pass\n    return x\n";
        let out = run(src, &[int(1)]);
        assert_eq!(out.result.unwrap_err(), ExecError::BudgetExceeded(Budget::Steps));
        assert!(out.steps_used > ExecLimits::default().max_steps - 4);
    }

    #[test]
    fn recursion_depth_budget() {
        let src = "def answer(n):\n    return answer(n + 1)\n";
        assert_eq!(
            run(src, &[int(0)]).result.unwrap_err(),
            ExecError::BudgetExceeded(Budget::CallDepth)
        );
    }

    #[test]
    fn mutual_recursion_works() {
        let src = concat!(
            "def is_even(n):\n",
            "    if n == 0:\n",
            "        return True\n",
            "    return is_odd(n - 1)\n",
            "\n",
            "def is_odd(n):\n",
            "    if n == 0:\n",
            "        return False\n",
            "    return is_even(n - 1)\n",
            "\n",
            "def answer(n):\n",
            "    if is_even(n):\n",
            "        return 1\n",
            "    return 0\n",
        );
        assert_eq!(answer_str(src, &[int(10)]), "1");
        assert_eq!(answer_str(src, &[int(11)]), "0");
    }

    #[test]
    fn integer_bit_budget() {
        let src = concat!(
            "def answer(n):\n",
            "    v = 2\n",
            "    for i in range(n):\n",
            "        v = v * v\n",
            "    return v\n",
        );
        // 2^(2^13) needs 8193 bits > 4096.
        assert_eq!(
            run(src, &[int(13)]).result.unwrap_err(),
            ExecError::BudgetExceeded(Budget::IntBits)
        );
        // Direct pow with a huge exponent is cut off before computing.
        assert_eq!(
            eval1("x ** 100000", int(2)).unwrap_err(),
            ExecError::BudgetExceeded(Budget::IntBits)
        );
        // At the boundary, 2^4096 itself is allowed (magnitude <= 2^4096).
        assert!(eval1("x ** 4096", int(2)).is_ok());
        assert!(eval1("x ** 4097", int(2)).is_err());
    }

    #[test]
    fn no_return_falls_off_the_end() {
        let src = "def answer(x):\n    y = x + 1\n    return y\n";
        assert!(run(src, &[int(1)]).result.is_ok());
        let src2 = "def answer(x):\n    if x > 0:\n        return x\n    y = x\n";
        assert_eq!(run(src2, &[int(-1)]).result.unwrap_err(), ExecError::NoReturn);
    }

    #[test]
    fn lists_index_sum_len_minmax() {
        let src = concat!(
            "def answer(a, b, c):\n",
            "    values = [a, b, c]\n",
            "    return sum(values) + len(values) + min(values) + max(values) + values[0] + values[-1]\n",
        );
        // 2+7+4=13, len 3, min 2, max 7, first 2, last 4 -> 31
        assert_eq!(answer_str(src, &[int(2), int(7), int(4)]), "31");
    }

    #[test]
    fn index_out_of_range() {
        let src = "def answer(a):\n    values = [a]\n    return values[2]\n";
        assert!(matches!(
            run(src, &[int(1)]).result.unwrap_err(),
            ExecError::TypeMismatch(_)
        ));
    }

    #[test]
    fn builtin_semantics() {
        assert_eq!(eval1("abs(x)", int(-5)).unwrap(), int(5));
        assert_eq!(eval1("abs(x)", Value::Real(-2.5)).unwrap(), Value::Real(2.5));
        assert_eq!(eval1("round(x)", Value::Real(2.5)).unwrap(), int(3));
        assert_eq!(eval1("round(x)", Value::Real(-2.5)).unwrap(), int(-3));
        assert_eq!(eval1("round(x)", Value::Real(2.4)).unwrap(), int(2));
        assert_eq!(eval1("int(x)", Value::Real(2.9)).unwrap(), int(2));
        assert_eq!(eval1("int(x)", Value::Real(-2.9)).unwrap(), int(-2));
        assert_eq!(eval1("float(x)", int(3)).unwrap(), Value::Real(3.0));
        assert_eq!(eval1("floor(x)", Value::Real(2.7)).unwrap(), int(2));
        assert_eq!(eval1("floor(x)", Value::Real(-2.1)).unwrap(), int(-3));
        assert_eq!(eval1("ceil(x)", Value::Real(2.1)).unwrap(), int(3));
        assert_eq!(eval1("ceil(x)", Value::Real(-2.7)).unwrap(), int(-2));
        assert_eq!(eval1("sqrt(x)", int(16)).unwrap(), Value::Real(4.0));
        assert_eq!(eval1("pow(x, 3)", int(2)).unwrap(), int(8));
        assert_eq!(eval1("min(x, 2, 8)", int(5)).unwrap(), int(2));
        assert_eq!(eval1("max(x, 2.5)", int(2)).unwrap(), Value::Real(2.5));
    }

    #[test]
    fn sqrt_of_negative_is_nan_then_unformattable() {
        let v = eval1("sqrt(x)", int(-1)).unwrap();
        match &v {
            Value::Real(r) => assert!(r.is_nan()),
            other => panic!("expected real, got {other:?}"),
        }
        assert!(format_value(&v).is_err());
    }

    #[test]
    fn float_overflow_is_a_value_not_an_error() {
        let v = eval1("x * 1e308", Value::Real(10.0)).unwrap();
        match v {
            Value::Real(r) => assert!(r.is_infinite()),
            other => panic!("expected real, got {other:?}"),
        }
    }

    #[test]
    fn argument_preconditions() {
        let prog = parse(&SourceProgram::fixture("def answer(x):\n    return x\n")).unwrap();
        let out = execute(&prog, &[], &ExecLimits::default());
        assert!(matches!(out.result.unwrap_err(), ExecError::TypeMismatch(_)));
        let out = execute(&prog, &[Value::Bool(true)], &ExecLimits::default());
        assert!(matches!(out.result.unwrap_err(), ExecError::TypeMismatch(_)));
    }

    #[test]
    fn determinism_same_outcome_and_steps() {
        let src = concat!(
            "def answer(n):\n",
            "    total = 0\n",
            "    for i in range(n):\n",
            "        total += i * i\n",
            "    return total\n",
        );
        let prog = parse(&SourceProgram::fixture(src)).unwrap();
        let a = execute(&prog, &[int(50)], &ExecLimits::default());
        let b = execute(&prog, &[int(50)], &ExecLimits::default());
        assert_eq!(a, b);
    }

    #[test]
    fn shadowing_a_builtin_with_a_local_is_fine() {
        let src = "def answer(x):\n    sum = x + 1\n    return sum\n";
        assert_eq!(answer_str(src, &[int(4)]), "5");
    }
}
