//! Compile gate: program-shape checks, call resolution, and a definite
//! assignment analysis.
//!
//! The analysis is conservative: a local counts as defined only when every
//! path to the use assigns it. That guarantees execution never reads an
//! unbound name, at the cost of rejecting a few programs that would happen
//! to work at runtime.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{count_nodes, Builtin, CallTarget, Expr, FunctionDef, Program, Stmt};
use super::FrontendError;

pub(super) fn validate(
    mut functions: Vec<FunctionDef>,
    max_nodes: usize,
) -> Result<Program, FrontendError> {
    let nodes = count_nodes(&functions);
    if nodes > max_nodes {
        return Err(FrontendError::validate(format!(
            "program has {nodes} AST nodes, exceeding the limit of {max_nodes}"
        )));
    }

    let mut names: Vec<String> = Vec::new();
    for f in &functions {
        if names.iter().any(|n| n == &f.name) {
            return Err(FrontendError::validate(format!(
                "function `{}` is defined more than once",
                f.name
            )));
        }
        names.push(f.name.clone());
    }
    let entry = names
        .iter()
        .position(|n| n == "answer")
        .ok_or_else(|| FrontendError::validate("program must contain a function called 'answer'"))?;
    if functions[entry].params.is_empty() {
        return Err(FrontendError::validate(
            "`answer` must accept at least one parameter",
        ));
    }

    for f in &functions {
        let mut seen = BTreeSet::new();
        for p in &f.params {
            if !seen.insert(p.as_str()) {
                return Err(FrontendError::validate(format!(
                    "function `{}` repeats parameter `{p}`",
                    f.name
                )));
            }
            if names.iter().any(|n| n == p) {
                return Err(FrontendError::validate(format!(
                    "parameter `{p}` shadows a function of the same name"
                )));
            }
        }
    }

    let fn_names = names;
    for f in &mut functions {
        let fname = f.name.clone();
        let params: BTreeSet<String> = f.params.iter().cloned().collect();
        let mut flow = Flow::Live(params);
        check_block(&mut f.body, &mut flow, &fn_names, &fname)?;
    }

    // Static arity checks; with these, execution cannot hit a call-shape
    // error for program functions.
    let arities: Vec<usize> = functions.iter().map(|f| f.params.len()).collect();
    for f in &functions {
        check_arity_block(&f.body, &arities)?;
    }

    let param_names = functions[entry].params.clone();
    Ok(Program { functions, entry, param_names, node_count: nodes })
}

/// Definite-assignment state at a program point.
enum Flow {
    /// Reachable with this set of definitely-assigned locals (params included).
    Live(BTreeSet<String>),
    /// Past a `return` on every path.
    Terminated,
}

fn check_block(
    stmts: &mut [Stmt],
    flow: &mut Flow,
    fn_names: &[String],
    current_fn: &str,
) -> Result<(), FrontendError> {
    for stmt in stmts {
        check_stmt(stmt, flow, fn_names, current_fn)?;
    }
    Ok(())
}

fn check_stmt(
    stmt: &mut Stmt,
    flow: &mut Flow,
    fn_names: &[String],
    current_fn: &str,
) -> Result<(), FrontendError> {
    // Names inside unreachable code still get their calls resolved (the
    // resolver walks every expression), but definedness is not enforced
    // there: it can never be read at runtime.
    match stmt {
        Stmt::Assign { target, op, value } => {
            resolve_expr(value, fn_names)?;
            if fn_names.iter().any(|n| n == target) {
                return Err(FrontendError::validate(format!(
                    "cannot assign to `{target}`: it names a function"
                )));
            }
            if let Flow::Live(defined) = flow {
                check_names_expr(value, defined, current_fn)?;
                if op.is_some() && !defined.contains(target) {
                    return Err(FrontendError::validate(format!(
                        "augmented assignment reads `{target}` before it is assigned in `{current_fn}`"
                    )));
                }
                defined.insert(target.clone());
            }
        }
        Stmt::If { arms, else_body } => {
            let mut outcomes: Vec<Flow> = Vec::new();
            for (cond, body) in arms.iter_mut() {
                resolve_expr(cond, fn_names)?;
                if let Flow::Live(defined) = flow {
                    check_names_expr(cond, defined, current_fn)?;
                }
                let mut branch = flow.clone_state();
                check_block(body, &mut branch, fn_names, current_fn)?;
                outcomes.push(branch);
            }
            match else_body {
                Some(body) => {
                    let mut branch = flow.clone_state();
                    check_block(body, &mut branch, fn_names, current_fn)?;
                    outcomes.push(branch);
                }
                None => outcomes.push(flow.clone_state()),
            }
            *flow = Flow::merge(outcomes);
        }
        Stmt::While { cond, body } => {
            resolve_expr(cond, fn_names)?;
            if let Flow::Live(defined) = flow {
                check_names_expr(cond, defined, current_fn)?;
            }
            // The body may run zero times; its assignments do not escape.
            let mut branch = flow.clone_state();
            check_block(body, &mut branch, fn_names, current_fn)?;
        }
        Stmt::For { var, range, body } => {
            if fn_names.iter().any(|n| n == var) {
                return Err(FrontendError::validate(format!(
                    "cannot assign to `{var}`: it names a function"
                )));
            }
            if let Some(e) = range.start.as_mut() {
                resolve_expr(e, fn_names)?;
                if let Flow::Live(defined) = flow {
                    check_names_expr(e, defined, current_fn)?;
                }
            }
            resolve_expr(&mut range.stop, fn_names)?;
            if let Flow::Live(defined) = flow {
                check_names_expr(&range.stop, defined, current_fn)?;
            }
            if let Some(e) = range.step.as_mut() {
                resolve_expr(e, fn_names)?;
                if let Flow::Live(defined) = flow {
                    check_names_expr(e, defined, current_fn)?;
                }
            }
            // The body may run zero times: the loop variable and body
            // assignments are visible inside the body only.
            let mut branch = flow.clone_state();
            if let Flow::Live(defined) = &mut branch {
                defined.insert(var.clone());
            }
            check_block(body, &mut branch, fn_names, current_fn)?;
        }
        Stmt::Return { value } => {
            resolve_expr(value, fn_names)?;
            if let Flow::Live(defined) = flow {
                check_names_expr(value, defined, current_fn)?;
            }
            *flow = Flow::Terminated;
        }
        Stmt::Pass => {}
    }
    Ok(())
}

impl Flow {
    fn clone_state(&self) -> Flow {
        match self {
            Flow::Live(set) => Flow::Live(set.clone()),
            Flow::Terminated => Flow::Terminated,
        }
    }

    fn merge(outcomes: Vec<Flow>) -> Flow {
        let mut live: Option<BTreeSet<String>> = None;
        for outcome in outcomes {
            if let Flow::Live(set) = outcome {
                live = Some(match live {
                    None => set,
                    Some(acc) => acc.intersection(&set).cloned().collect(),
                });
            }
        }
        match live {
            Some(set) => Flow::Live(set),
            None => Flow::Terminated,
        }
    }
}

fn check_names_expr(
    expr: &Expr,
    defined: &BTreeSet<String>,
    current_fn: &str,
) -> Result<(), FrontendError> {
    match expr {
        Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) => Ok(()),
        Expr::Name(name) => {
            if defined.contains(name) {
                Ok(())
            } else {
                Err(FrontendError::validate(format!(
                    "name `{name}` is not defined at its use in `{current_fn}`"
                )))
            }
        }
        Expr::List(items) => {
            for item in items {
                check_names_expr(item, defined, current_fn)?;
            }
            Ok(())
        }
        Expr::Unary { operand, .. } => check_names_expr(operand, defined, current_fn),
        Expr::Binary { lhs, rhs, .. } => {
            check_names_expr(lhs, defined, current_fn)?;
            check_names_expr(rhs, defined, current_fn)
        }
        Expr::Compare { first, rest } => {
            check_names_expr(first, defined, current_fn)?;
            for (_, e) in rest {
                check_names_expr(e, defined, current_fn)?;
            }
            Ok(())
        }
        Expr::BoolChain { terms, .. } => {
            for t in terms {
                check_names_expr(t, defined, current_fn)?;
            }
            Ok(())
        }
        Expr::Index { seq, index } => {
            check_names_expr(seq, defined, current_fn)?;
            check_names_expr(index, defined, current_fn)
        }
        Expr::Call { args, .. } => {
            // The callee is resolved separately; only arguments are locals.
            for a in args {
                check_names_expr(a, defined, current_fn)?;
            }
            Ok(())
        }
    }
}

/// Resolve call targets and reject value-position uses of function names.
fn resolve_expr(expr: &mut Expr, fn_names: &[String]) -> Result<(), FrontendError> {
    match expr {
        Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) => Ok(()),
        Expr::Name(name) => {
            if fn_names.iter().any(|n| n == name) {
                return Err(FrontendError::validate(format!(
                    "function `{name}` used as a value; functions may only be called"
                )));
            }
            Ok(())
        }
        Expr::List(items) => {
            for item in items {
                resolve_expr(item, fn_names)?;
            }
            Ok(())
        }
        Expr::Unary { operand, .. } => resolve_expr(operand, fn_names),
        Expr::Binary { lhs, rhs, .. } => {
            resolve_expr(lhs, fn_names)?;
            resolve_expr(rhs, fn_names)
        }
        Expr::Compare { first, rest } => {
            resolve_expr(first, fn_names)?;
            for (_, e) in rest {
                resolve_expr(e, fn_names)?;
            }
            Ok(())
        }
        Expr::BoolChain { terms, .. } => {
            for t in terms {
                resolve_expr(t, fn_names)?;
            }
            Ok(())
        }
        Expr::Index { seq, index } => {
            resolve_expr(seq, fn_names)?;
            resolve_expr(index, fn_names)
        }
        Expr::Call { callee, target, args } => {
            for a in args {
                resolve_expr(a, fn_names)?;
            }
            if let Some(idx) = fn_names.iter().position(|n| n == callee) {
                *target = CallTarget::Function(idx);
            } else if let Some(b) = Builtin::from_name(callee) {
                *target = CallTarget::Builtin(b);
            } else {
                return Err(FrontendError::validate(format!(
                    "call to unknown function `{callee}` (not defined in the program and not a whitelisted builtin)"
                )));
            }
            Ok(())
        }
    }
}

fn check_arity_block(stmts: &[Stmt], arities: &[usize]) -> Result<(), FrontendError> {
    for stmt in stmts {
        match stmt {
            Stmt::Assign { value, .. } | Stmt::Return { value } => {
                check_arity_expr(value, arities)?;
            }
            Stmt::If { arms, else_body } => {
                for (cond, body) in arms {
                    check_arity_expr(cond, arities)?;
                    check_arity_block(body, arities)?;
                }
                if let Some(body) = else_body {
                    check_arity_block(body, arities)?;
                }
            }
            Stmt::While { cond, body } => {
                check_arity_expr(cond, arities)?;
                check_arity_block(body, arities)?;
            }
            Stmt::For { range, body, .. } => {
                if let Some(e) = &range.start {
                    check_arity_expr(e, arities)?;
                }
                check_arity_expr(&range.stop, arities)?;
                if let Some(e) = &range.step {
                    check_arity_expr(e, arities)?;
                }
                check_arity_block(body, arities)?;
            }
            Stmt::Pass => {}
        }
    }
    Ok(())
}

fn check_arity_expr(expr: &Expr, arities: &[usize]) -> Result<(), FrontendError> {
    match expr {
        Expr::Int(_) | Expr::Real(_) | Expr::Bool(_) | Expr::Name(_) => Ok(()),
        Expr::List(items) => {
            for item in items {
                check_arity_expr(item, arities)?;
            }
            Ok(())
        }
        Expr::Unary { operand, .. } => check_arity_expr(operand, arities),
        Expr::Binary { lhs, rhs, .. } => {
            check_arity_expr(lhs, arities)?;
            check_arity_expr(rhs, arities)
        }
        Expr::Compare { first, rest } => {
            check_arity_expr(first, arities)?;
            for (_, e) in rest {
                check_arity_expr(e, arities)?;
            }
            Ok(())
        }
        Expr::BoolChain { terms, .. } => {
            for t in terms {
                check_arity_expr(t, arities)?;
            }
            Ok(())
        }
        Expr::Index { seq, index } => {
            check_arity_expr(seq, arities)?;
            check_arity_expr(index, arities)
        }
        Expr::Call { callee, target, args } => {
            for a in args {
                check_arity_expr(a, arities)?;
            }
            let ok = match target {
                CallTarget::Function(idx) => args.len() == arities[*idx],
                CallTarget::Builtin(b) => match b {
                    Builtin::Abs
                    | Builtin::Round
                    | Builtin::Int
                    | Builtin::Float
                    | Builtin::Sum
                    | Builtin::Len
                    | Builtin::Floor
                    | Builtin::Ceil
                    | Builtin::Sqrt => args.len() == 1,
                    Builtin::Pow => args.len() == 2,
                    Builtin::Min | Builtin::Max => !args.is_empty(),
                },
                CallTarget::Unresolved => false,
            };
            if !ok {
                return Err(FrontendError::validate(format!(
                    "call to `{callee}` has the wrong number of arguments"
                )));
            }
            Ok(())
        }
    }
}
