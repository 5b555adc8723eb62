//! Runtime values and the canonical answer rendering.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

/// A runtime value. Integers are arbitrary precision (bounded at arithmetic
/// time by the execution budget), reals are 64-bit binary floats.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(BigInt),
    Real(f64),
    Bool(bool),
    Seq(Vec<Value>),
}

impl Value {
    pub fn int(v: impl Into<BigInt>) -> Value {
        Value::Int(v.into())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Real(_) => "real",
            Value::Bool(_) => "boolean",
            Value::Seq(_) => "sequence",
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Real(_))
    }

    /// True for integers and for finite reals.
    pub fn is_finite_number(&self) -> bool {
        match self {
            Value::Int(_) => true,
            Value::Real(r) => r.is_finite(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// Programs must return a number; booleans and sequences have no
    /// canonical answer string.
    NonNumeric { kind: &'static str },
    /// Infinities and NaN have no decimal representation.
    NonFinite,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::NonNumeric { kind } => {
                write!(f, "cannot format a {kind} as an answer; a number is required")
            }
            FormatError::NonFinite => write!(f, "cannot format a non-finite real as an answer"),
        }
    }
}

/// Render a numeric value as its canonical answer string.
///
/// Integers print in plain decimal with a leading `-` for negatives, never
/// with a decimal point, exponent, or separators. Reals print the shortest
/// decimal that round-trips to the same 64-bit float (integral reals thus
/// print like integers: `36.0` renders as `36`).
pub fn format_value(v: &Value) -> Result<String, FormatError> {
    match v {
        Value::Int(i) => Ok(i.to_string()),
        Value::Real(r) => {
            if !r.is_finite() {
                return Err(FormatError::NonFinite);
            }
            Ok(format_real(*r))
        }
        other => Err(FormatError::NonNumeric { kind: other.kind_name() }),
    }
}

/// Shortest round-trip decimal rendering of a finite f64, in positional
/// notation (`Display` for floats never uses an exponent).
pub(crate) fn format_real(r: f64) -> String {
    let mut s = alloc::format!("{r}");
    // Normalize the two zero representations; "-0" answers nothing.
    if s == "-0" {
        s = "0".to_string();
    }
    s
}
