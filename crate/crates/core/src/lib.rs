//! Core algorithms for perturbation-based math-reasoning evaluation.
//!
//! This crate is `no_std` (with `alloc`) and has no I/O. It provides:
//!
//! - [`symprog`]: a restricted, indentation-delimited imperative language in
//!   which extracted solution programs are written, with a deterministic
//!   sandboxed interpreter (no ambient authority, strict resource budgets).
//! - [`answers`]: canonical numeric answer strings, prediction parsing,
//!   exact match with rounding, and self-consistency majority voting.
//! - [`metrics`]: before/after accuracy, normalized accuracy, and
//!   percent-all-correct over per-case results.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod answers;
pub mod metrics;
pub mod symprog;
