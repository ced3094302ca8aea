//! Ordinal notation, a one-sided sequent calculus with collapse rules, and
//! a proof-rewriting engine whose steps strictly lower the assigned ordinal.

pub mod calculus;
pub mod error;
pub mod language;
pub mod ordinals;
pub mod reducer;
pub mod sexp;
pub mod transforms;

pub use error::{Error, Result};
