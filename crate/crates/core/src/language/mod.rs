//! Object terms and NNF formulas over `<`, recursively defined predicates
//! `R`, and the collapse predicates `P` and `Pr0`.

mod eval;
mod formula;
mod syntax;
mod term;

pub use eval::{Defs, Evaluator, MuDef, RDef, SearchBudget, Truth};
pub use formula::{fresh_var, Atom, Class, Formula};
pub use syntax::{formula_from_sexp, formula_to_sexp, parse_formula, parse_term, term_from_sexp, term_to_sexp};
pub use term::ObjTerm;

#[cfg(test)]
mod tests;
