//! Proof figures, their rule schemas, heights, ordinal assignment and the
//! conditions for a proof with stock.

mod annotate;
mod check;
mod proof;
mod script;

pub use annotate::{assign, assign_from, descend, heights, heights_from, implicit_flags, regulation, stock_check, Annotation, Fate, NodeAnn};
pub use check::{guards, image, is_d1_family, is_rfl_body, is_sigma2_part, match_instance, premise_map, prhoex_term, pex_term, Anc, Checker, Diagnostic};
pub use proof::{Height, Node, Path, Payload, Proof, Rule, Sequent, StockAssignment};
pub use script::{parse_script, parse_skeleton_script, print_script, Script};

use crate::language::{Defs, Evaluator, Formula, SearchBudget};
use std::collections::BTreeSet;

/// Evaluation settings and the configured axiom list.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub defs: Defs,
    pub axioms: Vec<Formula>,
    pub budget: SearchBudget,
}

impl Context {
    pub fn from_script(s: &Script) -> Self {
        Context { defs: s.defs.clone(), axioms: s.axioms.clone(), budget: SearchBudget::default() }
    }

    /// An evaluator whose witness pool holds the closed terms of `p`.
    pub fn evaluator(&self, p: &Proof) -> Evaluator<'_> {
        let mut ev = Evaluator::new(&self.defs, self.budget.clone());
        let mut ts = BTreeSet::new();
        p.root.closed_terms(&mut ts);
        ev.extend_pool(ts);
        ev
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
    pub annotation: Option<Annotation>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty() && self.annotation.is_some()
    }
}

/// Rule schemas, then height regulation, assignment and the stock
/// conditions.
pub fn validate(p: &Proof, ctx: &Context) -> Report {
    let ev = ctx.evaluator(p);
    let mut diagnostics = Checker { ev: &ev, axioms: &ctx.axioms }.rule_check(p);
    if !diagnostics.is_empty() {
        return Report { diagnostics, annotation: None };
    }
    diagnostics.extend(regulation(p));
    match assign(p, &ev) {
        Ok(ann) => {
            diagnostics.extend(stock_check(p, &ann, &ev));
            Report { diagnostics, annotation: Some(ann) }
        }
        Err(e) => {
            diagnostics.push(Diagnostic::new(&p.root.id, "assign", e.to_string()));
            Report { diagnostics, annotation: None }
        }
    }
}

#[cfg(test)]
mod tests;
