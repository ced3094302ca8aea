//! Formulas in negation normal form.

use super::term::ObjTerm;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Less(ObjTerm, ObjTerm),
    R(String, ObjTerm, ObjTerm),
    P(ObjTerm, ObjTerm),
    PRho(ObjTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    /// `Lit(true, a)` is `a`, `Lit(false, a)` its negation.
    Lit(bool, Atom),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Ex(String, Box<Formula>),
    All(String, Box<Formula>),
    ExB(String, ObjTerm, Box<Formula>),
    AllB(String, ObjTerm, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    Literal,
    Delta0,
    Sigma1,
    Pi1,
    EForm,
    Other,
}

impl Atom {
    fn map_terms(&self, f: &mut impl FnMut(&ObjTerm) -> ObjTerm) -> Atom {
        match self {
            Atom::Less(s, t) => Atom::Less(f(s), f(t)),
            Atom::R(id, s, t) => Atom::R(id.clone(), f(s), f(t)),
            Atom::P(s, t) => Atom::P(f(s), f(t)),
            Atom::PRho(t) => Atom::PRho(f(t)),
        }
    }

    pub fn terms(&self) -> Vec<&ObjTerm> {
        match self {
            Atom::Less(s, t) | Atom::R(_, s, t) | Atom::P(s, t) => vec![s, t],
            Atom::PRho(t) => vec![t],
        }
    }

    fn mentions_p(&self) -> bool {
        matches!(self, Atom::P(..) | Atom::PRho(_))
    }
}

impl Formula {
    pub fn lit(pos: bool, a: Atom) -> Self {
        Formula::Lit(pos, a)
    }
    pub fn less(s: ObjTerm, t: ObjTerm) -> Self {
        Formula::Lit(true, Atom::Less(s, t))
    }
    pub fn not_less(s: ObjTerm, t: ObjTerm) -> Self {
        Formula::Lit(false, Atom::Less(s, t))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn ex(x: &str, a: Formula) -> Self {
        Formula::Ex(x.to_string(), Box::new(a))
    }
    pub fn all(x: &str, a: Formula) -> Self {
        Formula::All(x.to_string(), Box::new(a))
    }
    pub fn exb(x: &str, t: ObjTerm, a: Formula) -> Self {
        Formula::ExB(x.to_string(), t, Box::new(a))
    }
    pub fn allb(x: &str, t: ObjTerm, a: Formula) -> Self {
        Formula::AllB(x.to_string(), t, Box::new(a))
    }

    /// Disjunction of a non-empty list, right-nested.
    pub fn or_all(mut fs: Vec<Formula>) -> Self {
        let last = fs.pop().expect("or_all of empty list");
        fs.into_iter().rev().fold(last, |acc, f| Formula::or(f, acc))
    }

    pub fn negate(&self) -> Formula {
        match self {
            Formula::Lit(p, a) => Formula::Lit(!p, a.clone()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Ex(x, a) => Formula::All(x.clone(), Box::new(a.negate())),
            Formula::All(x, a) => Formula::Ex(x.clone(), Box::new(a.negate())),
            Formula::ExB(x, t, a) => Formula::AllB(x.clone(), t.clone(), Box::new(a.negate())),
            Formula::AllB(x, t, a) => Formula::ExB(x.clone(), t.clone(), Box::new(a.negate())),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Lit(..))
    }

    fn mentions_p(&self) -> bool {
        match self {
            Formula::Lit(_, a) => a.mentions_p(),
            Formula::Or(a, b) | Formula::And(a, b) => a.mentions_p() || b.mentions_p(),
            Formula::Ex(_, a) | Formula::All(_, a) | Formula::ExB(_, _, a) | Formula::AllB(_, _, a) => {
                a.mentions_p()
            }
        }
    }

    fn has_unbounded(&self, ex: bool, all: bool) -> bool {
        match self {
            Formula::Lit(..) => false,
            Formula::Or(a, b) | Formula::And(a, b) => a.has_unbounded(ex, all) || b.has_unbounded(ex, all),
            Formula::Ex(_, a) => ex || a.has_unbounded(ex, all),
            Formula::All(_, a) => all || a.has_unbounded(ex, all),
            Formula::ExB(_, _, a) | Formula::AllB(_, _, a) => a.has_unbounded(ex, all),
        }
    }

    /// No unbounded quantifier; `P` and `Pr0` allowed.
    pub fn is_bounded(&self) -> bool {
        !self.has_unbounded(true, true)
    }

    /// Bounded, free of `P` and `Pr0`.
    pub fn is_delta0(&self) -> bool {
        !self.mentions_p() && !self.has_unbounded(true, true)
    }

    pub fn is_sigma1(&self) -> bool {
        !self.mentions_p() && !self.has_unbounded(false, true)
    }

    pub fn is_pi1(&self) -> bool {
        !self.mentions_p() && !self.has_unbounded(true, false)
    }

    /// Literals, disjunctions and existentials, bounded or not.
    pub fn is_e_formula(&self) -> bool {
        matches!(self, Formula::Lit(..) | Formula::Or(..) | Formula::Ex(..) | Formula::ExB(..))
    }

    pub fn classify(&self) -> Class {
        if self.is_literal() {
            Class::Literal
        } else if self.is_delta0() {
            Class::Delta0
        } else if self.is_sigma1() {
            Class::Sigma1
        } else if self.is_pi1() {
            Class::Pi1
        } else if self.is_e_formula() {
            Class::EForm
        } else {
            Class::Other
        }
    }

    pub fn dg(&self) -> u64 {
        if self.is_literal() || self.is_delta0() {
            return 1;
        }
        match self {
            Formula::Or(a, b) | Formula::And(a, b) => a.dg() + b.dg() + 2,
            Formula::Ex(_, a) | Formula::All(_, a) | Formula::ExB(_, _, a) | Formula::AllB(_, _, a) => a.dg() + 2,
            Formula::Lit(..) => 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out, &mut Vec::new());
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>, bound: &mut Vec<String>) {
        let term = |t: &ObjTerm, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut fv = BTreeSet::new();
            t.free_vars(&mut fv);
            out.extend(fv.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Lit(_, a) => a.terms().into_iter().for_each(|t| term(t, bound, out)),
            Formula::Or(a, b) | Formula::And(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::Ex(x, a) | Formula::All(x, a) => {
                bound.push(x.clone());
                a.collect_free(out, bound);
                bound.pop();
            }
            Formula::ExB(x, t, a) | Formula::AllB(x, t, a) => {
                term(t, bound, out);
                bound.push(x.clone());
                a.collect_free(out, bound);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn bound_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Lit(..) => {}
            Formula::Or(a, b) | Formula::And(a, b) => {
                a.bound_vars(out);
                b.bound_vars(out);
            }
            Formula::Ex(x, a) | Formula::All(x, a) | Formula::ExB(x, _, a) | Formula::AllB(x, _, a) => {
                out.insert(x.clone());
                a.bound_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution of `t` for the free variable `x`.
    pub fn subst(&self, x: &str, t: &ObjTerm) -> Formula {
        let mut tv = BTreeSet::new();
        t.free_vars(&mut tv);
        self.subst_inner(x, t, &tv)
    }

    fn subst_inner(&self, x: &str, t: &ObjTerm, tv: &BTreeSet<String>) -> Formula {
        match self {
            Formula::Lit(p, a) => Formula::Lit(*p, a.map_terms(&mut |s| s.subst(x, t))),
            Formula::Or(a, b) => Formula::or(a.subst_inner(x, t, tv), b.subst_inner(x, t, tv)),
            Formula::And(a, b) => Formula::and(a.subst_inner(x, t, tv), b.subst_inner(x, t, tv)),
            Formula::Ex(y, a) | Formula::All(y, a) | Formula::ExB(y, _, a) | Formula::AllB(y, _, a) => {
                let bound = match self {
                    Formula::ExB(_, b, _) | Formula::AllB(_, b, _) => Some(b.subst(x, t)),
                    _ => None,
                };
                let (y2, body) = if y == x {
                    (y.clone(), (**a).clone())
                } else if tv.contains(y) && a.free_vars().contains(x) {
                    let mut avoid = tv.clone();
                    avoid.extend(a.free_vars());
                    a.bound_vars(&mut avoid);
                    avoid.insert(x.to_string());
                    let fresh = fresh_var(y, &avoid);
                    let renamed = a.subst_inner(y, &ObjTerm::Var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
                    (fresh, renamed.subst_inner(x, t, tv))
                } else {
                    (y.clone(), a.subst_inner(x, t, tv))
                };
                let body = Box::new(body);
                match self {
                    Formula::Ex(..) => Formula::Ex(y2, body),
                    Formula::All(..) => Formula::All(y2, body),
                    Formula::ExB(..) => Formula::ExB(y2, bound.unwrap(), body),
                    _ => Formula::AllB(y2, bound.unwrap(), body),
                }
            }
        }
    }

    /// Bounds every unbounded quantifier by `y`.
    pub fn relativize(&self, y: &ObjTerm) -> Formula {
        match self {
            Formula::Lit(..) => self.clone(),
            Formula::Or(a, b) => Formula::or(a.relativize(y), b.relativize(y)),
            Formula::And(a, b) => Formula::and(a.relativize(y), b.relativize(y)),
            Formula::Ex(x, a) => Formula::ExB(x.clone(), y.clone(), Box::new(a.relativize(y))),
            Formula::All(x, a) => Formula::AllB(x.clone(), y.clone(), Box::new(a.relativize(y))),
            Formula::ExB(x, t, a) => Formula::ExB(x.clone(), t.clone(), Box::new(a.relativize(y))),
            Formula::AllB(x, t, a) => Formula::AllB(x.clone(), t.clone(), Box::new(a.relativize(y))),
        }
    }

    /// Applies `f` to every object term (bounds included), leaving binders.
    pub fn map_terms(&self, f: &mut impl FnMut(&ObjTerm) -> ObjTerm) -> Formula {
        match self {
            Formula::Lit(p, a) => Formula::Lit(*p, a.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Ex(x, a) => Formula::Ex(x.clone(), Box::new(a.map_terms(f))),
            Formula::All(x, a) => Formula::All(x.clone(), Box::new(a.map_terms(f))),
            Formula::ExB(x, t, a) => Formula::ExB(x.clone(), f(t), Box::new(a.map_terms(f))),
            Formula::AllB(x, t, a) => Formula::AllB(x.clone(), f(t), Box::new(a.map_terms(f))),
        }
    }

    pub fn terms(&self) -> Vec<&ObjTerm> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a ObjTerm>) {
        match self {
            Formula::Lit(_, a) => out.extend(a.terms()),
            Formula::Or(a, b) | Formula::And(a, b) => {
                a.collect_terms(out);
                b.collect_terms(out);
            }
            Formula::Ex(_, a) | Formula::All(_, a) => a.collect_terms(out),
            Formula::ExB(_, t, a) | Formula::AllB(_, t, a) => {
                out.push(t);
                a.collect_terms(out);
            }
        }
    }
}

pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    (0..)
        .map(|i| format!("{stem}_{i}"))
        .find(|v| !avoid.contains(v))
        .unwrap()
}
