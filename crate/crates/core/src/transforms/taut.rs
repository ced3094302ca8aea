use super::dedup_tree;
use crate::calculus::{Node, Rule, Sequent};
use crate::language::{fresh_var, Formula, ObjTerm};
use std::collections::BTreeSet;

/// A cut-free proof of `gamma, ~a, a` whose ordinal is `dg(a)`. Formulas that
/// the construction would repeat (a bounded guard equal to a literal inside
/// `a`) are kept once.
pub fn taut_proof(gamma: &[Formula], a: &Formula) -> Node {
    dedup_tree(&raw(gamma, a))
}

fn raw(gamma: &[Formula], a: &Formula) -> Node {
    let mut concl: Sequent = gamma.to_vec();
    concl.push(a.negate());
    concl.push(a.clone());
    let (ni, ai) = (gamma.len(), gamma.len() + 1);
    if a.is_literal() || a.is_delta0() {
        return Node::new("", Rule::Taut, concl, vec![]).with(|p| p.main = vec![ni, ai]);
    }
    let avoid: BTreeSet<String> = concl.iter().flat_map(|f| f.free_vars()).collect();
    let extend = |extra: &[Formula]| -> Sequent {
        let mut s = concl.clone();
        s.extend_from_slice(extra);
        s
    };
    match a {
        Formula::Or(..) | Formula::Ex(..) | Formula::ExB(..) => {
            // Introduce ~a first, then a on top of it.
            dual_first(&concl, ni, ai, a, &avoid, &extend)
        }
        Formula::And(b0, b1) => {
            let concl_ref = &concl;
            let prem = |b: &Formula| {
                let inner = raw(concl_ref, &b.negate());
                Node::new("", Rule::Or, extend(&[b.clone()]), vec![inner]).with(|p| p.main = vec![ni])
            };
            Node::new("", Rule::And, concl.clone(), vec![prem(b0), prem(b1)]).with(|p| p.main = vec![ai])
        }
        Formula::All(x, b) => {
            let y = fresh_var(x, &avoid);
            let by = b.subst(x, &ObjTerm::var(&y));
            let inner = raw(&concl, &by.negate());
            let ex = Node::new("", Rule::Ex, extend(&[by]), vec![inner]).with(|p| {
                p.main = vec![ni];
                p.witness = Some(ObjTerm::var(&y));
            });
            Node::new("", Rule::All, concl.clone(), vec![ex]).with(|p| {
                p.main = vec![ai];
                p.eigen = Some(y);
            })
        }
        Formula::AllB(x, t, b) => {
            let y = fresh_var(x, &avoid);
            let vy = ObjTerm::var(&y);
            let by = b.subst(x, &vy);
            let guard = Formula::not_less(vy.clone(), t.clone());
            let inner = raw(&extend(&[guard.clone()]), &by.negate());
            let ex = Node::new("", Rule::BEx, extend(&[guard, by]), vec![inner]).with(|p| {
                p.main = vec![ni];
                p.witness = Some(vy);
            });
            Node::new("", Rule::BAll, concl.clone(), vec![ex]).with(|p| {
                p.main = vec![ai];
                p.eigen = Some(y);
            })
        }
        Formula::Lit(..) => unreachable!(),
    }
}

/// `a` is a disjunction or existential: the universal/conjunctive `~a` is
/// introduced at the bottom.
fn dual_first(
    concl: &Sequent,
    ni: usize,
    ai: usize,
    a: &Formula,
    avoid: &BTreeSet<String>,
    extend: &dyn Fn(&[Formula]) -> Sequent,
) -> Node {
    match a {
        Formula::Or(b0, b1) => {
            let prem = |b: &Formula| {
                let nb = b.negate();
                let inner = raw(concl, b);
                Node::new("", Rule::Or, extend(&[nb]), vec![inner]).with(|p| p.main = vec![ai])
            };
            Node::new("", Rule::And, concl.clone(), vec![prem(b0), prem(b1)]).with(|p| p.main = vec![ni])
        }
        Formula::Ex(x, b) => {
            let y = fresh_var(x, avoid);
            let nby = b.negate().subst(x, &ObjTerm::var(&y));
            let by = b.subst(x, &ObjTerm::var(&y));
            let inner = raw(concl, &by);
            let ex = Node::new("", Rule::Ex, extend(&[nby]), vec![inner]).with(|p| {
                p.main = vec![ai];
                p.witness = Some(ObjTerm::var(&y));
            });
            Node::new("", Rule::All, concl.clone(), vec![ex]).with(|p| {
                p.main = vec![ni];
                p.eigen = Some(y);
            })
        }
        Formula::ExB(x, t, b) => {
            let y = fresh_var(x, avoid);
            let vy = ObjTerm::var(&y);
            let nby = b.negate().subst(x, &vy);
            let by = b.subst(x, &vy);
            let guard = Formula::not_less(vy.clone(), t.clone());
            let inner = raw(&extend(&[guard.clone()]), &by);
            let ex = Node::new("", Rule::BEx, extend(&[guard, nby]), vec![inner]).with(|p| {
                p.main = vec![ai];
                p.witness = Some(vy);
            });
            Node::new("", Rule::BAll, concl.clone(), vec![ex]).with(|p| {
                p.main = vec![ni];
                p.eigen = Some(y);
            })
        }
        _ => unreachable!(),
    }
}
