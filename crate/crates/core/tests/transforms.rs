mod common;

use common::*;
use ordproof_core::calculus::{assign_from, validate, Checker, Context, Height, Proof};
use ordproof_core::language::{Formula, ObjTerm};
use ordproof_core::ordinals::{compare, OrdTerm};
use ordproof_core::transforms::{dedup_tree, drop_false_literal, invert, taut_proof, weaken, Inversion};
use proptest::prelude::*;
use std::cmp::Ordering;

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["(< v 1)", "(not (< v 2))", "(Pr0 v)", "(not (Pr0 v))", "(< 0 v)"]).prop_map(f);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            inner.clone().prop_map(|a| Formula::ex("v", a)),
            inner.clone().prop_map(|a| Formula::all("v", a)),
            (inner.clone(), 1..4u64).prop_map(|(a, t)| Formula::exb("v", ObjTerm::nat(t), a)),
            (inner, 1..4u64).prop_map(|(a, t)| Formula::allb("v", ObjTerm::nat(t), a)),
        ]
    })
}

fn checked(p: &Proof, ctx: &Context) -> OrdTerm {
    let ev = ctx.evaluator(p);
    let ds = Checker { ev: &ev, axioms: &[] }.rule_check(p);
    assert!(ds.is_empty(), "{ds:?}");
    assign_from(&p.root, Height { omega: 1, fin: 0 }, &ev).unwrap().o_proof().clone()
}

fn taut(a: &Formula) -> Proof {
    let mut p = Proof::new(taut_proof(&[], a));
    p.ensure_unique_ids();
    p
}

proptest! {
    #[test]
    fn taut_ordinal_is_degree(a in formula()) {
        let ctx = Context::default();
        prop_assert_eq!(checked(&taut(&a), &ctx), OrdTerm::nat(a.dg()));
    }

    #[test]
    fn inversion_never_raises_the_ordinal(a in formula(), v in 0..3u64, s in 0..4u64, j in 0..2usize) {
        let a = a.subst("v", &ObjTerm::nat(v));
        let inv = match &a {
            Formula::All(..) | Formula::AllB(..) => Inversion::Inst(ObjTerm::nat(s)),
            Formula::And(..) => Inversion::Conj(j),
            Formula::Or(..) => Inversion::Disj,
            _ => return Ok(()),
        };
        let ctx = Context::default();
        let p = taut(&a);
        let before = checked(&p, &ctx);
        let ev = ctx.evaluator(&p);
        let pos = p.root.concl.iter().rposition(|g| *g == a).unwrap();
        let q = invert(&p, pos, &inv, &ev).unwrap();
        let after = checked(&q, &ctx);
        prop_assert_ne!(compare(&after, &before).unwrap(), Ordering::Greater);
    }

    #[test]
    fn weakening_then_dropping_a_false_literal_is_identity_on_ordinals(a in formula(), k in 1..5u64) {
        let ctx = Context::default();
        let p = taut(&a);
        let lit = Formula::less(ObjTerm::nat(k), ObjTerm::nat(k - 1));
        let w = weaken(&p, std::slice::from_ref(&lit)).unwrap();
        let ev = ctx.evaluator(&w);
        let pos = w.root.concl.iter().position(|g| *g == lit).unwrap();
        let d = drop_false_literal(&w, pos, &ev).unwrap();
        prop_assert_eq!(checked(&d, &ctx), checked(&p, &ctx));
        prop_assert_eq!(&d.root.concl, &p.root.concl);
    }

    #[test]
    fn dedup_is_idempotent(a in formula()) {
        let p = taut(&a);
        let once = dedup_tree(&p.root);
        prop_assert_eq!(dedup_tree(&once), once);
    }
}

#[test]
fn corpus_cuts_respect_height_degree_bound() {
    let ctx = Context::default();
    for p in corpus(&ctx) {
        let rep = validate(&p, &ctx);
        assert!(rep.is_clean(), "{:?}", rep.diagnostics);
        let hs = ordproof_core::calculus::heights(&p);
        for (_, n) in p.root.paths() {
            if let (ordproof_core::calculus::Rule::Cut, Some(c)) = (n.rule, &n.pl.formula) {
                let h = hs[&n.id];
                assert!(h.at_least(c.dg()), "cut on {c} at height {h}");
            }
        }
    }
}

#[test]
fn weakening_rejects_duplicates_gracefully() {
    let p = taut(&f("(all v (< v 1))"));
    let again = weaken(&p, &p.root.concl.clone()).unwrap();
    assert_eq!(again.root.concl.len(), p.root.concl.len());
}
