mod common;

use common::*;
use ordproof_core::calculus::{validate, Context};
use ordproof_core::ordinals::compare;
use ordproof_core::reducer::{reduce_step, run, CaseId, Limits, Outcome};
use std::cmp::Ordering;

#[test]
fn every_case_fixture_takes_its_case_and_descends() {
    let ctx = Context::default();
    let fx = case_fixtures(&ctx);
    assert_eq!(fx.len(), CaseId::ALL.len());
    let mut bad = Vec::new();
    for (id, p) in &fx {
        let rep = validate(p, &ctx);
        if !rep.is_clean() {
            bad.push(format!("{id}: fixture invalid: {:?}", rep.diagnostics));
            continue;
        }
        match reduce_step(p, &ctx) {
            Ok((_, st)) if st.case != *id => bad.push(format!("{id}: took {}", st.case)),
            Ok((_, st)) if compare(&st.o_after, &st.o_before) != Ok(Ordering::Less) => {
                bad.push(format!("{id}: {} -> {}", st.o_before, st.o_after))
            }
            Ok(_) => {}
            Err(e) => bad.push(format!("{id}: {e}")),
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn implicit_cut_fixture_yields_least_witness() {
    let ctx = Context::default();
    let (_, p) = case_fixtures(&ctx).into_iter().find(|(id, _)| *id == CaseId::ImplicitCut).unwrap();
    let r = run(&p, &ctx, &Limits::default()).unwrap();
    match r.outcome {
        Outcome::Witness { terms, .. } => assert_eq!(terms, vec![ordproof_core::language::ObjTerm::nat(3)]),
        o => panic!("{o:?}"),
    }
}
