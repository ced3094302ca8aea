mod common;

use common::*;
use ordproof_core::calculus::{validate, Node, Rule};
use ordproof_core::language::Formula;
use ordproof_core::ordinals::{gset, nsum, OrdTerm};
use ordproof_core::transforms::{embed, parse_skeleton, LeafKind, LeafSpec};

fn tower(k: usize, a: &OrdTerm) -> OrdTerm {
    (0..k).fold(a.clone(), |t, _| OrdTerm::wpow(t))
}

/// Number of (h) rules directly below `n`'s first premise chain until `stop`.
fn h_run(mut n: &Node, stop: Rule) -> usize {
    let mut k = 0;
    while n.rule != stop {
        assert_eq!(n.rule, Rule::H, "unexpected {} in the wrapper", n.rule);
        k += 1;
        n = &n.prems[0];
    }
    k
}

#[test]
fn fixture_skeletons_embed_into_proofs_with_stock() {
    for name in ["shift3.skel", "bounded_cut.skel"] {
        let sk = read_skeleton(name);
        let ctx = sk.context();
        let (p, stocks) = embed(&sk).unwrap();
        let rep = validate(&p, &ctx);
        assert!(rep.is_clean(), "{name}: {:?}", rep.diagnostics);
        assert_eq!(stocks.len(), 2, "{name}");

        let root = &p.root;
        assert_eq!(root.rule, Rule::D0);
        let k = h_run(&root.prems[0], Rule::D1);
        assert!(k >= 10);
        let d1 = &root.prems[0].at(&vec![0; k]);
        assert_eq!(d1.pl.stock, Some(OrdTerm::Zero));
        assert_eq!(h_run(&d1.prems[0], Rule::Cut), k, "{name}: k differs above and below D1");

        let c0 = root.pl.stock.clone().unwrap();
        let parts = c0.parts();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1], OrdTerm::one());
        let OrdTerm::WPow(b1) = &parts[0] else { panic!("{name}: stock {c0}") };
        let alpha1 = OrdTerm::d(1, OrdTerm::wpow((**b1).clone()));
        assert_eq!(d1.pl.relativizer.as_ref(), Some(&alpha1));
        for a in [OrdTerm::d(0, c0.clone()), OrdTerm::d(1, OrdTerm::Zero), OrdTerm::Omega1] {
            assert!(gset(&a, &c0).unwrap().is_empty());
        }
        let o = rep.annotation.unwrap().o_proof().clone();
        assert_eq!(o, OrdTerm::d(0, nsum(&c0, &tower(k, &alpha1))), "{name}");
    }
}

#[test]
fn every_piece_kind_embeds() {
    let s = host_sentence();
    let specs = [
        LeafSpec::new(LeafKind::PSigma1, vec![s.clone()], Some(f("(ex z (and (< z u) (< v z)))")), &["u", "v"]),
        LeafSpec::new(LeafKind::Pexists, vec![s.clone()], None, &[]),
        LeafSpec::new(LeafKind::Prho0Sigma1, vec![s.clone()], Some(f("(ex z (< v z))")), &["v"]),
        LeafSpec::new(LeafKind::Prho0exists, vec![s.clone()], None, &[]),
        LeafSpec::new(LeafKind::Reflection, vec![s.clone()], Some(f("(ex z (ex w (and (Pr0 z) (< x w))))")), &["x"]),
        LeafSpec::new(LeafKind::TransInduction, vec![s.clone()], Some(f("(< x (+ x 1))")), &["x"]),
    ];
    for spec in specs {
        let kind = spec.kind;
        let sk = piece_skeleton(&s, 0, spec);
        let (p, _) = embed(&sk).unwrap_or_else(|e| panic!("{}: {e}", kind.tag()));
        let rep = validate(&p, &sk.context());
        assert!(rep.is_clean(), "{}: {:?}", kind.tag(), rep.diagnostics);
    }
}

#[test]
fn cut_degree_raises_k() {
    let deep = f("(ex x (allb y 3 (< y (+ x 3))))");
    let mut a = f("(all q (< q 1))");
    for _ in 0..5 {
        a = Formula::or(a, f("(all q (< q 1))"));
    }
    let sk = piece_skeleton(&deep, 0, LeafSpec::new(LeafKind::Taut, vec![deep.clone()], Some(a.clone()), &[]));
    let want = a.dg() as usize;
    assert!(want > 10);
    let (p, _) = embed(&sk).unwrap();
    assert_eq!(h_run(&p.root.prems[0], Rule::D1), want);
}

#[test]
fn malformed_skeletons_are_rejected() {
    let unknown = "(skeleton c)\n(leaf c magic :concl (seq (< 0 1)))\n";
    assert!(parse_skeleton(unknown).is_err());
    let short = "(skeleton c)\n(leaf c taut :concl (seq (< 0 1)))\n";
    assert!(parse_skeleton(short).is_err());
    let not_sigma2 = "(skeleton c)\n(leaf c taut :concl (seq (all x (ex y (< x y))) (ex x (all y (not (< x y))))))\n";
    assert!(parse_skeleton(not_sigma2).and_then(|s| embed(&s)).is_err());
}
