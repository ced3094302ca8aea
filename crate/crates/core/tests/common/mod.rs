#![allow(dead_code)]

use ordproof_core::calculus::{Context, Node, Proof, Rule};
use ordproof_core::language::Truth;
use ordproof_core::language::{parse_formula, Formula, ObjTerm};
use ordproof_core::ordinals::{normalize, OrdTerm};
use ordproof_core::reducer::CaseId;
use ordproof_core::transforms::taut_proof;
use ordproof_core::transforms::wrap;
use ordproof_core::transforms::{leaf_piece, parse_skeleton, LeafKind, LeafSpec, Skeleton};
use rand::Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Random normal term over the full grammar; `mu_rate` is the chance that a
/// leaf becomes an opaque mu term.
pub fn random_term<R: Rng>(rng: &mut R, depth: u32, mu_rate: f64) -> OrdTerm {
    normalize(raw(rng, depth, mu_rate))
}

fn raw<R: Rng>(rng: &mut R, depth: u32, mu_rate: f64) -> OrdTerm {
    if depth == 0 || rng.gen_bool(0.25) {
        if rng.gen_bool(mu_rate) {
            return OrdTerm::Mu("m".into(), vec![OrdTerm::nat(rng.gen_range(0..3))]);
        }
        return match rng.gen_range(0..5) {
            0 => OrdTerm::Zero,
            1 => OrdTerm::Omega1,
            2 => OrdTerm::Rho0,
            _ => OrdTerm::nat(rng.gen_range(1..4)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => OrdTerm::Sum((0..rng.gen_range(2..4)).map(|_| raw(rng, d, mu_rate)).collect()),
        1 => OrdTerm::WPow(Box::new(raw(rng, d, mu_rate))),
        2 => OrdTerm::D(0, Box::new(raw(rng, d, mu_rate))),
        3 => OrdTerm::D(1, Box::new(raw(rng, d, mu_rate))),
        4 => OrdTerm::F(Box::new(raw(rng, d, mu_rate))),
        _ => OrdTerm::Sum(vec![raw(rng, d, mu_rate), OrdTerm::one()]),
    }
}

/// Random term of the epsilon-zero fragment.
pub fn random_small<R: Rng>(rng: &mut R, depth: u32) -> OrdTerm {
    fn go<R: Rng>(rng: &mut R, depth: u32) -> OrdTerm {
        if depth == 0 || rng.gen_bool(0.3) {
            return OrdTerm::nat(rng.gen_range(0..3));
        }
        match rng.gen_range(0..2) {
            0 => OrdTerm::WPow(Box::new(go(rng, depth - 1))),
            _ => OrdTerm::Sum((0..rng.gen_range(2..4)).map(|_| go(rng, depth - 1)).collect()),
        }
    }
    normalize(go(rng, depth))
}

pub fn f(src: &str) -> Formula {
    parse_formula(src).unwrap()
}

/// `ex x all y<1 (y < x+1)`, proved by the witness 0.
pub fn host_sentence() -> Formula {
    f("(ex x (allb y 1 (< y (+ x 1))))")
}

/// A proof of `s, extra...` from the (ex) rule with witness `w` over an
/// axiom.
pub fn witness_proof(s: &Formula, w: u64, extra: &[Formula]) -> Node {
    let Formula::Ex(x, body) = s else { panic!("not existential") };
    let inst = body.subst(x, &ObjTerm::nat(w));
    let mut top = extra.to_vec();
    top.push(inst);
    let m = top.len() - 1;
    let ax = Node::new("", Rule::Ax, top, vec![]).with(|p| p.main = vec![m]);
    let mut c = vec![s.clone()];
    c.extend_from_slice(extra);
    Node::new("", Rule::Ex, c, vec![ax]).with(|p| {
        p.main = vec![0];
        p.witness = Some(ObjTerm::nat(w));
    })
}

/// Cuts a piece proving `host, F` against a proof of `host, ~F` and wraps
/// the result into a proof with stock.
pub fn hosted(piece: Node, ctx: &Context) -> Proof {
    hosted_in(piece, &host_sentence(), 0, ctx)
}

/// As [`hosted`] for the sentence `s`, proved on the other side by the
/// witness `w`.
pub fn hosted_in(piece: Node, s: &Formula, w: u64, ctx: &Context) -> Proof {
    let s = s.clone();
    let fl = piece.concl.last().unwrap().clone();
    let other = witness_proof(&s, w, &[fl.negate()]);
    let (c, prems) = if fl.is_e_formula() { (fl, vec![other, piece]) } else { (fl.negate(), vec![piece, other]) };
    let cut = Node::new("", Rule::Cut, vec![s], prems).with(|p| p.formula = Some(c));
    wrap(cut, ctx).unwrap()
}

/// `host, extra...` from an axiom on the host instance.
pub fn weak(extra: &[Formula]) -> Node {
    witness_proof(&host_sentence(), 0, extra)
}

fn cut(c: Formula, gamma: Vec<Formula>, left: Node, right: Node) -> Node {
    Node::new("", Rule::Cut, gamma, vec![left, right]).with(|p| p.formula = Some(c))
}

fn k(t: OrdTerm) -> ObjTerm {
    ObjTerm::konst(t)
}

/// One wrapped proof per case, each built so that the first step takes that
/// case.
pub fn case_fixtures(ctx: &Context) -> Vec<(CaseId, Proof)> {
    let s = host_sentence();
    let w1 = k(OrdTerm::Omega1);
    let mut out = Vec::new();
    let mut push = |id, n: Node| out.push((id, wrap(n, ctx).unwrap()));

    let c = f("(< 0 1)");
    let ax = Node::new("", Rule::Ax, vec![s.clone(), c.clone()], vec![]).with(|p| p.main = vec![1]);
    push(CaseId::AxTaut, cut(c.clone(), vec![s.clone()], weak(&[c.negate()]), ax));

    let c = f("(ex x (and (< 2 x) (Pr0 x)))");
    let pr = Node::new("", Rule::PRhoEx, vec![s.clone(), c.clone()], vec![]).with(|p| p.main = vec![1]);
    push(CaseId::PRhoEx, cut(c.clone(), vec![s.clone()], weak(&[c.negate()]), pr));

    let c = f("(exb x w1 (exb y w1 (and (< w1 x) (P x y))))");
    let g = Formula::not_less(w1.clone(), w1.clone());
    let pe = Node::new("", Rule::PEx, vec![s.clone(), c.clone(), g.clone()], vec![]).with(|p| p.main = vec![1]);
    let inner = cut(g.clone(), vec![s.clone(), c.clone()], weak(&[c.clone(), g.negate()]), pe);
    push(CaseId::PExGuard, cut(c.clone(), vec![s.clone()], weak(&[c.negate()]), inner));

    let c = f("(exb x w1 (exb y w1 (and (< 0 x) (P x y))))");
    let pe = Node::new("", Rule::PEx, vec![s.clone(), c.clone()], vec![]).with(|p| p.main = vec![1]);
    push(CaseId::PExMain, cut(c.clone(), vec![s.clone()], weak(&[c.negate()]), pe));

    let c = f("(all x (< x 3))");
    let all = Node::new("", Rule::All, vec![s.clone(), c], vec![weak(&[f("(< a 3)")])]).with(|p| {
        p.main = vec![1];
        p.eigen = Some("a".into());
    });
    push(CaseId::Forall, all);

    let phi = f("(ex z (< w1 z))");
    let minor = phi.clone();
    let inst = f("(< w1 (+ w1 1))");
    let ex = Node::new("", Rule::Ex, vec![s.clone(), minor.clone()], vec![weak(&[inst])]).with(|p| {
        p.main = vec![1];
        p.witness = Some(f_term("(+ w1 1)"));
    });
    let (t0, t1) = (k(OrdTerm::d(0, OrdTerm::Zero)), k(OrdTerm::f(OrdTerm::Zero)));
    let main = phi.relativize(&t1);
    let ps = Node::new("", Rule::PSigma1, vec![s.clone(), main], vec![ex.clone()]).with(|p| {
        p.main = vec![1];
        p.formula = Some(phi.clone());
        p.vars = vec!["u".into(), "v".into()];
        p.terms = vec![t0, t1, ObjTerm::nat(0)];
    });
    push(CaseId::PSigma1, ps);

    let t = ObjTerm::nat(5);
    let phi = f("(ex z (< 5 z))");
    let g = f("(not (Pr0 5))");
    let ex = Node::new("", Rule::Ex, vec![s.clone(), g.clone(), phi.clone()], vec![weak(&[g.clone(), f("(< 5 6)")])]).with(|p| {
        p.main = vec![2];
        p.witness = Some(ObjTerm::nat(6));
    });
    let main = phi.relativize(&t);
    let pr = Node::new("", Rule::PRhoSigma1, vec![s.clone(), main.clone(), g.clone()], vec![ex]).with(|p| {
        p.main = vec![1];
        p.formula = Some(phi.clone());
        p.vars = vec!["v".into()];
        p.terms = vec![t.clone(), ObjTerm::nat(0)];
    });
    let pr = cut(g.clone(), vec![s.clone(), main.clone()], weak(&[main.clone(), g.negate()]), pr);
    push(CaseId::PRhoSigma1, pr);

    push(CaseId::OtherLogical, witness_proof(&s, 0, &[]));

    let a = f("(ex z (ex w (and (Pr0 z) (< x w))))");
    let one = ObjTerm::nat(1);
    let y = ObjTerm::var("b");
    let l = weak(&[Formula::allb("x", one.clone(), a.clone())]);
    let r = weak(&[Formula::not_less(one.clone(), y.clone()), Formula::exb("x", one.clone(), a.relativize(&y).negate())]);
    let rfl = Node::new("", Rule::Rfl, vec![s.clone()], vec![l, r]).with(|p| {
        p.formula = Some(a.clone());
        p.vars = vec!["x".into()];
        p.eigen = Some("b".into());
        p.terms = vec![one.clone()];
    });
    push(CaseId::Rfl, rfl);

    let ind_node = |a: &Formula, s0: u64, t0: u64, gamma: Vec<Formula>| {
        let y = ObjTerm::var("b");
        let as0 = a.subst("x", &ObjTerm::nat(s0));
        let mut p0 = gamma.clone();
        p0.push(Formula::allb("x", y.clone(), a.clone()).negate());
        p0.push(a.subst("x", &y));
        let mut concl = gamma.clone();
        concl.insert(1, as0.clone());
        let prems = vec![weak(&{
            let mut e = p0[1..].to_vec();
            e.insert(0, as0.clone());
            e
        }), taut_proof(&gamma, &as0.negate())];
        Node::new("", Rule::Ind, concl, prems).with(|p| {
            p.formula = Some(a.clone());
            p.vars = vec!["x".into()];
            p.eigen = Some("b".into());
            p.terms = vec![ObjTerm::nat(s0), ObjTerm::nat(t0)];
        })
    };
    let a = f("(< 5 x)");
    let g = f("(not (< 2 1))");
    let ind = ind_node(&a, 2, 1, vec![s.clone(), g.clone()]);
    let a2 = a.subst("x", &ObjTerm::nat(2));
    push(CaseId::IndGuard, cut(g.clone(), vec![s.clone(), a2.clone()], weak(&[a2, g.negate()]), ind));
    push(CaseId::IndUnfold, ind_node(&a, 0, 2, vec![s.clone()]));

    let c = f("(exb x 3 (< x 1))");
    let bex = Node::new("", Rule::BEx, vec![s.clone(), c.clone()], vec![weak(&[f("(< 0 1)")])]).with(|p| {
        p.main = vec![1];
        p.witness = Some(ObjTerm::nat(0));
    });
    push(CaseId::ImplicitDelta0, cut(c.clone(), vec![s.clone()], weak(&[c.negate()]), bex));

    let s3 = f("(ex x (allb y 3 (< y x)))");
    let left = taut_proof(&[], &s3.negate());
    push(CaseId::ImplicitCut, cut(s3.clone(), vec![s3.clone()], left, witness_proof(&s3, 3, &[])));
    out
}

pub fn f_term(src: &str) -> ObjTerm {
    ordproof_core::language::parse_term(src).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_skeleton(name: &str) -> Skeleton {
    parse_skeleton(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

/// The six depicted leaf kinds over the context `gamma`.
pub fn piece_specs(gamma: &[Formula]) -> Vec<LeafSpec> {
    let g = gamma.to_vec();
    vec![
        LeafSpec::new(LeafKind::PSigma1, g.clone(), Some(f("(ex z (and (< z u) (< v z)))")), &["u", "v"]),
        LeafSpec::new(LeafKind::Pexists, g.clone(), None, &[]),
        LeafSpec::new(LeafKind::Prho0Sigma1, g.clone(), Some(f("(ex z (< v z))")), &["v"]),
        LeafSpec::new(LeafKind::Prho0exists, g.clone(), None, &[]),
        LeafSpec::new(LeafKind::Reflection, g.clone(), Some(f("(ex z (ex w (and (Pr0 z) (< x w))))")), &["x"]),
        LeafSpec::new(LeafKind::TransInduction, g, Some(f("(< x (+ x 1))")), &["x"]),
    ]
}

/// Least `n < 100` with `B(n)` true for `s = ex x B`.
pub fn least_witness(s: &Formula, ctx: &Context) -> Option<u64> {
    let Formula::Ex(x, b) = s else { return None };
    let p = Proof::new(Node::new("", Rule::Ax, vec![], vec![]));
    let ev = ctx.evaluator(&p);
    (0..100).find(|&n| ev.eval(&b.subst(x, &ObjTerm::nat(n))) == Truth::True)
}

/// Valid proofs with stock: the case fixtures, the hosted pieces, the
/// embedded fixture skeletons and every intermediate proof of their runs.
pub fn corpus(ctx: &Context) -> Vec<Proof> {
    let mut base: Vec<Proof> = case_fixtures(ctx).into_iter().map(|(_, p)| p).collect();
    for spec in piece_specs(&[host_sentence()]) {
        base.push(hosted(leaf_piece(&spec).unwrap(), ctx));
    }
    for name in ["shift3.skel", "bounded_cut.skel"] {
        base.push(ordproof_core::transforms::embed(&read_skeleton(name)).unwrap().0);
    }
    let mut out = Vec::new();
    for p in base {
        out.push(p.clone());
        let mut cur = p;
        for _ in 0..20 {
            match ordproof_core::reducer::reduce_step(&cur, ctx) {
                Ok((next, _)) => {
                    out.push(next.clone());
                    cur = next;
                }
                Err(_) => break,
            }
        }
    }
    out
}

/// A skeleton proving `s` from one piece cut against a witness proof at `w`.
pub fn piece_skeleton(s: &Formula, w: u64, spec: LeafSpec) -> Skeleton {
    let piece = leaf_piece(&spec).unwrap();
    let fl = piece.concl.last().unwrap().clone();
    let leaf = Node::new("piece", Rule::Taut, piece.concl.clone(), vec![]);
    let other = witness_proof(s, w, &[fl.negate()]);
    let (c, prems) = if fl.is_e_formula() { (fl, vec![other, leaf]) } else { (fl.negate(), vec![leaf, other]) };
    let root = Node::new("root", Rule::Cut, vec![s.clone()], prems).with(|p| p.formula = Some(c));
    let mut leaves = BTreeMap::new();
    leaves.insert("piece".to_string(), spec);
    Skeleton { root, leaves, defs: Default::default(), axioms: vec![] }
}
