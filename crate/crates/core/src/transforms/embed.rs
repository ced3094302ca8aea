//! Initial proofs: leaf pieces for the axioms and the wrapping of a
//! cut-and-logic outline into a proof with stock.

use super::taut_proof;
use crate::calculus::{
    assign_from, is_d1_family, is_sigma2_part, parse_skeleton_script, Context, Height, Node, Proof, Rule, Sequent,
    StockAssignment,
};
use crate::error::{Error, Result};
use crate::language::{fresh_var, Atom, Defs, Formula, ObjTerm};
use crate::ordinals::{nsum, OrdTerm};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafKind {
    AxiomClosure,
    PSigma1,
    Pexists,
    Prho0Sigma1,
    Prho0exists,
    TransInduction,
    Reflection,
    Taut,
}

impl LeafKind {
    pub const ALL: [LeafKind; 8] = [
        LeafKind::AxiomClosure,
        LeafKind::PSigma1,
        LeafKind::Pexists,
        LeafKind::Prho0Sigma1,
        LeafKind::Prho0exists,
        LeafKind::TransInduction,
        LeafKind::Reflection,
        LeafKind::Taut,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            LeafKind::AxiomClosure => "axiom-closure",
            LeafKind::PSigma1 => "PSigma1",
            LeafKind::Pexists => "Pexists",
            LeafKind::Prho0Sigma1 => "Prho0Sigma1",
            LeafKind::Prho0exists => "Prho0exists",
            LeafKind::TransInduction => "trans-induction",
            LeafKind::Reflection => "reflection",
            LeafKind::Taut => "taut",
        }
    }

    pub fn from_tag(s: &str) -> Option<LeafKind> {
        LeafKind::ALL.into_iter().find(|k| k.tag() == s)
    }
}

/// A leaf of an outline. `formula` and `vars` are the instantiating data:
///
/// * `axiom-closure`: the open axiom instance and the variables to close.
/// * `PSigma1`: the Sigma1 formula `phi[u, v]`, vars `(u v)`.
/// * `Prho0Sigma1`: `phi[v]`, vars `(v)`.
/// * `trans-induction`: `A(x)`, vars `(x)`.
/// * `reflection`: `A(x) = ex z ex w (Pr0(z) and B)`, vars `(x)`.
/// * `taut`: the formula `A` of `~A, A`.
///
/// Quantifiers the pieces introduce use the names `x`, `y`, `a`, `z` unless
/// these clash with the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafSpec {
    pub kind: LeafKind,
    pub gamma: Sequent,
    pub formula: Option<Formula>,
    pub vars: Vec<String>,
}

impl LeafSpec {
    pub fn new(kind: LeafKind, gamma: Sequent, formula: Option<Formula>, vars: &[&str]) -> Self {
        LeafSpec { kind, gamma, formula, vars: vars.iter().map(|v| v.to_string()).collect() }
    }
}

/// An outline built from `cut`, `or`, `and`, `ex`, `bex`, `all`, `ball`
/// nodes whose leaves are replaced by pieces.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub root: Node,
    pub leaves: BTreeMap<String, LeafSpec>,
    pub defs: Defs,
    pub axioms: Vec<Formula>,
}

impl Skeleton {
    pub fn context(&self) -> Context {
        Context { defs: self.defs.clone(), axioms: self.axioms.clone(), ..Context::default() }
    }
}

/// Reads a skeleton file. A leaf's `:concl` lists its context followed by
/// the formula the piece proves (the last two formulas for `taut`).
pub fn parse_skeleton(src: &str) -> Result<Skeleton> {
    let (script, kinds) = parse_skeleton_script(src)?;
    let mut leaves = BTreeMap::new();
    let mut err = None;
    script.proof.root.walk(&mut Vec::new(), &mut |_, n| {
        let Some(k) = kinds.get(&n.id) else { return };
        let Some(kind) = LeafKind::from_tag(k) else {
            err.get_or_insert_with(|| Error::parse(format!("leaf {}: unknown kind `{k}`", n.id)));
            return;
        };
        let drop = if kind == LeafKind::Taut { 2 } else { 1 };
        if n.concl.len() < drop {
            err.get_or_insert_with(|| Error::parse(format!("leaf {}: conclusion too short", n.id)));
            return;
        }
        let gamma = n.concl[..n.concl.len() - drop].to_vec();
        let mut formula = n.pl.formula.clone();
        if kind == LeafKind::Taut && formula.is_none() {
            formula = n.concl.last().cloned();
        }
        leaves.insert(n.id.clone(), LeafSpec { kind, gamma, formula, vars: n.pl.vars.clone() });
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Skeleton { root: script.proof.root, leaves, defs: script.defs, axioms: script.axioms })
}

fn names_in(f: &Formula, out: &mut BTreeSet<String>) {
    out.extend(f.free_vars());
    match f {
        Formula::Lit(..) => {}
        Formula::Or(a, b) | Formula::And(a, b) => {
            names_in(a, out);
            names_in(b, out);
        }
        Formula::Ex(x, a) | Formula::All(x, a) | Formula::ExB(x, _, a) | Formula::AllB(x, _, a) => {
            out.insert(x.clone());
            names_in(a, out);
        }
    }
}

fn pick(base: &str, avoid: &mut BTreeSet<String>) -> String {
    let v = if avoid.contains(base) { fresh_var(base, avoid) } else { base.to_string() };
    avoid.insert(v.clone());
    v
}

/// Turns the last `k` formulas into one right-nested disjunction, two (or)
/// rules per connective.
fn or_close(mut n: Node, k: usize) -> Node {
    for _ in 1..k {
        let len = n.concl.len();
        let (a, b) = (n.concl[len - 2].clone(), n.concl[len - 1].clone());
        let o = Formula::or(a.clone(), b);
        let mut c = n.concl[..len - 2].to_vec();
        c.push(o);
        c.push(a);
        let first = Node::new("", Rule::Or, c.clone(), vec![n]).with(|p| p.main = vec![len - 2]);
        c.pop();
        n = Node::new("", Rule::Or, c, vec![first]).with(|p| p.main = vec![len - 2]);
    }
    n
}

fn all_intro(n: Node, v: &str) -> Node {
    let mut c = n.concl.clone();
    let d = c.pop().expect("nonempty sequent");
    c.push(Formula::all(v, d));
    let m = c.len() - 1;
    Node::new("", Rule::All, c, vec![n]).with(|p| {
        p.main = vec![m];
        p.eigen = Some(v.to_string());
    })
}

fn seq(gamma: &[Formula], extra: impl IntoIterator<Item = Formula>) -> Sequent {
    let mut s = gamma.to_vec();
    s.extend(extra);
    s
}

fn shape(kind: LeafKind, msg: impl Into<String>) -> Error {
    Error::shape(format!("{} leaf: {}", kind.tag(), msg.into()))
}

/// The piece for one leaf; it proves `gamma` followed by the leaf formula.
pub fn leaf_piece(spec: &LeafSpec) -> Result<Node> {
    let kind = spec.kind;
    let mut avoid = BTreeSet::new();
    for f in spec.gamma.iter().chain(&spec.formula) {
        names_in(f, &mut avoid);
    }
    avoid.extend(spec.vars.iter().cloned());
    let gamma = &spec.gamma;
    let formula = || spec.formula.clone().ok_or_else(|| shape(kind, "missing :formula"));
    let var = |i: usize| spec.vars.get(i).cloned().ok_or_else(|| shape(kind, "missing :vars"));
    let w1 = ObjTerm::omega1();
    Ok(match kind {
        LeafKind::Taut => {
            let a = formula()?;
            taut_proof(gamma, &a)
        }
        LeafKind::AxiomClosure => {
            let a = formula()?;
            if !a.is_delta0() {
                return Err(shape(kind, format!("{a} is not bounded")));
            }
            let m = gamma.len();
            let mut n = Node::new("", Rule::Ax, seq(gamma, [a]), vec![]).with(|p| p.main = vec![m]);
            for v in spec.vars.iter().rev() {
                n = all_intro(n, v);
            }
            n
        }
        LeafKind::PSigma1 => {
            let phi = formula()?;
            let (u, v) = (var(0)?, var(1)?);
            if !phi.is_sigma1() {
                return Err(shape(kind, format!("{phi} is not Sigma1")));
            }
            let (x, y, a) = (pick("x", &mut avoid), pick("y", &mut avoid), pick("a", &mut avoid));
            let (vx, vy, va) = (ObjTerm::var(&x), ObjTerm::var(&y), ObjTerm::var(&a));
            let np = Formula::lit(false, Atom::P(vx.clone(), vy.clone()));
            let g = Formula::not_less(va.clone(), vx.clone());
            let minor = phi.subst(&u, &w1).subst(&v, &va);
            let main = phi.subst(&u, &vx).subst(&v, &va).relativize(&vy);
            let base = taut_proof(&seq(gamma, [np.clone(), g.clone()]), &minor);
            let c = seq(gamma, [np, g, minor.negate(), main]);
            let m = c.len() - 1;
            let ps = Node::new("", Rule::PSigma1, c, vec![base]).with(|p| {
                p.main = vec![m];
                p.formula = Some(phi.clone());
                p.vars = vec![u.clone(), v.clone()];
                p.terms = vec![vx.clone(), vy.clone(), va.clone()];
            });
            all_intro(all_intro(all_intro(or_close(ps, 4), &a), &y), &x)
        }
        LeafKind::Pexists => {
            let (a, x, y) = (pick("a", &mut avoid), pick("x", &mut avoid), pick("y", &mut avoid));
            let va = ObjTerm::var(&a);
            let body = Formula::and(
                Formula::less(va.clone(), ObjTerm::var(&x)),
                Formula::lit(true, Atom::P(ObjTerm::var(&x), ObjTerm::var(&y))),
            );
            let ex = Formula::exb(&x, w1.clone(), Formula::exb(&y, w1.clone(), body));
            let c = seq(gamma, [Formula::not_less(va.clone(), w1.clone()), ex.clone()]);
            let m = c.len() - 1;
            let top = Node::new("", Rule::PEx, c, vec![]).with(|p| p.main = vec![m]);
            let c = seq(gamma, [Formula::allb(&a, w1, ex)]);
            let m = c.len() - 1;
            Node::new("", Rule::BAll, c, vec![top]).with(|p| {
                p.main = vec![m];
                p.eigen = Some(a.clone());
            })
        }
        LeafKind::Prho0Sigma1 => {
            let phi = formula()?;
            let v = var(0)?;
            if !phi.is_sigma1() {
                return Err(shape(kind, format!("{phi} is not Sigma1")));
            }
            let (x, y) = (pick("x", &mut avoid), pick("y", &mut avoid));
            let (vx, vy) = (ObjTerm::var(&x), ObjTerm::var(&y));
            let np = Formula::lit(false, Atom::PRho(vx.clone()));
            let g = Formula::not_less(vy.clone(), vx.clone());
            let minor = phi.subst(&v, &vy);
            let main = minor.relativize(&vx);
            let base = taut_proof(&seq(gamma, [np.clone(), g.clone()]), &minor);
            let c = seq(gamma, [np, g, minor.negate(), main]);
            let m = c.len() - 1;
            let ps = Node::new("", Rule::PRhoSigma1, c, vec![base]).with(|p| {
                p.main = vec![m];
                p.formula = Some(phi.clone());
                p.vars = vec![v.clone()];
                p.terms = vec![vx.clone(), vy.clone()];
            });
            all_intro(all_intro(or_close(ps, 4), &y), &x)
        }
        LeafKind::Prho0exists => {
            let (y, x) = (pick("y", &mut avoid), pick("x", &mut avoid));
            let vx = ObjTerm::var(&x);
            let f = Formula::ex(&x, Formula::and(Formula::less(ObjTerm::var(&y), vx.clone()), Formula::lit(true, Atom::PRho(vx))));
            let c = seq(gamma, [f]);
            let m = c.len() - 1;
            all_intro(Node::new("", Rule::PRhoEx, c, vec![]).with(|p| p.main = vec![m]), &y)
        }
        LeafKind::TransInduction => {
            let a = formula()?;
            let x = var(0)?;
            induction_piece(gamma, &a, &x, &mut avoid)
        }
        LeafKind::Reflection => {
            let a = formula()?;
            let x = var(0)?;
            if !crate::calculus::is_rfl_body(&a) {
                return Err(shape(kind, format!("{a} is not ex z ex w (Pr0(z) and B)")));
            }
            let (z, y) = (pick("z", &mut avoid), pick("y", &mut avoid));
            let (vz, vy) = (ObjTerm::var(&z), ObjTerm::var(&y));
            let all_z = Formula::allb(&x, vz.clone(), a.clone());
            let all_zy = Formula::allb(&x, vz.clone(), a.relativize(&vy));
            let ex_y = Formula::ex(&y, all_zy.clone());
            let left = taut_proof(&seq(gamma, [ex_y.clone()]), &all_z);
            let inner = taut_proof(&seq(gamma, [all_z.negate(), Formula::not_less(vz.clone(), vy.clone())]), &all_zy);
            let rc = seq(gamma, [all_z.negate(), ex_y.clone(), Formula::not_less(vz.clone(), vy.clone()), all_zy.negate()]);
            let m = gamma.len() + 1;
            let right = Node::new("", Rule::Ex, rc, vec![inner]).with(|p| {
                p.main = vec![m];
                p.witness = Some(vy.clone());
            });
            let rfl = Node::new("", Rule::Rfl, seq(gamma, [all_z.negate(), ex_y]), vec![left, right]).with(|p| {
                p.formula = Some(a.clone());
                p.vars = vec![x.clone()];
                p.eigen = Some(y.clone());
                p.terms = vec![vz.clone()];
            });
            all_intro(or_close(rfl, 2), &z)
        }
    })
}

/// `Prg -> all y A(y)` from an (ind) under a (b-all) and a cut.
fn induction_piece(gamma: &[Formula], a: &Formula, x: &str, avoid: &mut BTreeSet<String>) -> Node {
    let (y, y2) = (pick("y", avoid), pick("y", avoid));
    let (vx, vy, vy2) = (ObjTerm::var(x), ObjTerm::var(&y), ObjTerm::var(&y2));
    let inst = |w: &ObjTerm| a.subst(x, w);
    let prg = Formula::all(&y, Formula::or(Formula::allb(x, vy.clone(), a.clone()).negate(), inst(&vy)));
    let nprg = prg.negate();
    // Gamma, ~Prg, ~all x<w A, A(w), with the last two in the given order.
    let progress = |w: &ObjTerm, cut_last: bool| {
        let all_w = Formula::allb(x, w.clone(), a.clone());
        let aw = inst(w);
        let p0 = taut_proof(&seq(gamma, [nprg.clone(), aw.clone()]), &all_w);
        let p1 = taut_proof(&seq(gamma, [nprg.clone(), all_w.negate()]), &aw.negate());
        let conj = Formula::and(all_w.clone(), aw.negate());
        let ac = seq(gamma, [nprg.clone(), all_w.negate(), aw.clone(), conj]);
        let m = ac.len() - 1;
        let and = Node::new("", Rule::And, ac, vec![p0, p1]).with(|p| p.main = vec![m]);
        let tail = if cut_last { [aw, all_w.negate()] } else { [all_w.negate(), aw] };
        let m = gamma.len();
        Node::new("", Rule::Ex, seq(gamma, std::iter::once(nprg.clone()).chain(tail)), vec![and]).with(|p| {
            p.main = vec![m];
            p.witness = Some(w.clone());
        })
    };
    let right = taut_proof(&seq(gamma, [nprg.clone()]), &a.negate());
    let ind = Node::new("", Rule::Ind, seq(gamma, [nprg.clone(), Formula::not_less(vx.clone(), vy.clone()), a.clone()]), vec![progress(&vy2, false), right])
        .with(|p| {
            p.formula = Some(a.clone());
            p.vars = vec![x.to_string()];
            p.eigen = Some(y2.clone());
            p.terms = vec![vx.clone(), vy.clone()];
        });
    let all_y = Formula::allb(x, vy.clone(), a.clone());
    let bc = seq(gamma, [nprg.clone(), all_y.clone()]);
    let m = bc.len() - 1;
    let ball = Node::new("", Rule::BAll, bc, vec![ind]).with(|p| {
        p.main = vec![m];
        p.eigen = Some(x.to_string());
    });
    let cut_right = progress(&vy, true);
    let cut = Node::new("", Rule::Cut, seq(gamma, [nprg, inst(&vy)]), vec![ball, cut_right])
        .with(|p| p.formula = Some(all_y.negate()));
    or_close(all_intro(cut, &y), 2)
}

/// Replaces every leaf by its piece; the piece must prove the leaf's
/// conclusion.
pub fn assemble(s: &Skeleton) -> Result<Node> {
    fn go(n: &Node, leaves: &BTreeMap<String, LeafSpec>) -> Result<Node> {
        if let Some(spec) = leaves.get(&n.id) {
            let piece = leaf_piece(spec)?;
            if piece.concl != n.concl {
                let want: Vec<String> = piece.concl.iter().map(|f| f.to_string()).collect();
                return Err(shape(spec.kind, format!("{} must conclude [{}]", n.id, want.join(", "))));
            }
            return Ok(piece);
        }
        let mut m = n.clone();
        m.prems = n.prems.iter().map(|p| go(p, leaves)).collect::<Result<_>>()?;
        Ok(m)
    }
    go(&s.root, &s.leaves)
}

fn max_degree(n: &Node) -> u64 {
    let own = match (n.rule, &n.pl.formula, n.pl.vars.first(), n.pl.terms.first()) {
        (Rule::Cut, Some(c), ..) => c.dg(),
        (Rule::Ind, Some(a), Some(x), Some(s)) => Formula::allb(x, s.clone(), a.clone()).dg(),
        _ => 0,
    };
    n.prems.iter().map(max_degree).fold(own, u64::max)
}

fn h_tower(mut n: Node, k: u64) -> Node {
    for _ in 0..k {
        n = Node::new("", Rule::H, n.concl.clone(), vec![n]);
    }
    n
}

/// Wraps an outline proof of closed Sigma2 parts: `k` (h)'s, a (D1) with
/// stock 0, `k` more (h)'s and the final (D0).
pub fn wrap(q1: Node, ctx: &Context) -> Result<Proof> {
    if let Some(f) = q1.concl.iter().find(|f| !is_sigma2_part(f)) {
        return Err(Error::shape(format!("end formula {f} is not a closed Sigma2 sentence")));
    }
    let k = max_degree(&q1).max(10);
    let upper = h_tower(q1, k);
    let rel: Vec<usize> = (0..upper.concl.len()).filter(|&i| is_d1_family(&upper.concl[i])).collect();
    let d1 = Node::new("", Rule::D1, upper.concl.clone(), vec![upper]).with(|p| {
        p.rel = rel;
        p.relativizer = Some(OrdTerm::d(1, OrdTerm::Zero));
        p.stock = Some(OrdTerm::Zero);
    });
    let lower = h_tower(d1, k);
    let root = Node::new("", Rule::D0, lower.concl.clone(), vec![lower]).with(|p| {
        p.relativizer = Some(OrdTerm::d(0, OrdTerm::Zero));
        p.stock = Some(OrdTerm::Zero);
    });
    let mut p = Proof::new(root);
    p.ensure_unique_ids();

    let d1_path = vec![0; k as usize + 1];
    let ev = ctx.evaluator(&p);
    let b1 = assign_from(&p.root.at(&d1_path).prems[0], Height { omega: 1, fin: 0 }, &ev)?.o_proof().clone();
    let alpha1 = OrdTerm::d(1, OrdTerm::wpow(b1.clone()));
    let d1 = p.root.at_mut(&d1_path);
    d1.pl.relativizer = Some(alpha1.clone());
    let a1 = ObjTerm::konst(alpha1);
    let prem = d1.prems[0].concl.clone();
    for &i in &d1.pl.rel {
        d1.concl[i] = prem[i].relativize(&a1);
    }
    let fixed = d1.concl.clone();
    for i in 0..=k as usize {
        p.root.at_mut(&vec![0; i]).concl = fixed.clone();
    }

    let ev = ctx.evaluator(&p);
    let b0 = assign_from(&p.root.prems[0], Height::ZERO, &ev)?.o_proof().clone();
    let c0 = nsum(&OrdTerm::wpow(b1), &OrdTerm::one());
    p.root.pl.relativizer = Some(OrdTerm::d(0, nsum(&c0, &b0)));
    p.root.pl.stock = Some(c0);
    Ok(p)
}

/// The initial proof with stock for a skeleton.
pub fn embed(s: &Skeleton) -> Result<(Proof, StockAssignment)> {
    let q1 = assemble(s)?;
    let p = wrap(q1, &s.context())?;
    let c = p.stocks();
    Ok((p, c))
}
