//! One-step reduction of a proof with stock and the driver that repeats it
//! until a true formula shows up in the end-sequent.
//!
//! Every step closes the main branch, picks the case from the rule at its
//! top, rewrites, and then re-validates the result and checks that the
//! assigned ordinal went down.

use crate::calculus::{
    assign_from, descend, guards, pex_term, prhoex_term, validate, Context, Fate, Height, Node, Path, Proof, Rule,
    StockAssignment,
};
use crate::error::{Error, Result};
use crate::language::{fresh_var, Evaluator, Formula, ObjTerm, Truth};
use crate::ordinals::{nsum, OrdTerm};
use crate::transforms::{dedup_tree, drop_all, replacement, graft, invert_at, move_to_end, taut_proof, weaken_in, Inversion};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "A1-ax-taut")]
    AxTaut,
    #[serde(rename = "A2-prho0ex")]
    PRhoEx,
    #[serde(rename = "A3-pex-guard")]
    PExGuard,
    #[serde(rename = "A3-pex-main")]
    PExMain,
    #[serde(rename = "R1.1-forall")]
    Forall,
    #[serde(rename = "R1.2.1-psigma1")]
    PSigma1,
    #[serde(rename = "R1.2.2-prho0sigma1")]
    PRhoSigma1,
    #[serde(rename = "R1-other-logical")]
    OtherLogical,
    #[serde(rename = "R2-rfl")]
    Rfl,
    #[serde(rename = "R3.1-ind-guard")]
    IndGuard,
    #[serde(rename = "R3.2-ind-unfold")]
    IndUnfold,
    #[serde(rename = "R4.1-implicit-delta0")]
    ImplicitDelta0,
    #[serde(rename = "R4.2-implicit-cut")]
    ImplicitCut,
}

impl CaseId {
    pub const ALL: [CaseId; 13] = [
        CaseId::AxTaut,
        CaseId::PRhoEx,
        CaseId::PExGuard,
        CaseId::PExMain,
        CaseId::Forall,
        CaseId::PSigma1,
        CaseId::PRhoSigma1,
        CaseId::OtherLogical,
        CaseId::Rfl,
        CaseId::IndGuard,
        CaseId::IndUnfold,
        CaseId::ImplicitDelta0,
        CaseId::ImplicitCut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::AxTaut => "A1-ax-taut",
            CaseId::PRhoEx => "A2-prho0ex",
            CaseId::PExGuard => "A3-pex-guard",
            CaseId::PExMain => "A3-pex-main",
            CaseId::Forall => "R1.1-forall",
            CaseId::PSigma1 => "R1.2.1-psigma1",
            CaseId::PRhoSigma1 => "R1.2.2-prho0sigma1",
            CaseId::OtherLogical => "R1-other-logical",
            CaseId::Rfl => "R2-rfl",
            CaseId::IndGuard => "R3.1-ind-guard",
            CaseId::IndUnfold => "R3.2-ind-unfold",
            CaseId::ImplicitDelta0 => "R4.1-implicit-delta0",
            CaseId::ImplicitCut => "R4.2-implicit-cut",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub case: CaseId,
    pub o_before: OrdTerm,
    pub o_after: OrdTerm,
    /// End-sequent formulas that were not there before the step.
    pub added: Vec<Formula>,
    pub stocks: StockAssignment,
    /// End-sequent formula whose instance was taken, with the instance term.
    pub instance: Option<(Formula, ObjTerm)>,
}

/// One line of a JSON-lines trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub v: u32,
    pub step: usize,
    pub case: String,
    pub o_before: String,
    pub o_after: String,
    pub added_formulas: Vec<String>,
    pub stocks: BTreeMap<String, String>,
}

impl ReductionStep {
    pub fn record(&self, step: usize) -> TraceRecord {
        TraceRecord {
            v: 1,
            step,
            case: self.case.as_str().to_string(),
            o_before: self.o_before.to_string(),
            o_after: self.o_after.to_string(),
            added_formulas: self.added.iter().map(|f| f.to_string()).collect(),
            stocks: self.stocks.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// A true closed formula of the end-sequent, and the instance terms
    /// that led from an original end-sequent formula to it.
    Witness { formula: Formula, terms: Vec<ObjTerm> },
    StepLimit,
    Stuck(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: usize,
    /// Stop when an added formula cannot be decided.
    pub strict: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: 10_000, strict: true }
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub outcome: Outcome,
    pub trace: Vec<ReductionStep>,
    pub proof: Proof,
}

fn stuck(msg: impl Into<String>) -> Error {
    Error::Stuck(msg.into())
}

fn truth(ev: &Evaluator, f: &Formula) -> Truth {
    if !f.is_closed() {
        Truth::Undecided
    } else if f.is_literal() {
        ev.eval_literal(f)
    } else {
        ev.eval(f)
    }
}

/// Paths from the root up the rightmost premise of every structural rule.
pub fn main_branch(p: &Proof) -> Vec<Path> {
    let mut out = vec![Vec::new()];
    let mut n = &p.root;
    let mut path = Vec::new();
    while n.rule.is_structural() && !n.prems.is_empty() {
        let k = n.prems.len() - 1;
        path.push(k);
        n = &n.prems[k];
        out.push(path.clone());
    }
    out
}

/// Substitutes `0` for the free variables of the main branch, everywhere.
pub fn close_main_branch(p: &Proof) -> Proof {
    let mut root = p.root.clone();
    loop {
        let mut fv = BTreeSet::new();
        for path in main_branch(&Proof::new(root.clone())) {
            for f in &root.at(&path).concl {
                fv.extend(f.free_vars());
            }
        }
        let Some(x) = fv.into_iter().next() else { break };
        let closed = root.subst(&x, &ObjTerm::nat(0));
        if closed == root {
            break;
        }
        root = closed;
    }
    Proof::new(root)
}

fn close_all(n: &Node) -> Node {
    let mut n = n.clone();
    loop {
        let fv: BTreeSet<String> = n.concl.iter().flat_map(|f| f.free_vars()).collect();
        let Some(x) = fv.into_iter().next() else { return n };
        n = n.subst(&x, &ObjTerm::nat(0));
    }
}

/// Least numeral, then pool candidate, `s` with `f(s)` false and, when a
/// bound is given, `s < bound` true.
fn counterexample(ev: &Evaluator, f: impl Fn(&ObjTerm) -> Formula, bound: Option<&ObjTerm>) -> Option<ObjTerm> {
    let below = |s: &ObjTerm| bound.map_or(Truth::True, |b| ev.eval_literal(&Formula::less(s.clone(), b.clone())));
    let numerals = (0..=ev.budget().fuel.min(1000)).map(ObjTerm::nat);
    for s in numerals {
        match below(&s) {
            Truth::True => {}
            _ => break,
        }
        if truth(ev, &f(&s)) == Truth::False {
            return Some(s);
        }
    }
    ev.candidates()
        .into_iter()
        .map(ObjTerm::konst)
        .find(|s| below(s) == Truth::True && truth(ev, &f(s)) == Truth::False)
}

/// The cut at `cp` consumes a true formula through its right premise: keep
/// the left one, whose last formula is false.
fn cut_to_left(root: &Node, cp: &[usize], ev: &Evaluator) -> Result<Node> {
    let left = root.at(cp).prems[0].clone();
    let neg = left.concl.last().cloned().ok_or_else(|| stuck("empty cut premise"))?;
    if truth(ev, &neg) != Truth::False {
        return Err(stuck(format!("cut formula {neg} is not false")));
    }
    let new = if neg.is_literal() {
        drop_all(&left, &neg, ev)?
    } else if neg.is_delta0() {
        left
    } else {
        return Err(stuck(format!("cut formula {neg} is not bounded")));
    };
    graft(root, cp, new)
}

fn consuming_cut(root: &Node, path: &[usize], pos: usize) -> Result<Path> {
    match descend(root, path, pos).1 {
        Fate::Minor(cp, 1) if root.at(&cp).rule == Rule::Cut => Ok(cp),
        fate => Err(stuck(format!("{} is not cut away below the top ({fate:?})", root.at(path).concl[pos]))),
    }
}

/// Generic route for a true formula at `path`: the cut consuming it is
/// replaced by its left premise.
fn true_formula_route(root: &Node, path: &[usize], pos: usize, ev: &Evaluator) -> Result<Node> {
    let cp = consuming_cut(root, path, pos)?;
    cut_to_left(root, &cp, ev)
}

struct Rewrite {
    root: Node,
    case: CaseId,
    instance: Option<(Formula, ObjTerm)>,
}

impl Rewrite {
    fn new(root: Node, case: CaseId) -> Self {
        Rewrite { root, case, instance: None }
    }
}

fn main_pos(n: &Node) -> Result<usize> {
    n.pl.main.first().copied().ok_or_else(|| Error::Engine(format!("{} node {} has no main formula", n.rule, n.id)))
}

fn guard_route(root: &Node, path: &[usize], ev: &Evaluator) -> Option<Result<Node>> {
    let n = root.at(path);
    for (g, _) in guards(n) {
        if let Some(gp) = n.concl.iter().position(|f| *f == g) {
            if truth(ev, &g) == Truth::True {
                return Some(true_formula_route(root, path, gp, ev));
            }
        }
    }
    None
}

/// Inverts the first occurrence of `f`; returns the formulas that replace it.
fn invert_formula(n: &Node, f: &Formula, inv: &Inversion, ev: &Evaluator) -> Result<(Node, Vec<Formula>)> {
    let pos = n.concl.iter().position(|g| g == f).ok_or_else(|| Error::Engine(format!("{f} vanished before inversion")))?;
    let rep = replacement(f, inv).ok_or_else(|| stuck(format!("{f} cannot be inverted")))?;
    Ok((invert_at(n, pos, inv, ev)?, rep))
}

fn ax_taut(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    let pos = top
        .pl
        .main
        .iter()
        .copied()
        .find(|&i| truth(ev, &top.concl[i]) == Truth::True)
        .ok_or_else(|| stuck(format!("axiom {} has no true main formula", top.id)))?;
    Ok(Rewrite::new(true_formula_route(root, tp, pos, ev)?, CaseId::AxTaut))
}

fn pex(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    if let Some(r) = guard_route(root, tp, ev) {
        return Ok(Rewrite::new(r?, CaseId::PExGuard));
    }
    let top = root.at(tp);
    let m = main_pos(top)?;
    let t = pex_term(&top.concl[m]).ok_or_else(|| stuck("malformed P-existential"))?;
    let cp = consuming_cut(root, tp, m)?;
    let c0 = root.pl.stock.clone().filter(|_| root.rule == Rule::D0).ok_or_else(|| stuck("no D0 stock at the root"))?;
    let l = ObjTerm::konst(OrdTerm::d(0, c0.clone()));
    let s = ObjTerm::konst(OrdTerm::f(c0.clone()));
    let left = root.at(&cp).prems[0].clone();
    let nc = left.concl.last().cloned().unwrap_or_else(|| Formula::less(t.clone(), t.clone()));
    let (left, r1) = invert_formula(&left, &nc, &Inversion::Inst(l.clone()), ev)?;
    let (left, r2) = invert_formula(&left, &r1[1], &Inversion::Inst(s.clone()), ev)?;
    let (mut left, r3) = invert_formula(&left, &r2[1], &Inversion::Disj, ev)?;
    debug_assert_eq!(r3[0], Formula::not_less(t.clone(), l.clone()));
    for f in [&r1[0], &r2[0], &r3[0], &r3[1]] {
        left = drop_all(&left, f, ev)?;
    }
    let mut out = graft(root, &cp, left)?;
    out.pl.stock = Some(nsum(&c0, &OrdTerm::one()));
    Ok(Rewrite::new(out, CaseId::PExMain))
}

fn prho_ex(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    let m = main_pos(top)?;
    prhoex_term(&top.concl[m]).ok_or_else(|| stuck("malformed rho0-existential"))?;
    let cp = consuming_cut(root, tp, m)?;
    let base: Path = (0..cp.len())
        .rev()
        .map(|i| cp[..i].to_vec())
        .find(|p| root.at(p).rule == Rule::D1 && root.at(p).pl.stock.is_some())
        .ok_or_else(|| stuck("no D1 stock below the cut"))?;
    let c1 = root.at(&base).pl.stock.clone().unwrap();
    let l = ObjTerm::konst(OrdTerm::d(1, c1.clone()));
    let left = root.at(&cp).prems[0].clone();
    let nc = left.concl.last().cloned().ok_or_else(|| stuck("empty cut premise"))?;
    let (left, r1) = invert_formula(&left, &nc, &Inversion::Inst(l), ev)?;
    let (mut left, r2) = invert_formula(&left, &r1[0], &Inversion::Disj, ev)?;
    for f in &r2 {
        left = drop_all(&left, f, ev)?;
    }
    let mut out = graft(root, &cp, left)?;
    out.at_mut(&base).pl.stock = Some(nsum(&c1, &OrdTerm::one()));
    Ok(Rewrite::new(out, CaseId::PRhoEx))
}

fn forall(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    let Formula::All(x, b) = &top.concl[main_pos(top)?] else {
        return Err(Error::Engine("universal rule without universal main formula".into()));
    };
    let s = counterexample(ev, |s| b.subst(x, s), None).ok_or_else(|| stuck(format!("no counterexample found for {}", top.concl[top.pl.main[0]])))?;
    let y = top.pl.eigen.clone().unwrap_or_default();
    let new = top.prems[0].subst(&y, &s);
    Ok(Rewrite::new(graft(root, tp, new)?, CaseId::Forall))
}

/// Removes the top logical rule whose main formula is false.
fn erase_logical(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<(Node, Option<ObjTerm>)> {
    let top = root.at(tp);
    let main = top.concl[main_pos(top)?].clone();
    let new = match (&top.rule, &main) {
        (Rule::And, Formula::And(a0, a1)) => {
            let j = [a0, a1]
                .iter()
                .position(|a| truth(ev, a) == Truth::False)
                .ok_or_else(|| stuck(format!("no false conjunct in {main}")))?;
            top.prems[j].clone()
        }
        (Rule::BAll, Formula::AllB(x, t, b)) => {
            let s = counterexample(ev, |s| b.subst(x, s), Some(t)).ok_or_else(|| stuck(format!("no counterexample found for {main}")))?;
            let y = top.pl.eigen.clone().unwrap_or_default();
            let prem = top.prems[0].subst(&y, &s);
            let n = drop_all(&prem, &Formula::not_less(s.clone(), t.clone()), ev)?;
            return Ok((graft(root, tp, n)?, None));
        }
        (Rule::Ex | Rule::BEx | Rule::Or, _) => close_all(&top.prems[0]),
        _ => return Err(Error::Engine(format!("cannot erase a {} rule", top.rule))),
    };
    let inst = match top.rule {
        Rule::Ex | Rule::BEx => top.pl.witness.clone(),
        _ => None,
    };
    Ok((graft(root, tp, new)?, inst))
}

/// Follows the main formula of a logical top through the P-rules below it.
enum Track {
    Explicit { root_pos: usize, via: Option<Path> },
    Implicit(Path),
}

fn track(root: &Node, tp: &[usize]) -> Result<Track> {
    let mut path = tp.to_vec();
    let mut pos = main_pos(root.at(tp))?;
    let mut via = None;
    loop {
        match descend(root, &path, pos).1 {
            Fate::Root(p) => return Ok(Track::Explicit { root_pos: p, via }),
            Fate::Minor(np, _) if matches!(root.at(&np).rule, Rule::PSigma1 | Rule::PRhoSigma1) => {
                pos = main_pos(root.at(&np))?;
                via = Some(np.clone());
                path = np;
            }
            Fate::Minor(np, 1) if root.at(&np).rule == Rule::Cut => return Ok(Track::Implicit(np)),
            fate => return Err(stuck(format!("main formula of the top has fate {fate:?}"))),
        }
    }
}

fn logical(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    if top.rule == Rule::BEx {
        if let Some(r) = guard_route(root, tp, ev) {
            return Ok(Rewrite::new(r?, CaseId::ImplicitDelta0));
        }
    }
    match track(root, tp)? {
        Track::Explicit { root_pos, via: None } => {
            let (out, inst) = erase_logical(root, tp, ev)?;
            let mut rw = Rewrite::new(out, CaseId::OtherLogical);
            rw.instance = inst.map(|s| (root.concl[root_pos].clone(), s));
            Ok(rw)
        }
        Track::Explicit { via: Some(j0), .. } => {
            let case = if root.at(&j0).rule == Rule::PSigma1 { CaseId::PSigma1 } else { CaseId::PRhoSigma1 };
            let out = match guard_route(root, &j0, ev) {
                Some(r) => r?,
                None => erase_logical(root, tp, ev)?.0,
            };
            Ok(Rewrite::new(out, case))
        }
        Track::Implicit(jp) => implicit(root, tp, &jp, ev),
    }
}

fn implicit(root: &Node, tp: &[usize], jp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let j = root.at(jp);
    let c = j.pl.formula.clone().ok_or_else(|| Error::Engine("cut without cut formula".into()))?;
    if c.is_delta0() {
        let k = match truth(ev, &c) {
            Truth::False => 1,
            Truth::True => 0,
            Truth::Undecided => return Err(stuck(format!("cannot decide cut formula {c}"))),
        };
        let out = graft(root, jp, j.prems[k].clone())?;
        return Ok(Rewrite::new(out, CaseId::ImplicitDelta0));
    }
    let hp: Path = (0..jp.len())
        .rev()
        .map(|i| jp[..i].to_vec())
        .find(|p| root.at(p).rule == Rule::H)
        .ok_or_else(|| stuck("no (h) rule below the implicit cut"))?;
    let h = root.at(&hp);
    let sub = &h.prems[0];
    let base = hp.len() + 1;
    let top = root.at(tp);
    let top_rel = &tp[base..];
    let j_rel = &jp[base..];

    let prem = close_all(&top.prems[0]);
    let inst = prem.concl.last().cloned().ok_or_else(|| stuck("empty premise"))?;
    let left = graft(sub, top_rel, prem)?;
    let ipos = left.at(top_rel).concl.iter().position(|f| *f == inst).unwrap_or(usize::MAX);
    let Fate::Root(apos) = descend(&left, top_rel, ipos).1 else {
        return Err(stuck("instance of the top does not reach the (h) premise"));
    };
    let a = left.concl[apos].clone();

    let top_main = top.concl[main_pos(top)?].clone();
    let jl = j.prems[0].clone();
    let nc = jl.concl.last().cloned().ok_or_else(|| stuck("empty cut premise"))?;
    let (jl, na) = match (&c, top.rule) {
        (Formula::Ex(..), Rule::Ex) => {
            let s = top.pl.witness.clone().ok_or_else(|| stuck("existential rule without witness"))?;
            let (jl, r) = invert_formula(&jl, &nc, &Inversion::Inst(close_term(&s)), ev)?;
            (jl, r[0].clone())
        }
        (Formula::ExB(..), Rule::Ex | Rule::BEx) => {
            let s = top.pl.witness.clone().ok_or_else(|| stuck("existential rule without witness"))?;
            let (jl, r) = invert_formula(&jl, &nc, &Inversion::Inst(close_term(&s)), ev)?;
            (drop_all(&jl, &r[0], ev)?, r[1].clone())
        }
        (Formula::Or(b0, b1), Rule::Or) => {
            let last = top.prems[0].concl.last().cloned();
            let k = if last.as_ref() == Some(&**b0) && top_main == c {
                0
            } else if last.as_ref() == Some(&**b1) && top_main == c {
                1
            } else {
                return Err(stuck("disjunct of the top does not match the cut formula"));
            };
            let (jl, r) = invert_formula(&jl, &nc, &Inversion::Conj(k), ev)?;
            (jl, r[0].clone())
        }
        _ => return Err(stuck(format!("implicit cut on {c} above a {} rule", top.rule))),
    };
    let right = graft(sub, j_rel, jl)?;
    let npos = right.at(j_rel).concl.iter().position(|f| *f == na).ok_or_else(|| Error::Engine("inverted formula vanished".into()))?;
    let Fate::Root(rpos) = descend(&right, j_rel, npos).1 else {
        return Err(stuck("inverted cut formula does not reach the (h) premise"));
    };
    let nr = right.concl[rpos].clone();
    if nr != a.negate() {
        return Err(stuck(format!("pushed formulas {a} and {nr} are not complementary")));
    }
    let mk_h = |n: Node, f: &Formula| {
        let mut concl = h.concl.clone();
        concl.push(f.clone());
        Node::new("", Rule::H, concl, vec![n])
    };
    let lh = mk_h(left, &a);
    let rh = mk_h(right, &nr);
    let (cf, prems) = if nr.is_e_formula() { (nr.clone(), vec![lh, rh]) } else { (a.clone(), vec![rh, lh]) };
    let cut = Node::new("", Rule::Cut, h.concl.clone(), prems).with(|p| p.formula = Some(cf));
    let mut out = root.clone();
    *out.at_mut(&hp) = cut;
    Ok(Rewrite::new(out, CaseId::ImplicitCut))
}

fn close_term(t: &ObjTerm) -> ObjTerm {
    let mut fv = BTreeSet::new();
    t.free_vars(&mut fv);
    fv.iter().fold(t.clone(), |t, x| t.subst(x, &ObjTerm::nat(0)))
}

fn rfl(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    let j1p: Path = (0..tp.len())
        .rev()
        .map(|i| tp[..i].to_vec())
        .find(|p| root.at(p).rule == Rule::D1)
        .ok_or_else(|| stuck("no D1 below the reflection"))?;
    let mut jp = j1p.clone();
    while let Some((_, up)) = jp.split_last() {
        if root.at(up).rule != Rule::D1 {
            break;
        }
        jp.pop();
    }
    let jn = root.at(&jp);
    let c1 = jn.pl.stock.clone().ok_or_else(|| stuck("D1 series without stock"))?;
    let mut sub_in_t: Path = j1p[jp.len()..].to_vec();
    sub_in_t.push(0);
    let sub = jn.at(&sub_in_t);
    let top_rel = &tp[j1p.len() + 1..];

    let a = top.pl.formula.clone().ok_or_else(|| stuck("reflection without formula"))?;
    let x = top.pl.vars.first().cloned().ok_or_else(|| stuck("reflection without bound variable"))?;
    let t = top.pl.terms.first().cloned().ok_or_else(|| stuck("reflection without bound term"))?;
    let y = top.pl.eigen.clone().ok_or_else(|| stuck("reflection without eigenvariable"))?;
    let fall = Formula::allb(&x, t.clone(), a.clone());

    let lsub = graft(sub, top_rel, top.prems[0].clone())?;
    let q = lsub.concl.iter().position(|f| *f == fall).ok_or_else(|| stuck("reflected formula lost below the rule"))?;
    let build_left = |ell: &OrdTerm| -> Result<Node> {
        let fr = fall.relativize(&ObjTerm::konst(ell.clone()));
        let mut concl = lsub.concl.clone();
        concl[q] = fr.clone();
        let d1 = Node::new("", Rule::D1, concl, vec![lsub.clone()]).with(|p| {
            p.rel = vec![q];
            p.relativizer = Some(ell.clone());
            p.stock = Some(c1.clone());
        });
        let mut tl = graft(jn, &sub_in_t, d1)?;
        move_to_end(&mut tl, &[fr]);
        Ok(tl)
    };
    let probe = build_left(&OrdTerm::d(1, c1.clone()))?;
    let mut tmp = Proof::new(probe.prems[0].clone());
    tmp.ensure_unique_ids();
    let al = assign_from(&tmp.root, Height { omega: 1, fin: 0 }, ev)?.o_proof().clone();
    let grown = nsum(&c1, &OrdTerm::wpow(al));
    let ell = OrdTerm::d(1, grown.clone());
    let mut tl = build_left(&ell)?;
    tl.pl.stock = Some(nsum(&grown, &OrdTerm::one()));

    let r0 = top.prems[1].subst(&y, &ObjTerm::konst(ell.clone()));
    let exf = r0.concl.last().cloned().ok_or_else(|| stuck("empty reflection premise"))?;
    let r0 = drop_all(&r0, &Formula::not_less(t.clone(), ObjTerm::konst(ell.clone())), ev)?;
    let rsub = graft(sub, top_rel, r0)?;
    let mut tr = graft(jn, &sub_in_t, rsub)?;
    move_to_end(&mut tr, std::slice::from_ref(&exf));
    tr.pl.stock = Some(nsum(&grown, &OrdTerm::one()));

    if tl.concl.last() != Some(&exf.negate()) {
        return Err(stuck("reflected instances are not complementary"));
    }
    let cut = Node::new("", Rule::Cut, jn.concl.clone(), vec![tl, tr]).with(|p| p.formula = Some(exf));
    let mut out = root.clone();
    *out.at_mut(&jp) = cut;
    Ok(Rewrite::new(out, CaseId::Rfl))
}

fn node_vars(n: &Node, out: &mut BTreeSet<String>) {
    for f in &n.concl {
        out.extend(f.free_vars());
    }
    out.extend(n.pl.eigen.iter().cloned());
    out.extend(n.pl.vars.iter().cloned());
    n.prems.iter().for_each(|p| node_vars(p, out));
}

fn ind(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    let top = root.at(tp);
    let [s, t] = top.pl.terms.as_slice() else {
        return Err(Error::Engine("induction without two terms".into()));
    };
    match ev.eval_literal(&Formula::less(s.clone(), t.clone())) {
        Truth::True => {}
        Truth::False => {
            let r = guard_route(root, tp, ev).ok_or_else(|| stuck("induction guard missing from the conclusion"))?;
            return Ok(Rewrite::new(r?, CaseId::IndGuard));
        }
        Truth::Undecided => return Err(stuck(format!("cannot decide {s} < {t}"))),
    }
    let a = top.pl.formula.clone().ok_or_else(|| stuck("induction without formula"))?;
    let x = top.pl.vars.first().cloned().ok_or_else(|| stuck("induction without variable"))?;
    let y = top.pl.eigen.clone().ok_or_else(|| stuck("induction without eigenvariable"))?;
    let mut avoid = BTreeSet::new();
    node_vars(top, &mut avoid);
    avoid.extend(a.free_vars());
    let y1 = fresh_var("y", &avoid);
    avoid.insert(y1.clone());
    let y2 = fresh_var("y", &avoid);
    let v1 = ObjTerm::var(&y1);
    let ay1 = a.subst(&x, &v1);
    let gamma = top.concl.clone();

    let left = weaken_in(&top.prems[0].subst(&y, &ObjTerm::var(&y2)), std::slice::from_ref(&ay1), 2)?;
    let right = taut_proof(&gamma, &ay1.negate());
    let mut ic = gamma.clone();
    ic.push(Formula::not_less(v1.clone(), s.clone()));
    ic.push(ay1.clone());
    let new_ind = Node::new("", Rule::Ind, ic, vec![left, right]).with(|p| {
        p.formula = Some(a.clone());
        p.vars = vec![x.clone()];
        p.eigen = Some(y2.clone());
        p.terms = vec![v1.clone(), s.clone()];
    });
    let all_s = Formula::allb(&x, s.clone(), a.clone());
    let mut bc = gamma.clone();
    bc.push(all_s.clone());
    let ball = Node::new("", Rule::BAll, bc, vec![new_ind]).with(|p| {
        p.main = vec![gamma.len()];
        p.eigen = Some(y1.clone());
    });

    let ls = top.prems[0].subst(&y, s);
    let rs = top.prems[1].clone();
    let as_ = a.subst(&x, s);
    let (cf, prems) = if as_.negate().is_e_formula() { (as_.negate(), vec![ls, rs]) } else { (as_, vec![rs, ls]) };
    let mut inner_c = gamma.clone();
    inner_c.push(all_s.negate());
    let inner = Node::new("", Rule::Cut, inner_c, prems).with(|p| p.formula = Some(cf));
    let outer = Node::new("", Rule::Cut, gamma, vec![ball, inner]).with(|p| p.formula = Some(all_s.negate()));
    Ok(Rewrite::new(graft(root, tp, outer)?, CaseId::IndUnfold))
}

fn dispatch(root: &Node, tp: &[usize], ev: &Evaluator) -> Result<Rewrite> {
    match root.at(tp).rule {
        Rule::Ax | Rule::Taut => ax_taut(root, tp, ev),
        Rule::PEx => pex(root, tp, ev),
        Rule::PRhoEx => prho_ex(root, tp, ev),
        Rule::All => forall(root, tp, ev),
        Rule::And | Rule::BAll | Rule::Ex | Rule::BEx | Rule::Or => logical(root, tp, ev),
        Rule::Ind => ind(root, tp, ev),
        Rule::Rfl => rfl(root, tp, ev),
        r => Err(Error::Engine(format!("main branch ends in a {r} rule"))),
    }
}

/// One reduction step on a validated proof with stock.
pub fn reduce_step(p: &Proof, ctx: &Context) -> Result<(Proof, ReductionStep)> {
    let rep = validate(p, ctx);
    let Some(ann) = rep.annotation.filter(|_| rep.diagnostics.is_empty()) else {
        let ds: Vec<String> = rep.diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(Error::shape(format!("input does not validate: {}", ds.join("; "))));
    };
    let o_before = ann.o_proof().clone();
    let q = close_main_branch(p);
    let ev = ctx.evaluator(&q);
    let tp = main_branch(&q).pop().unwrap_or_default();
    let rw = dispatch(&q.root, &tp, &ev)?;

    let mut next = Proof::new(dedup_tree(&rw.root));
    next.ensure_unique_ids();
    let rep = validate(&next, ctx);
    let Some(ann) = rep.annotation.filter(|_| rep.diagnostics.is_empty()) else {
        let ds: Vec<String> = rep.diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(Error::Engine(format!("{} produced an invalid proof: {}", rw.case, ds.join("; "))));
    };
    let o_after = ann.o_proof().clone();
    let ev = ctx.evaluator(&next);
    if ev.compare(&o_after, &o_before)? != Ordering::Less {
        return Err(Error::Engine(format!("{} did not lower the ordinal: {o_before} to {o_after}", rw.case)));
    }
    let added = next.end_sequent().iter().filter(|f| !p.end_sequent().contains(f)).cloned().collect();
    let stocks = next.stocks();
    Ok((next, ReductionStep { case: rw.case, o_before, o_after, added, stocks, instance: rw.instance }))
}

/// Reduces until a true formula appears, a step limit is hit or no case
/// applies.
pub fn run(p: &Proof, ctx: &Context, limits: &Limits) -> Result<Run> {
    let mut cur = p.clone();
    let mut trace = Vec::new();
    let mut prov: BTreeMap<Formula, Vec<ObjTerm>> = BTreeMap::new();
    let done = |outcome, trace, proof| Ok(Run { outcome, trace, proof });
    loop {
        let ev = ctx.evaluator(&cur);
        let found = cur
            .end_sequent()
            .iter()
            .find(|f| f.is_closed() && (f.is_literal() || f.is_delta0()) && truth(&ev, f) == Truth::True)
            .cloned();
        if let Some(f) = found {
            let terms = prov.get(&f).cloned().unwrap_or_default();
            return done(Outcome::Witness { formula: f, terms }, trace, cur);
        }
        if trace.len() >= limits.max_steps {
            return done(Outcome::StepLimit, trace, cur);
        }
        let (next, step) = match reduce_step(&cur, ctx) {
            Ok(r) => r,
            Err(Error::Stuck(m) | Error::Undecidable(m)) => return done(Outcome::Stuck(m), trace, cur),
            Err(e) => return Err(e),
        };
        if let Some((src, s)) = &step.instance {
            let mut terms = prov.get(src).cloned().unwrap_or_default();
            terms.push(s.clone());
            for f in &step.added {
                prov.insert(f.clone(), terms.clone());
            }
        }
        let ev = ctx.evaluator(&next);
        let mut verdict = None;
        for f in &step.added {
            match truth(&ev, f) {
                Truth::True => {
                    let terms = prov.get(f).cloned().unwrap_or_default();
                    verdict = Some(Outcome::Witness { formula: f.clone(), terms });
                    break;
                }
                Truth::Undecided if limits.strict => {
                    verdict = Some(Outcome::Stuck(format!("cannot decide added formula {f}")));
                }
                _ => {}
            }
        }
        trace.push(step);
        cur = next;
        if let Some(v) = verdict {
            return done(v, trace, cur);
        }
    }
}
