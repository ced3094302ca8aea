//! Occurrence-level proof surgery: false literal elimination, weakening and
//! inversion. Occurrences are addressed by node path and sequent position.

use crate::calculus::{is_sigma2_part, premise_map, Anc, Node, Proof, Rule};
use crate::error::{Error, Result};
use crate::language::{Evaluator, Formula, ObjTerm, Truth};

fn err(n: &Node, msg: impl Into<String>) -> Error {
    Error::Transform { node: n.id.clone(), msg: msg.into() }
}

/// Carries positional payloads over a change of sequent by formula equality.
pub(crate) fn remap(idx: &[usize], old: &[Formula], new: &[Formula]) -> Vec<usize> {
    idx.iter().filter_map(|&i| old.get(i).and_then(|f| new.iter().position(|g| g == f))).collect()
}

/// Remaps `main` after the node's own conclusion changed and `rel` after its
/// premise did.
fn fix_positions(m: &mut Node, old_concl: &[Formula], old_prem0: Option<Vec<Formula>>) {
    m.pl.main = remap(&m.pl.main, old_concl, &m.concl);
    if let (Some(old), Rule::D1) = (old_prem0, m.rule) {
        m.pl.rel = remap(&m.pl.rel, &old, &m.prems[0].concl);
    }
}

/// Premise positions whose formula continues at conclusion position `pos`.
fn ancestors_of(n: &Node, k: usize, pos: usize) -> Vec<usize> {
    premise_map(n, k).into_iter().enumerate().filter(|(_, a)| *a == Anc::Ctx(pos)).map(|(p, _)| p).rev().collect()
}

fn truth(ev: &Evaluator, f: &Formula) -> Truth {
    if !f.is_closed() {
        Truth::Undecided
    } else if f.is_literal() {
        ev.eval_literal(f)
    } else if f.is_delta0() {
        ev.eval_delta0(f)
    } else {
        Truth::Undecided
    }
}

/// Removes the false closed literal at end-sequent position `pos` together
/// with all its ancestors. Ordinals are unchanged node for node.
pub fn drop_false_literal(p: &Proof, pos: usize, ev: &Evaluator) -> Result<Proof> {
    Ok(Proof::new(drop_false_in(&p.root, pos, ev)?))
}

/// The same on a subproof: drops the conclusion occurrence at `pos`.
pub fn drop_false_in(n: &Node, pos: usize, ev: &Evaluator) -> Result<Node> {
    let f = n.concl.get(pos).ok_or_else(|| err(n, format!("no formula at position {pos}")))?;
    if !f.is_literal() || !f.is_closed() {
        return Err(err(n, format!("{f} is not a closed literal")));
    }
    if ev.eval_literal(f) != Truth::False {
        return Err(err(n, format!("{f} is not false")));
    }
    drop_at(n, pos)
}

/// Removes repeated formulas from every conclusion of the subtree, keeping
/// the last copy. A premise's trailing minor block is left alone, so a minor
/// formula may also occur once in the context.
pub fn dedup_tree(n: &Node) -> Node {
    dedup_with(n, 0)
}

fn dedup_with(n: &Node, minors: usize) -> Node {
    let mut m = n.clone();
    m.prems = n.prems.iter().enumerate().map(|(k, q)| dedup_with(q, n.rule.minor_count(k).min(q.concl.len()))).collect();
    let ctx = m.concl.len() - minors;
    let mut keep = Vec::with_capacity(m.concl.len());
    for (i, f) in m.concl.iter().enumerate() {
        if i >= ctx || !m.concl[i + 1..ctx].contains(f) {
            keep.push(f.clone());
        }
    }
    m.concl = keep;
    let old_prem0 = n.prems.first().map(|q| q.concl.clone());
    fix_positions(&mut m, &n.concl, old_prem0);
    m
}

fn drop_at(n: &Node, pos: usize) -> Result<Node> {
    let mut m = n.clone();
    if m.pl.main.contains(&pos) {
        match m.rule {
            Rule::Taut => {
                let other = *m.pl.main.iter().find(|&&i| i != pos).unwrap();
                m.rule = Rule::Ax;
                m.pl.main = vec![other];
            }
            _ => return Err(err(n, format!("{} is the main formula of {}", n.concl[pos], n.rule))),
        }
    }
    m.concl.remove(pos);
    let old_prem0 = n.prems.first().map(|q| q.concl.clone());
    for k in 0..n.prems.len() {
        for p in ancestors_of(n, k, pos) {
            m.prems[k] = drop_at(&m.prems[k], p)?;
        }
    }
    fix_positions(&mut m, &n.concl, old_prem0);
    Ok(m)
}

/// Adds the closed formulas `delta` to every sequent of the subtree, keeping
/// minor blocks trailing. Heights, degrees and ordinals are unchanged.
pub fn weaken_node(n: &Node, delta: &[Formula]) -> Result<Node> {
    if let Some(f) = delta.iter().find(|f| !f.is_closed()) {
        return Err(err(n, format!("cannot weaken by open formula {f}")));
    }
    weaken_in(n, delta, 0)
}

/// Weakening that admits open formulas; the caller keeps their variables
/// apart from every eigenvariable of the subtree.
pub(crate) fn weaken_in(n: &Node, delta: &[Formula], tail: usize) -> Result<Node> {
    if n.rule == Rule::D0 {
        if let Some(f) = delta.iter().find(|f| !is_sigma2_part(f)) {
            return Err(err(n, format!("{f} is not allowed below D0")));
        }
    }
    let mut m = n.clone();
    let at = m.concl.len() - tail.min(m.concl.len());
    let fresh: Vec<Formula> = delta.iter().filter(|f| !n.concl.contains(f)).cloned().collect();
    m.concl.splice(at..at, fresh);
    for k in 0..n.prems.len() {
        m.prems[k] = weaken_in(&n.prems[k], delta, n.rule.minor_count(k))?;
    }
    let old_prem0 = n.prems.first().map(|q| q.concl.clone());
    fix_positions(&mut m, &n.concl, old_prem0);
    Ok(m)
}

pub fn weaken(p: &Proof, delta: &[Formula]) -> Result<Proof> {
    Ok(Proof::new(weaken_node(&p.root, delta)?))
}

/// Which instance an inversion keeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    /// `all x B` to `B(s)`, `all x<t B` to `s/<t, B(s)`.
    Inst(ObjTerm),
    /// `A0 and A1` to `Aj`.
    Conj(usize),
    /// `A0 or A1` to `A0, A1`.
    Disj,
}

pub fn replacement(c: &Formula, inv: &Inversion) -> Option<Vec<Formula>> {
    match (c, inv) {
        (Formula::All(x, b), Inversion::Inst(s)) => Some(vec![b.subst(x, s)]),
        (Formula::AllB(x, t, b), Inversion::Inst(s)) => Some(vec![Formula::not_less(s.clone(), t.clone()), b.subst(x, s)]),
        (Formula::And(a0, a1), Inversion::Conj(j)) => Some(vec![if *j == 0 { (**a0).clone() } else { (**a1).clone() }]),
        (Formula::Or(a0, a1), Inversion::Disj) => Some(vec![(**a0).clone(), (**a1).clone()]),
        _ => None,
    }
}

/// Replaces the end-sequent occurrence at `pos` (and all its ancestors) by
/// its inversion; introductions of the occurrence are removed.
pub fn invert(p: &Proof, pos: usize, inv: &Inversion, ev: &Evaluator) -> Result<Proof> {
    Ok(Proof::new(dedup_tree(&invert_at(&p.root, pos, inv, ev)?)))
}

fn introduces(n: &Node, c: &Formula, inv: &Inversion) -> bool {
    matches!(
        (n.rule, c, inv),
        (Rule::All, Formula::All(..), Inversion::Inst(_))
            | (Rule::BAll, Formula::AllB(..), Inversion::Inst(_))
            | (Rule::And, Formula::And(..), Inversion::Conj(_))
            | (Rule::Or, Formula::Or(..), Inversion::Disj)
    )
}

pub fn invert_at(n: &Node, pos: usize, inv: &Inversion, ev: &Evaluator) -> Result<Node> {
    let c = n.concl.get(pos).ok_or_else(|| err(n, format!("no formula at position {pos}")))?.clone();
    let rep = replacement(&c, inv).ok_or_else(|| err(n, format!("{c} cannot be inverted this way")))?;
    if n.pl.main.first() == Some(&pos) && introduces(n, &c, inv) {
        let k = match inv {
            Inversion::Conj(j) => *j,
            _ => 0,
        };
        let mut prem = n.prems[k].clone();
        if let (Inversion::Inst(s), Some(y)) = (inv, &n.pl.eigen) {
            prem = prem.subst(y, s);
        }
        for q in ancestors_of(n, k, pos) {
            prem = invert_at(&prem, q, inv, ev)?;
        }
        let missing: Vec<Formula> = rep.iter().filter(|f| !prem.concl.contains(f)).cloned().collect();
        if !missing.is_empty() {
            prem = weaken_node(&prem, &missing)?;
        }
        // the premise's trailing minors now sit inside the replacement
        let mut target = n.concl.clone();
        target.splice(pos..pos + 1, rep.iter().cloned());
        if prem.concl.iter().all(|f| target.contains(f)) && target.iter().all(|f| prem.concl.contains(f)) {
            let old = std::mem::replace(&mut prem.concl, target);
            fix_positions(&mut prem, &old, None);
        }
        return Ok(prem);
    }
    match n.rule {
        Rule::PSigma1 | Rule::PRhoSigma1 if n.pl.main.first() == Some(&pos) => {
            return Err(err(n, format!("{} main formula cannot be inverted", n.rule)));
        }
        Rule::D1 if n.pl.rel.iter().any(|&q| premise_map(n, 0).get(q) == Some(&Anc::Ctx(pos))) => {
            return Err(err(n, "relativized D1 formula cannot be inverted"));
        }
        _ => {}
    }
    let mut m = n.clone();
    m.concl.splice(pos..pos + 1, rep.iter().cloned());
    if n.pl.main.contains(&pos) {
        // An axiom whose main formula is the occurrence: re-justify by truth.
        let cands: Vec<&Formula> = match n.rule {
            Rule::Ax => rep.iter().collect(),
            Rule::Taut => rep.iter().chain(n.pl.main.iter().map(|&i| &n.concl[i]).filter(|f| **f != c)).collect(),
            _ => return Err(err(n, format!("{} main formula cannot be inverted", n.rule))),
        };
        let good = cands.into_iter().find(|f| truth(ev, f) == Truth::True);
        let good = good.ok_or_else(|| err(n, "no true formula left after inverting the axiom"))?.clone();
        m.rule = Rule::Ax;
        m.pl.main = vec![m.concl.iter().position(|f| *f == good).unwrap()];
        return Ok(m);
    }
    let old_prem0 = n.prems.first().map(|q| q.concl.clone());
    for k in 0..n.prems.len() {
        for q in ancestors_of(n, k, pos) {
            m.prems[k] = invert_at(&m.prems[k], q, inv, ev)?;
        }
    }
    fix_positions(&mut m, &n.concl, old_prem0);
    Ok(m)
}
