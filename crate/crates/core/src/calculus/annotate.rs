//! Heights, ordinal assignment, height regulation and stock conditions.

use super::check::{premise_map, Anc, Diagnostic};
use super::proof::{Height, Node, Path, Proof, Rule};
use crate::error::{Error, Result};
use crate::language::{Evaluator, Formula, ObjTerm};
use crate::ordinals::{gset_below, nprod, nsum, nsum_all, OrdTerm};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeAnn {
    pub o: OrdTerm,
    pub h: Height,
}

/// `o` and height of each node's conclusion, keyed by node id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub nodes: BTreeMap<String, NodeAnn>,
    pub root: String,
}

impl Annotation {
    pub fn o(&self, id: &str) -> &OrdTerm {
        &self.nodes[id].o
    }

    pub fn o_proof(&self) -> &OrdTerm {
        self.o(&self.root)
    }
}

pub fn heights(p: &Proof) -> BTreeMap<String, Height> {
    heights_from(&p.root, Height::ZERO)
}

/// Heights of a subtree whose conclusion sits at height `h`.
pub fn heights_from(n: &Node, h: Height) -> BTreeMap<String, Height> {
    fn go(n: &Node, h: Height, out: &mut BTreeMap<String, Height>) {
        out.insert(n.id.clone(), h);
        let up = match n.rule {
            Rule::D0 => Height::ZERO,
            Rule::D1 => Height { omega: 1, fin: 0 },
            Rule::H => Height { omega: h.omega, fin: h.fin + 1 },
            _ => h,
        };
        for q in &n.prems {
            go(q, up, out);
        }
    }
    let mut out = BTreeMap::new();
    go(n, h, &mut out);
    out
}

pub fn assign(p: &Proof, ev: &Evaluator) -> Result<Annotation> {
    assign_from(&p.root, Height::ZERO, ev)
}

/// Assignment for a subtree whose conclusion sits at height `h`.
pub fn assign_from(n: &Node, h: Height, ev: &Evaluator) -> Result<Annotation> {
    let hs = heights_from(n, h);
    let mut ann = Annotation { nodes: BTreeMap::new(), root: n.id.clone() };
    assign_node(n, &hs, ev, &mut ann)?;
    Ok(ann)
}

fn assign_node(n: &Node, hs: &BTreeMap<String, Height>, ev: &Evaluator, ann: &mut Annotation) -> Result<OrdTerm> {
    let mut os = Vec::with_capacity(n.prems.len());
    for q in &n.prems {
        os.push(assign_node(q, hs, ev, ann)?);
    }
    let h = hs[&n.id];
    let stock = || {
        n.pl.stock.clone().ok_or_else(|| Error::Transform { node: n.id.clone(), msg: format!("{} without stock", n.rule) })
    };
    let o = match n.rule {
        Rule::Ax | Rule::Taut | Rule::PEx | Rule::PRhoEx => OrdTerm::one(),
        Rule::PSigma1 | Rule::PRhoSigma1 => os[0].clone(),
        Rule::Or | Rule::Ex | Rule::BEx | Rule::All | Rule::BAll => nsum(&os[0], &OrdTerm::one()),
        Rule::And | Rule::Cut | Rule::Rfl => nsum(&os[0], &os[1]),
        Rule::H => OrdTerm::wpow(os[0].clone()),
        Rule::Ind => {
            let t = n.pl.terms.get(1).ok_or_else(|| Error::shape(format!("ind {} without induction term", n.id)))?;
            let base = nsum_all([&os[0], &os[1], &OrdTerm::nat(2)]);
            nprod(&base, &ev.mj(t)?)?
        }
        Rule::D1 if h.is_finite() => OrdTerm::d(1, nsum(&stock()?, &OrdTerm::wpow(os[0].clone()))),
        Rule::D1 => os[0].clone(),
        Rule::D0 => OrdTerm::d(0, nsum(&stock()?, &os[0])),
    };
    ann.nodes.insert(n.id.clone(), NodeAnn { o: o.clone(), h });
    Ok(o)
}

/// Implicit flags for each conclusion position: the occurrence has a
/// descendant that is consumed as a cut, induction or reflection formula.
pub fn implicit_flags(p: &Proof) -> BTreeMap<String, Vec<bool>> {
    fn go(n: &Node, flags: Vec<bool>, out: &mut BTreeMap<String, Vec<bool>>) {
        for (k, q) in n.prems.iter().enumerate() {
            let main_flag = n.pl.main.first().map(|&i| flags[i]).unwrap_or(false);
            let qf = premise_map(n, k)
                .into_iter()
                .map(|a| match a {
                    Anc::Ctx(i) => flags[i],
                    Anc::Minor => match n.rule {
                        Rule::Cut | Rule::Ind | Rule::Rfl => true,
                        _ => main_flag,
                    },
                    Anc::Lost => false,
                })
                .collect();
            go(q, qf, out);
        }
        out.insert(n.id.clone(), flags);
    }
    let mut out = BTreeMap::new();
    go(&p.root, vec![false; p.root.concl.len()], &mut out);
    out
}

/// Where an occurrence ends up when followed downwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fate {
    /// Reaches the end-sequent at this position.
    Root(usize),
    /// Consumed as a minor formula of the rule at this path.
    Minor(Path, usize),
    Lost(Path),
}

/// Follows the occurrence at `pos` of the node at `path` down the proof;
/// returns the chain of (path, position) it passes and its fate.
pub fn descend(root: &Node, path: &[usize], pos: usize) -> (Vec<(Path, usize)>, Fate) {
    let mut chain = vec![(path.to_vec(), pos)];
    let mut cur = path.to_vec();
    let mut p = pos;
    while let Some(k) = cur.pop() {
        let parent = root.at(&cur);
        match premise_map(parent, k).get(p) {
            Some(Anc::Ctx(i)) => {
                p = *i;
                chain.push((cur.clone(), p));
            }
            Some(Anc::Minor) => return (chain, Fate::Minor(cur, k)),
            _ => return (chain, Fate::Lost(cur)),
        }
    }
    (chain, Fate::Root(p))
}

pub fn regulation(p: &Proof) -> Vec<Diagnostic> {
    let hs = heights(p);
    let mut out = Vec::new();
    let d = |n: &Node, c: &str, m: String| Diagnostic::new(&n.id, c, m);
    if p.root.rule != Rule::D0 {
        out.push(d(&p.root, "h7", "the proof does not end with D0".into()));
    }
    for (path, n) in p.root.paths() {
        let h = hs[&n.id];
        if h.is_finite() {
            if let Some(f) = n.concl.iter().find(|f| !f.is_closed()) {
                out.push(d(n, "h1", format!("free variable in {f} at height {h}")));
            }
        }
        match n.rule {
            Rule::D0 if !path.is_empty() => out.push(d(n, "h7", "D0 below the end".into())),
            Rule::PRhoEx => {
                if let Some(&m) = n.pl.main.first() {
                    if let (_, Fate::Minor(cp, _)) = descend(&p.root, &path, m) {
                        let cut = p.root.at(&cp);
                        if cut.rule == Rule::Cut && hs[&cut.id].is_finite() {
                            out.push(d(cut, "h2", format!("cut on a descendant of the Pr0 axiom {} is below height w", n.id)));
                        }
                    }
                }
            }
            Rule::Cut => {
                if let Some(a) = &n.pl.formula {
                    if a.dg() > h.h0() {
                        out.push(d(n, "h3", format!("dg({a}) = {} exceeds h0 = {}", a.dg(), h.h0())));
                    }
                }
            }
            Rule::Ind => {
                if let (Some(a), Some(x), Some(s)) = (&n.pl.formula, n.pl.vars.first(), n.pl.terms.first()) {
                    let g = Formula::allb(x, s.clone(), a.clone()).dg();
                    if h.is_finite() || h.fin < g {
                        out.push(d(n, "h4", format!("height {h} is below w + {g}")));
                    }
                }
                if n.prems.iter().any(|q| q.paths().iter().any(|(_, m)| m.rule == Rule::Ind)) {
                    out.push(d(n, "h4", "nested ind".into()));
                }
            }
            Rule::Rfl => {
                let lowest = (0..path.len()).map(|i| p.root.at(&path[..i])).find(|m| m.rule == Rule::D1);
                match (lowest, &n.pl.formula, n.pl.vars.first(), n.pl.eigen.as_ref(), n.pl.terms.first()) {
                    (None, ..) => out.push(d(n, "h5", "no D1 below Rfl".into())),
                    (Some(j), Some(a), Some(x), Some(y), Some(t)) => {
                        let g = Formula::exb(x, t.clone(), a.relativize(&ObjTerm::var(y)).negate()).dg();
                        if !hs[&j.id].at_least(g) {
                            out.push(d(j, "h5", format!("height {} below dg {g} of the Rfl {} side formula", hs[&j.id], n.id)));
                        }
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        // (h6): below a D1, once the chain of D1's is left no D1 may follow.
        if n.rule == Rule::D1 {
            let mut left_chain = false;
            for i in (0..path.len()).rev() {
                let m = p.root.at(&path[..i]);
                if m.rule != Rule::D1 {
                    left_chain = true;
                } else if left_chain {
                    out.push(d(n, "h6", format!("D1 {} below with other rules in between", m.id)));
                    break;
                }
            }
        }
    }
    out
}

/// The rule whose stock governs the node at `path`: the nearest rule at or
/// below it in its D1 series that carries a stock, else the series base.
fn series_base<'a>(root: &'a Node, path: &[usize]) -> &'a Node {
    let mut i = path.len();
    while i > 0 && root.at(&path[..i]).pl.stock.is_none() && root.at(&path[..i - 1]).rule == Rule::D1 {
        i -= 1;
    }
    root.at(&path[..i])
}

fn cmp_diag(ev: &Evaluator, a: &OrdTerm, b: &OrdTerm) -> std::result::Result<Ordering, String> {
    ev.compare(a, b).map_err(|e| e.to_string())
}

pub fn stock_check(p: &Proof, ann: &Annotation, ev: &Evaluator) -> Vec<Diagnostic> {
    let hs = heights(p);
    let mut out = Vec::new();
    let d = |n: &Node, c: &str, m: String| Diagnostic::new(&n.id, c, m);
    let paths = p.root.paths();
    for (path, n) in &paths {
        let lowest_d1 = n.rule == Rule::D1 && hs[&n.id].is_finite();
        let wants_stock = lowest_d1 || (n.rule == Rule::D0 && path.is_empty());
        let may_have = wants_stock || n.rule == Rule::D1;
        if (wants_stock && n.pl.stock.is_none()) || (!may_have && n.pl.stock.is_some()) {
            let m = if wants_stock { "missing stock" } else { "stock on a rule outside the stock domain" };
            out.push(d(n, "stock", m.into()));
        }
        match n.rule {
            Rule::Ind => {
                if let (Some(a), Some(x), Some(y)) = (&n.pl.formula, n.pl.vars.first(), n.pl.eigen.as_ref()) {
                    let dg = a.subst(x, &ObjTerm::var(y)).dg();
                    let a1 = ann.o(&n.prems[1].id);
                    if *a1 != OrdTerm::nat(dg) {
                        out.push(d(n, "p1", format!("a1 = {a1} differs from dg = {dg}")));
                    }
                    let a0 = ann.o(&n.prems[0].id);
                    if a0.as_nat().is_none() {
                        out.push(d(n, "p1", format!("a0 = {a0} is not below w")));
                    }
                }
            }
            Rule::D0 | Rule::D1 => {
                let i = if n.rule == Rule::D0 { 0 } else { 1 };
                let (c, alpha) = match (&series_base(&p.root, path).pl.stock, &n.pl.relativizer) {
                    (Some(c), Some(a)) => (c.clone(), a.clone()),
                    _ => continue,
                };
                let alpha0 = match &alpha {
                    OrdTerm::D(j, a0) if *j == i => (**a0).clone(),
                    _ => continue,
                };
                let collapse = OrdTerm::d(i, c.clone());
                if !gset_below(&collapse, &c, &c).unwrap_or(false) {
                    out.push(d(n, "p2", format!("G_{collapse}({c}) is not below {c}")));
                }
                let need = nsum(&c, &OrdTerm::wpow(ann.o(&n.prems[0].id).clone()));
                for (what, have, want) in [("alpha0", alpha0.clone(), need.clone()), ("alpha", alpha.clone(), OrdTerm::d(i, need.clone()))] {
                    match cmp_diag(ev, &have, &want) {
                        Ok(Ordering::Less) => out.push(d(n, "p2", format!("{what} = {have} is below {want}"))),
                        Ok(_) => {}
                        Err(e) => out.push(d(n, "p2", format!("cannot compare {what}: {e}"))),
                    }
                }
                let mut terms = BTreeSet::new();
                n.prems[0].closed_terms(&mut terms);
                for t in &terms {
                    if !gset_below(&collapse, t, &c).unwrap_or(false) {
                        out.push(d(n, "p2.1", format!("G_{collapse}({t}) is not below {c}")));
                    }
                }
                if i == 0 {
                    for (qp, q) in n.prems[0].paths() {
                        if q.rule != Rule::D1 {
                            continue;
                        }
                        let mut full = path.clone();
                        full.push(0);
                        full.extend(qp);
                        let c1 = series_base(&p.root, &full).pl.stock.clone();
                        if let Some(OrdTerm::D(1, b0)) = &q.pl.relativizer {
                            if !matches!(cmp_diag(ev, b0, &c), Ok(Ordering::Less)) {
                                out.push(d(n, "p2.2", format!("D1 {} argument {b0} is not below {c}", q.id)));
                            }
                        }
                        if let Some(c1) = c1 {
                            if !gset_below(&collapse, &c1, &c).unwrap_or(false) {
                                out.push(d(n, "p2.2", format!("G_{collapse}({c1}) of the D1 {} stock is not below {c}", q.id)));
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}
