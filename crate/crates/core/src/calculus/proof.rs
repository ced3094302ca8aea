//! Proof figures as owned trees.
//!
//! Sequents are ordered formula lists. A premise consists of context
//! formulas, each of which maps to an equal formula of the conclusion (to its
//! relativization for the `D1` positions listed in `rel`), followed by the
//! rule's minor formulas in a fixed trailing block.

use crate::language::{Formula, ObjTerm};
use crate::ordinals::OrdTerm;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Sequent = Vec<Formula>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    Ax,
    Taut,
    PEx,
    PRhoEx,
    Or,
    And,
    Ex,
    BEx,
    All,
    BAll,
    Ind,
    Cut,
    Rfl,
    PSigma1,
    PRhoSigma1,
    H,
    D0,
    D1,
}

impl Rule {
    pub const ALL: [Rule; 18] = [
        Rule::Ax,
        Rule::Taut,
        Rule::PEx,
        Rule::PRhoEx,
        Rule::Or,
        Rule::And,
        Rule::Ex,
        Rule::BEx,
        Rule::All,
        Rule::BAll,
        Rule::Ind,
        Rule::Cut,
        Rule::Rfl,
        Rule::PSigma1,
        Rule::PRhoSigma1,
        Rule::H,
        Rule::D0,
        Rule::D1,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::Taut => "taut",
            Rule::PEx => "Pex",
            Rule::PRhoEx => "Prho0ex",
            Rule::Or => "or",
            Rule::And => "and",
            Rule::Ex => "ex",
            Rule::BEx => "bex",
            Rule::All => "all",
            Rule::BAll => "ball",
            Rule::Ind => "ind",
            Rule::Cut => "cut",
            Rule::Rfl => "Rfl",
            Rule::PSigma1 => "PSigma1",
            Rule::PRhoSigma1 => "Prho0Sigma1",
            Rule::H => "h",
            Rule::D0 => "D0",
            Rule::D1 => "D1",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.tag() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Ax | Rule::Taut | Rule::PEx | Rule::PRhoEx => 0,
            Rule::And | Rule::Ind | Rule::Cut | Rule::Rfl => 2,
            _ => 1,
        }
    }

    pub fn is_axiom(self) -> bool {
        self.arity() == 0
    }

    /// Rules whose rightmost premise continues the main branch.
    pub fn is_structural(self) -> bool {
        matches!(self, Rule::Cut | Rule::H | Rule::PSigma1 | Rule::PRhoSigma1 | Rule::D0 | Rule::D1)
    }

    /// Rules whose conclusion holds a main formula built from minor ones.
    pub fn is_logical(self) -> bool {
        matches!(self, Rule::Or | Rule::And | Rule::Ex | Rule::BEx | Rule::All | Rule::BAll)
    }

    /// Length of the trailing minor block of premise `k`.
    pub fn minor_count(self, k: usize) -> usize {
        match (self, k) {
            (Rule::BAll, _) => 2,
            (Rule::Ind, 0) => 2,
            (Rule::Rfl, 1) => 2,
            (Rule::H | Rule::D0 | Rule::D1, _) => 0,
            _ if self.is_axiom() => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Rule parameters. Which fields are used depends on the rule:
///
/// * `ex`, `bex`: `witness`
/// * `all`, `ball`: `eigen`
/// * `ind`: `formula` A with variable `vars[0]`, `eigen` y, `terms` [s, t]
/// * `cut`: `formula` is the cut formula
/// * `Rfl`: `formula` A with variable `vars[0]`, `eigen` y, `terms` [t]
/// * `PSigma1`: `formula` phi with variables [u, v] for the `w1` slot and the
///   parameter, `terms` [t0, t1, s]
/// * `Prho0Sigma1`: `formula` phi with variable [v], `terms` [t, s]
/// * `D1`: `rel` premise positions relativized by `relativizer`
/// * `D0`, `D1`: `relativizer` alpha and, on the lowest rule of a series,
///   `stock`
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    pub main: Vec<usize>,
    pub witness: Option<ObjTerm>,
    pub eigen: Option<String>,
    pub formula: Option<Formula>,
    pub vars: Vec<String>,
    pub terms: Vec<ObjTerm>,
    pub rel: Vec<usize>,
    pub relativizer: Option<OrdTerm>,
    pub stock: Option<OrdTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub rule: Rule,
    pub concl: Sequent,
    pub prems: Vec<Node>,
    pub pl: Payload,
}

pub type Path = Vec<usize>;

impl Node {
    pub fn new(id: impl Into<String>, rule: Rule, concl: Sequent, prems: Vec<Node>) -> Self {
        Node { id: id.into(), rule, concl, prems, pl: Payload::default() }
    }

    pub fn with(mut self, f: impl FnOnce(&mut Payload)) -> Self {
        f(&mut self.pl);
        self
    }

    pub fn at(&self, path: &[usize]) -> &Node {
        path.iter().fold(self, |n, &i| &n.prems[i])
    }

    pub fn at_mut(&mut self, path: &[usize]) -> &mut Node {
        path.iter().fold(self, |n, &i| &mut n.prems[i])
    }

    /// Pre-order walk with paths.
    pub fn walk<'a>(&'a self, path: &mut Path, f: &mut impl FnMut(&Path, &'a Node)) {
        f(path, self);
        for (i, p) in self.prems.iter().enumerate() {
            path.push(i);
            p.walk(path, f);
            path.pop();
        }
    }

    pub fn paths(&self) -> Vec<(Path, &Node)> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut |p, n| out.push((p.clone(), n)));
        out
    }

    pub fn size(&self) -> usize {
        1 + self.prems.iter().map(Node::size).sum::<usize>()
    }

    pub fn find(&self, id: &str) -> Option<Path> {
        self.paths().into_iter().find(|(_, n)| n.id == id).map(|(p, _)| p)
    }

    /// Closed object terms and all their ordinal subterms, across every
    /// sequent and payload term of the subtree.
    pub fn closed_terms(&self, out: &mut BTreeSet<OrdTerm>) {
        for f in &self.concl {
            for t in f.terms() {
                t.closed_subterms(out);
            }
        }
        for t in self.pl.terms.iter().chain(self.pl.witness.iter()) {
            t.closed_subterms(out);
        }
        if let Some(f) = &self.pl.formula {
            for t in f.terms() {
                t.closed_subterms(out);
            }
        }
        for p in &self.prems {
            p.closed_terms(out);
        }
    }

    /// Substitutes a term for a free variable in every sequent and payload of
    /// the subtree, stopping above rules that use `x` as eigenvariable.
    pub fn subst(&self, x: &str, t: &ObjTerm) -> Node {
        let mut n = self.clone();
        n.subst_in_place(x, t);
        n
    }

    fn subst_in_place(&mut self, x: &str, t: &ObjTerm) {
        for f in &mut self.concl {
            *f = f.subst(x, t);
        }
        if self.pl.eigen.as_deref() == Some(x) {
            return;
        }
        let shadow = self.pl.vars.iter().any(|v| v == x);
        if let Some(f) = &mut self.pl.formula {
            if !shadow {
                *f = f.subst(x, t);
            }
        }
        if let Some(w) = &mut self.pl.witness {
            *w = w.subst(x, t);
        }
        for s in &mut self.pl.terms {
            *s = s.subst(x, t);
        }
        for p in &mut self.prems {
            p.subst_in_place(x, t);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Height {
    /// 0 or 1: the number of omegas.
    pub omega: u8,
    pub fin: u64,
}

impl Height {
    pub const ZERO: Height = Height { omega: 0, fin: 0 };

    pub fn h0(self) -> u64 {
        self.fin
    }

    pub fn is_finite(self) -> bool {
        self.omega == 0
    }

    /// `h >= n` for a natural number `n`.
    pub fn at_least(self, n: u64) -> bool {
        self.omega > 0 || self.fin >= n
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.omega, self.fin) {
            (0, n) => write!(f, "{n}"),
            (_, 0) => f.write_str("w"),
            (_, n) => write!(f, "w+{n}"),
        }
    }
}

/// A proof figure: the tree plus the stock assignment, which lives in the
/// payloads of the `D0` and `D1` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub root: Node,
}

pub type StockAssignment = BTreeMap<String, OrdTerm>;

impl Proof {
    pub fn new(root: Node) -> Self {
        Proof { root }
    }

    pub fn end_sequent(&self) -> &Sequent {
        &self.root.concl
    }

    pub fn stocks(&self) -> StockAssignment {
        let mut out = BTreeMap::new();
        self.root.walk(&mut Vec::new(), &mut |_, n| {
            if let Some(c) = &n.pl.stock {
                out.insert(n.id.clone(), c.clone());
            }
        });
        out
    }

    /// Replaces the stock of every listed node.
    pub fn set_stocks(&mut self, c: &StockAssignment) {
        fn go(n: &mut Node, c: &StockAssignment) {
            if let Some(v) = c.get(&n.id) {
                n.pl.stock = Some(v.clone());
            }
            n.prems.iter_mut().for_each(|p| go(p, c));
        }
        go(&mut self.root, c);
    }

    /// Gives fresh ids to nodes whose id is duplicated or empty.
    pub fn ensure_unique_ids(&mut self) {
        let mut seen = BTreeSet::new();
        let mut all = BTreeSet::new();
        self.root.walk(&mut Vec::new(), &mut |_, n| {
            all.insert(n.id.clone());
        });
        let mut counter = 0usize;
        fn go(n: &mut Node, seen: &mut BTreeSet<String>, all: &mut BTreeSet<String>, counter: &mut usize) {
            if n.id.is_empty() || !seen.insert(n.id.clone()) {
                loop {
                    *counter += 1;
                    let cand = format!("n{counter}");
                    if !all.contains(&cand) {
                        all.insert(cand.clone());
                        seen.insert(cand.clone());
                        n.id = cand;
                        break;
                    }
                }
            }
            n.prems.iter_mut().for_each(|p| go(p, seen, all, counter));
        }
        go(&mut self.root, &mut seen, &mut all, &mut counter);
    }
}
