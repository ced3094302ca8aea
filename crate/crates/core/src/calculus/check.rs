//! Rule schemas and the positional ancestor maps.

use super::proof::{Node, Proof, Rule};
use crate::language::{Atom, Evaluator, Formula, ObjTerm, Truth};
use crate::ordinals::OrdTerm;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub node: String,
    pub clause: String,
    pub msg: String,
}

impl Diagnostic {
    pub fn new(node: &str, clause: &str, msg: impl Into<String>) -> Self {
        Diagnostic { node: node.to_string(), clause: clause.to_string(), msg: msg.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.node, self.clause, self.msg)
    }
}

/// Where a premise formula goes in the conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anc {
    /// Context formula, continuing at this conclusion position.
    Ctx(usize),
    /// Minor formula of the rule.
    Minor,
    /// No matching conclusion formula (schema violation).
    Lost,
}

pub(crate) fn omega1() -> ObjTerm {
    ObjTerm::omega1()
}

/// Premise `k`'s formula at `p` after crossing the rule.
pub fn image(n: &Node, k: usize, p: usize) -> Option<Formula> {
    let prem = &n.prems[k];
    let f = prem.concl.get(p)?;
    if n.rule == Rule::D1 && n.pl.rel.contains(&p) {
        let a = n.pl.relativizer.clone()?;
        return Some(f.relativize(&ObjTerm::konst(a)));
    }
    Some(f.clone())
}

pub fn premise_map(n: &Node, k: usize) -> Vec<Anc> {
    let prem = &n.prems[k];
    let len = prem.concl.len();
    let minors = n.rule.minor_count(k).min(len);
    (0..len)
        .map(|p| {
            if p >= len - minors {
                return Anc::Minor;
            }
            match image(n, k, p).and_then(|g| n.concl.iter().position(|c| *c == g)) {
                Some(i) => Anc::Ctx(i),
                None => Anc::Lost,
            }
        })
        .collect()
}

/// Formulas the rule may introduce without an ancestor, as conclusion
/// positions.
fn fresh_positions(n: &Node, ev: &Evaluator) -> Vec<usize> {
    let mut out: Vec<usize> = n.pl.main.clone();
    for (g, _) in guards(n) {
        out.extend(n.concl.iter().enumerate().filter(|(_, c)| **c == g).map(|(i, _)| i));
    }
    let _ = ev;
    out
}

/// Optional guard literals of the rule with their positive forms.
pub fn guards(n: &Node) -> Vec<(Formula, Formula)> {
    let t = &n.pl.terms;
    let pair = |s: &ObjTerm, t: &ObjTerm| (Formula::not_less(s.clone(), t.clone()), Formula::less(s.clone(), t.clone()));
    let lit = |a: Atom| (Formula::lit(false, a.clone()), Formula::lit(true, a));
    match n.rule {
        Rule::BEx => match (&n.pl.witness, n.pl.main.first().and_then(|&i| n.concl.get(i))) {
            (Some(s), Some(Formula::ExB(_, b, _))) => vec![pair(s, b)],
            _ => vec![],
        },
        Rule::Ind if t.len() == 2 => vec![pair(&t[0], &t[1])],
        Rule::PSigma1 if t.len() == 3 => vec![lit(Atom::P(t[0].clone(), t[1].clone())), pair(&t[2], &t[0])],
        Rule::PRhoSigma1 if t.len() == 2 => vec![lit(Atom::PRho(t[0].clone())), pair(&t[1], &t[0])],
        Rule::PEx => match n.pl.main.first().and_then(|&i| n.concl.get(i)).and_then(pex_term) {
            Some(s) => vec![pair(&s, &omega1())],
            None => vec![],
        },
        _ => vec![],
    }
}

/// `s` from `exb x w1 (exb y w1 (and (< s x) (P x y)))`.
pub fn pex_term(f: &Formula) -> Option<ObjTerm> {
    if let Formula::ExB(x, b1, body) = f {
        if let Formula::ExB(y, b2, inner) = &**body {
            if let Formula::And(l, r) = &**inner {
                let w1 = omega1();
                if let (Formula::Lit(true, Atom::Less(s, vx)), Formula::Lit(true, Atom::P(px, py))) = (&**l, &**r) {
                    let ok = *b1 == w1
                        && *b2 == w1
                        && x != y
                        && *vx == ObjTerm::var(x)
                        && *px == ObjTerm::var(x)
                        && *py == ObjTerm::var(y)
                        && !term_mentions(s, x)
                        && !term_mentions(s, y);
                    if ok {
                        return Some(s.clone());
                    }
                }
            }
        }
    }
    None
}

/// `s` from `ex x (and (< s x) (Pr0 x))`.
pub fn prhoex_term(f: &Formula) -> Option<ObjTerm> {
    if let Formula::Ex(x, body) = f {
        if let Formula::And(l, r) = &**body {
            if let (Formula::Lit(true, Atom::Less(s, vx)), Formula::Lit(true, Atom::PRho(px))) = (&**l, &**r) {
                if *vx == ObjTerm::var(x) && *px == ObjTerm::var(x) && !term_mentions(s, x) {
                    return Some(s.clone());
                }
            }
        }
    }
    None
}

fn term_mentions(t: &ObjTerm, x: &str) -> bool {
    let mut fv = Default::default();
    t.free_vars(&mut fv);
    fv.contains(x)
}

/// `ex z (ex w (and (Pr0 z) B))` with `B` bounded and free of `P`.
pub fn is_rfl_body(f: &Formula) -> bool {
    if let Formula::Ex(z, body) = f {
        if let Formula::Ex(w, inner) = &**body {
            if let Formula::And(l, b) = &**inner {
                return z != w && **l == Formula::lit(true, Atom::PRho(ObjTerm::var(z))) && b.is_delta0();
            }
        }
    }
    false
}

/// Closed formulas allowed in the relativized part of a `D1`.
pub fn is_d1_family(f: &Formula) -> bool {
    if !f.is_closed() {
        return false;
    }
    match f {
        Formula::AllB(_, _, a) => is_rfl_body(a),
        Formula::Ex(w, body) => {
            is_rfl_body(f)
                || matches!(&**body, Formula::And(l, b)
                    if matches!(&**l, Formula::Lit(true, Atom::PRho(s)) if !term_mentions(s, w)) && b.is_delta0())
        }
        _ => false,
    }
}

/// Closed subformulas of sentences `ex x (all y B)` with bounded `B`; an
/// `ex x B` sentence counts with a vacuous universal.
pub fn is_sigma2_part(f: &Formula) -> bool {
    if !f.is_closed() {
        return false;
    }
    let pi = |g: &Formula| match g {
        Formula::All(_, b) => b.is_delta0(),
        _ => g.is_delta0(),
    };
    match f {
        Formula::Ex(_, b) => pi(b),
        _ => pi(f),
    }
}

/// Binds the free variables of `pat` so that it becomes `f`.
pub fn match_instance(pat: &Formula, f: &Formula) -> bool {
    let mut bind = BTreeMap::new();
    let bound = Vec::new();
    if !match_f(pat, f, &mut bind, &bound) {
        return false;
    }
    let inst = bind.iter().fold(pat.clone(), |acc, (x, t): (&String, &ObjTerm)| acc.subst(x, t));
    inst == *f
}

fn match_f(p: &Formula, f: &Formula, bind: &mut BTreeMap<String, ObjTerm>, bound: &[String]) -> bool {
    let with = |x: &str| {
        let mut b = bound.to_vec();
        b.push(x.to_string());
        b
    };
    match (p, f) {
        (Formula::Lit(a, x), Formula::Lit(b, y)) => a == b && match_atom(x, y, bind, bound),
        (Formula::Or(a, b), Formula::Or(c, d)) | (Formula::And(a, b), Formula::And(c, d)) => {
            std::mem::discriminant(p) == std::mem::discriminant(f) && match_f(a, c, bind, bound) && match_f(b, d, bind, bound)
        }
        (Formula::Ex(x, a), Formula::Ex(y, b)) | (Formula::All(x, a), Formula::All(y, b)) => {
            std::mem::discriminant(p) == std::mem::discriminant(f) && x == y && match_f(a, b, bind, &with(x))
        }
        (Formula::ExB(x, s, a), Formula::ExB(y, t, b)) | (Formula::AllB(x, s, a), Formula::AllB(y, t, b)) => {
            std::mem::discriminant(p) == std::mem::discriminant(f)
                && x == y
                && match_t(s, t, bind, bound)
                && match_f(a, b, bind, &with(x))
        }
        _ => false,
    }
}

fn match_atom(p: &Atom, f: &Atom, bind: &mut BTreeMap<String, ObjTerm>, bound: &[String]) -> bool {
    match (p, f) {
        (Atom::R(i, _, _), Atom::R(j, _, _)) if i != j => false,
        _ if std::mem::discriminant(p) != std::mem::discriminant(f) => false,
        _ => p.terms().iter().zip(f.terms()).all(|(s, t)| match_t(s, t, bind, bound)),
    }
}

fn match_t(p: &ObjTerm, t: &ObjTerm, bind: &mut BTreeMap<String, ObjTerm>, bound: &[String]) -> bool {
    match (p, t) {
        (ObjTerm::Var(x), _) if !bound.contains(x) => match bind.get(x) {
            Some(prev) => prev == t,
            None => {
                bind.insert(x.clone(), t.clone());
                true
            }
        },
        // Closed instances fold to constants; the final substitution check
        // decides these.
        (_, ObjTerm::Const(_)) => true,
        (ObjTerm::Var(x), ObjTerm::Var(y)) => x == y,
        (ObjTerm::Plus(a, b), ObjTerm::Plus(c, d)) | (ObjTerm::Times(a, b), ObjTerm::Times(c, d)) => {
            std::mem::discriminant(p) == std::mem::discriminant(t) && match_t(a, c, bind, bound) && match_t(b, d, bind, bound)
        }
        (ObjTerm::WExp(a), ObjTerm::WExp(b)) => match_t(a, b, bind, bound),
        (ObjTerm::Mu(i, xs), ObjTerm::Mu(j, ys)) => {
            i == j && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| match_t(a, b, bind, bound))
        }
        _ => false,
    }
}

pub struct Checker<'a> {
    pub ev: &'a Evaluator<'a>,
    pub axioms: &'a [Formula],
}

impl Checker<'_> {
    pub fn rule_check(&self, p: &Proof) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut ids = BTreeMap::new();
        p.root.walk(&mut Vec::new(), &mut |_, n| {
            if ids.insert(n.id.clone(), ()).is_some() {
                out.push(Diagnostic::new(&n.id, "ids", "duplicate node id"));
            }
            for (clause, msg) in self.node_errors(n) {
                out.push(Diagnostic::new(&n.id, clause, msg));
            }
        });
        out
    }

    fn truth(&self, f: &Formula) -> Truth {
        if f.is_literal() {
            self.ev.eval_literal(f)
        } else {
            self.ev.eval_delta0(f)
        }
    }

    fn node_errors(&self, n: &Node) -> Vec<(&'static str, String)> {
        let mut errs: Vec<(&'static str, String)> = Vec::new();
        let tag = n.rule.tag();
        if n.prems.len() != n.rule.arity() {
            errs.push(("arity", format!("{tag} takes {} premises, got {}", n.rule.arity(), n.prems.len())));
            return errs;
        }
        for &i in &n.pl.main {
            if i >= n.concl.len() {
                errs.push(("main", format!("main position {i} out of range")));
                return errs;
            }
        }
        let main = |k: usize| n.pl.main.get(k).map(|&i| &n.concl[i]);
        let need_main = !matches!(n.rule, Rule::Ind | Rule::Cut | Rule::Rfl | Rule::H | Rule::D0 | Rule::D1);
        if need_main && main(0).is_none() {
            errs.push(("main", format!("{tag} needs a main formula position")));
            return errs;
        }
        // Expected minor blocks, one per premise.
        let mut minors: Vec<Vec<Formula>> = vec![Vec::new(); n.prems.len()];
        let t = &n.pl.terms;
        let eigen_free = |y: &str, errs: &mut Vec<(&'static str, String)>| {
            if n.concl.iter().any(|c| c.free_vars().contains(y)) {
                errs.push(("eigen", format!("eigenvariable {y} occurs free in the conclusion")));
            }
        };
        match n.rule {
            Rule::Ax => {
                let a = main(0).unwrap();
                let ok = (a.is_closed() && (a.is_literal() || a.is_delta0()) && self.truth(a) == Truth::True)
                    || (a.is_delta0() && self.axioms.iter().any(|ax| match_instance(ax, a)));
                if !ok {
                    errs.push(("ax", format!("{a} is neither a true closed literal/bounded sentence nor an axiom instance")));
                }
            }
            Rule::Taut => match n.pl.main.as_slice() {
                [i, j] if n.concl[*i] == n.concl[*j].negate() && (n.concl[*j].is_literal() || n.concl[*j].is_delta0()) => {}
                _ => errs.push(("taut", "main positions must hold ~A, A for a literal or bounded A".into())),
            },
            Rule::PEx => {
                if pex_term(main(0).unwrap()).is_none() {
                    errs.push(("Pex", format!("{} is not ex x,y<w1 (s<x and P(x,y))", main(0).unwrap())));
                }
            }
            Rule::PRhoEx => {
                if prhoex_term(main(0).unwrap()).is_none() {
                    errs.push(("Prho0ex", format!("{} is not ex x (s<x and Pr0(x))", main(0).unwrap())));
                }
            }
            Rule::Or => match main(0).unwrap() {
                Formula::Or(a, b) => {
                    let last = n.prems[0].concl.last();
                    match last {
                        Some(m) if m == &**a || m == &**b => minors[0].push(m.clone()),
                        _ => errs.push(("or", "premise must end with a disjunct".into())),
                    }
                }
                f => errs.push(("or", format!("main formula {f} is not a disjunction"))),
            },
            Rule::And => match main(0).unwrap() {
                Formula::And(a, b) => {
                    minors[0].push((**a).clone());
                    minors[1].push((**b).clone());
                }
                f => errs.push(("and", format!("main formula {f} is not a conjunction"))),
            },
            Rule::Ex | Rule::BEx => match (main(0).unwrap(), &n.pl.witness, n.rule) {
                (Formula::Ex(x, a), Some(s), Rule::Ex) | (Formula::ExB(x, _, a), Some(s), Rule::BEx) => {
                    minors[0].push(a.subst(x, s))
                }
                (_, None, _) => errs.push((tag_static(n.rule), "missing witness".into())),
                (f, _, _) => errs.push((tag_static(n.rule), format!("main formula {f} has the wrong shape"))),
            },
            Rule::All | Rule::BAll => match (main(0).unwrap(), &n.pl.eigen, n.rule) {
                (Formula::All(x, a), Some(y), Rule::All) => {
                    minors[0].push(a.subst(x, &ObjTerm::var(y)));
                    eigen_free(y, &mut errs);
                }
                (Formula::AllB(x, b, a), Some(y), Rule::BAll) => {
                    minors[0].push(Formula::not_less(ObjTerm::var(y), b.clone()));
                    minors[0].push(a.subst(x, &ObjTerm::var(y)));
                    eigen_free(y, &mut errs);
                }
                (_, None, _) => errs.push((tag_static(n.rule), "missing eigenvariable".into())),
                (f, _, _) => errs.push((tag_static(n.rule), format!("main formula {f} has the wrong shape"))),
            },
            Rule::Ind => match (&n.pl.formula, n.pl.vars.as_slice(), &n.pl.eigen, t.as_slice()) {
                (Some(a), [x], Some(y), [s, _]) => {
                    let vy = ObjTerm::var(y);
                    minors[0].push(Formula::allb(x, vy.clone(), a.clone()).negate());
                    minors[0].push(a.subst(x, &vy));
                    minors[1].push(a.subst(x, s).negate());
                    eigen_free(y, &mut errs);
                }
                _ => errs.push(("ind", "needs :formula, :vars (x), :eigen and :terms (s t)".into())),
            },
            Rule::Cut => match &n.pl.formula {
                Some(a) if a.is_e_formula() => {
                    minors[0].push(a.negate());
                    minors[1].push(a.clone());
                }
                Some(a) => errs.push(("cut", format!("cut formula not E-formula: {a}"))),
                None => errs.push(("cut", "missing cut formula".into())),
            },
            Rule::Rfl => match (&n.pl.formula, n.pl.vars.as_slice(), &n.pl.eigen, t.as_slice()) {
                (Some(a), [x], Some(y), [tt]) => {
                    if !is_rfl_body(a) {
                        errs.push(("Rfl", format!("{a} is not ex z ex w (Pr0(z) and B)")));
                    }
                    let vy = ObjTerm::var(y);
                    minors[0].push(Formula::allb(x, tt.clone(), a.clone()));
                    minors[1].push(Formula::not_less(tt.clone(), vy.clone()));
                    minors[1].push(Formula::exb(x, tt.clone(), a.relativize(&vy).negate()));
                    eigen_free(y, &mut errs);
                }
                _ => errs.push(("Rfl", "needs :formula, :vars (x), :eigen and :terms (t)".into())),
            },
            Rule::PSigma1 => match (&n.pl.formula, n.pl.vars.as_slice(), t.as_slice()) {
                (Some(phi), [u, v], [t0, t1, s]) => {
                    if !phi.is_sigma1() {
                        errs.push(("PSigma1", format!("{phi} is not a Sigma1 formula")));
                    }
                    minors[0].push(phi.subst(u, &omega1()).subst(v, s));
                    let want = phi.subst(u, t0).subst(v, s).relativize(t1);
                    if main(0) != Some(&want) {
                        errs.push(("PSigma1", format!("main formula must be {want}")));
                    }
                }
                _ => errs.push(("PSigma1", "needs :formula, :vars (u v) and :terms (t0 t1 s)".into())),
            },
            Rule::PRhoSigma1 => match (&n.pl.formula, n.pl.vars.as_slice(), t.as_slice()) {
                (Some(phi), [v], [tt, s]) => {
                    if !phi.is_sigma1() {
                        errs.push(("Prho0Sigma1", format!("{phi} is not a Sigma1 formula")));
                    }
                    minors[0].push(phi.subst(v, s));
                    let want = phi.subst(v, s).relativize(tt);
                    if main(0) != Some(&want) {
                        errs.push(("Prho0Sigma1", format!("main formula must be {want}")));
                    }
                }
                _ => errs.push(("Prho0Sigma1", "needs :formula, :vars (v) and :terms (t s)".into())),
            },
            Rule::H => {}
            Rule::D1 => {
                match &n.pl.relativizer {
                    Some(OrdTerm::D(1, _)) => {}
                    _ => errs.push(("D1", "relativizer must be a D1 term".into())),
                }
                let prem = &n.prems[0].concl;
                for &p in &n.pl.rel {
                    match prem.get(p) {
                        Some(f) if is_d1_family(f) => {}
                        Some(f) => errs.push(("D1", format!("{f} may not be relativized"))),
                        None => errs.push(("D1", format!("relativized position {p} out of range"))),
                    }
                }
            }
            Rule::D0 => {
                if !matches!(&n.pl.relativizer, Some(OrdTerm::D(0, _))) {
                    errs.push(("D0", "relativizer must be a D0 term".into()));
                }
                for f in &n.concl {
                    if !is_sigma2_part(f) {
                        errs.push(("D0", format!("{f} is neither a closed bounded formula nor a closed Sigma2 part")));
                    }
                }
            }
        }
        for (g, pos) in guards(n) {
            if !n.concl.contains(&g) && self.ev.eval_literal(&pos) != Truth::True {
                errs.push(("guard", format!("{g} may only be absent when {pos} is true")));
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        // Minor blocks and context maps.
        let fresh = fresh_positions(n, self.ev);
        let mut covered = vec![n.rule.is_axiom() || n.rule == Rule::H; n.concl.len()];
        for &i in &fresh {
            covered[i] = true;
        }
        for (k, prem) in n.prems.iter().enumerate() {
            let m = &minors[k];
            let len = prem.concl.len();
            if n.rule.minor_count(k) != m.len() && !n.rule.is_structural() {
                errs.push(("minor", format!("internal: minor count mismatch in premise {k}")));
                continue;
            }
            if len < m.len() || prem.concl[len - m.len()..] != m[..] {
                let want: Vec<String> = m.iter().map(|f| f.to_string()).collect();
                errs.push(("minor", format!("premise {} must end with [{}]", prem.id, want.join(", "))));
                continue;
            }
            for (p, a) in premise_map(n, k).into_iter().enumerate() {
                match a {
                    Anc::Ctx(i) => {
                        // equal conclusion copies share the ancestor
                        for (j, c) in n.concl.iter().enumerate() {
                            if *c == n.concl[i] {
                                covered[j] = true;
                            }
                        }
                    }
                    Anc::Minor => {}
                    Anc::Lost => errs.push((
                        "context",
                        format!("premise {} formula {} has no counterpart below", prem.id, prem.concl[p]),
                    )),
                }
            }
        }
        for (i, c) in covered.iter().enumerate() {
            if !c {
                errs.push(("context", format!("conclusion formula {} has no ancestor", n.concl[i])));
            }
        }
        errs
    }
}

fn tag_static(r: Rule) -> &'static str {
    r.tag()
}
