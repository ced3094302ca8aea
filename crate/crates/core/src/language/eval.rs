//! Sound, partial truth evaluation of closed literals and bounded sentences.

use super::formula::{Atom, Formula};
use super::syntax::formula_from_sexp;
use super::term::ObjTerm;
use crate::error::{Error, Result};
use crate::ordinals::{compare, normalize, ord_add, region, OrdTerm, Region};
use crate::sexp::Sexp;
use serde::{Deserialize, Serialize};
use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// `R(a, b) <-> body`, where occurrences of `R` inside `body` are read with
/// first argument restricted below `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RDef {
    pub id: String,
    pub a: String,
    pub b: String,
    pub body: Formula,
}

/// `mu var. body(var, params)`: the least numeral satisfying `body`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuDef {
    pub id: String,
    pub var: String,
    pub params: Vec<String>,
    pub body: Formula,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defs {
    pub rdefs: BTreeMap<String, RDef>,
    pub mudefs: BTreeMap<String, MuDef>,
}

impl Defs {
    /// Reads `(rdef id a b A)` or `(mudef id y (p ...) A)`; returns `false`
    /// for any other form.
    pub fn absorb(&mut self, s: &Sexp) -> Result<bool> {
        let items = match s.as_list() {
            Some(l) => l,
            None => return Ok(false),
        };
        let atom = |i: usize| -> Result<String> {
            items.get(i).and_then(Sexp::as_atom).map(str::to_string).ok_or_else(|| Error::parse(format!("bad definition {s}")))
        };
        match s.head() {
            Some("rdef") if items.len() == 5 => {
                let d = RDef { id: atom(1)?, a: atom(2)?, b: atom(3)?, body: formula_from_sexp(&items[4])? };
                self.rdefs.insert(d.id.clone(), d);
                Ok(true)
            }
            Some("mudef") if items.len() == 5 => {
                let params = items[3]
                    .as_list()
                    .ok_or_else(|| Error::parse(format!("mudef parameters must be a list in {s}")))?
                    .iter()
                    .map(|p| p.as_atom().map(str::to_string).ok_or_else(|| Error::parse(format!("bad parameter in {s}"))))
                    .collect::<Result<Vec<_>>>()?;
                let d = MuDef { id: atom(1)?, var: atom(2)?, params, body: formula_from_sexp(&items[4])? };
                self.mudefs.insert(d.id.clone(), d);
                Ok(true)
            }
            Some("rdef") | Some("mudef") => Err(Error::parse(format!("bad definition {s}"))),
            _ => Ok(false),
        }
    }

    pub fn to_sexps(&self) -> Vec<Sexp> {
        let mut out = Vec::new();
        for d in self.rdefs.values() {
            out.push(Sexp::list(vec![
                Sexp::atom("rdef"),
                Sexp::atom(d.id.clone()),
                Sexp::atom(d.a.clone()),
                Sexp::atom(d.b.clone()),
                super::syntax::formula_to_sexp(&d.body),
            ]));
        }
        for d in self.mudefs.values() {
            out.push(Sexp::list(vec![
                Sexp::atom("mudef"),
                Sexp::atom(d.id.clone()),
                Sexp::atom(d.var.clone()),
                Sexp::list(d.params.iter().map(|p| Sexp::atom(p.clone())).collect()),
                super::syntax::formula_to_sexp(&d.body),
            ]));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Quantifier instances and mu candidates examined per top-level call.
    pub fuel: u64,
    /// Candidate witnesses for transfinite bounds.
    pub pool: Vec<OrdTerm>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { fuel: 10_000, pool: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Truth {
    True,
    False,
    Undecided,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn not(self) -> Self {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Undecided => Truth::Undecided,
        }
    }

    fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Undecided,
        }
    }
}

pub struct Evaluator<'d> {
    defs: &'d Defs,
    budget: SearchBudget,
    fuel: Cell<u64>,
    stages: RefCell<Vec<(String, OrdTerm)>>,
    r_memo: RefCell<HashMap<(String, OrdTerm, OrdTerm), bool>>,
    mu_memo: RefCell<HashMap<OrdTerm, OrdTerm>>,
}

impl<'d> Evaluator<'d> {
    pub fn new(defs: &'d Defs, budget: SearchBudget) -> Self {
        let fuel = Cell::new(budget.fuel);
        Evaluator {
            defs,
            budget,
            fuel,
            stages: RefCell::new(Vec::new()),
            r_memo: RefCell::new(HashMap::new()),
            mu_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    pub fn defs(&self) -> &Defs {
        self.defs
    }

    pub fn extend_pool(&mut self, terms: impl IntoIterator<Item = OrdTerm>) {
        let mut set: BTreeSet<OrdTerm> = self.budget.pool.drain(..).collect();
        set.extend(terms);
        self.budget.pool = set.into_iter().collect();
    }

    fn burn(&self) -> bool {
        let f = self.fuel.get();
        if f == 0 {
            return false;
        }
        self.fuel.set(f - 1);
        true
    }

    /// Value of a closed term, with mu terms resolved.
    pub fn eval_term(&self, t: &ObjTerm) -> Result<OrdTerm> {
        self.resolve(&t.value()?)
    }

    pub fn resolve(&self, a: &OrdTerm) -> Result<OrdTerm> {
        if !a.contains_mu() {
            return Ok(a.clone());
        }
        Ok(normalize(match a {
            OrdTerm::Mu(id, args) => {
                let args = args.iter().map(|x| self.resolve(x)).collect::<Result<Vec<_>>>()?;
                let key = OrdTerm::Mu(id.clone(), args.clone());
                if let Some(v) = self.mu_memo.borrow().get(&key) {
                    return Ok(v.clone());
                }
                let v = self.least_witness(id, &args)?;
                self.mu_memo.borrow_mut().insert(key, v.clone());
                v
            }
            OrdTerm::Sum(ps) => OrdTerm::Sum(ps.iter().map(|p| self.resolve(p)).collect::<Result<_>>()?),
            OrdTerm::WPow(e) => OrdTerm::WPow(Box::new(self.resolve(e)?)),
            OrdTerm::D(i, e) => OrdTerm::D(*i, Box::new(self.resolve(e)?)),
            OrdTerm::F(e) => OrdTerm::F(Box::new(self.resolve(e)?)),
            OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => a.clone(),
        }))
    }

    fn least_witness(&self, id: &str, args: &[OrdTerm]) -> Result<OrdTerm> {
        let def = self.defs.mudefs.get(id).ok_or_else(|| Error::Undecidable(format!("no definition for mu term `{id}`")))?;
        if def.params.len() != args.len() {
            return Err(Error::shape(format!("mu term `{id}` expects {} arguments", def.params.len())));
        }
        let mut body = def.body.clone();
        for (p, a) in def.params.iter().zip(args) {
            body = body.subst(p, &ObjTerm::Const(a.clone()));
        }
        let saved = self.fuel.replace(self.budget.fuel);
        let mut n = 0u64;
        let out = loop {
            if !self.burn() {
                break Err(Error::Undecidable(format!("fuel exhausted searching mu term `{id}`")));
            }
            match self.eval_inner(&body.subst(&def.var, &ObjTerm::nat(n))) {
                Truth::True => break Ok(OrdTerm::nat(n)),
                Truth::False => n += 1,
                Truth::Undecided => break Err(Error::Undecidable(format!("mu term `{id}` at {n}"))),
            }
        };
        self.fuel.set(saved);
        out
    }

    pub fn compare(&self, a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
        compare(&self.resolve(a)?, &self.resolve(b)?)
    }

    /// `rho0` for open terms, the value otherwise.
    pub fn mj(&self, t: &ObjTerm) -> Result<OrdTerm> {
        if t.is_closed() {
            self.eval_term(t)
        } else {
            Ok(OrdTerm::Rho0)
        }
    }

    pub fn eval_literal(&self, f: &Formula) -> Truth {
        match f {
            Formula::Lit(pos, a) => {
                let t = self.eval_atom(a);
                if *pos {
                    t
                } else {
                    t.not()
                }
            }
            _ => Truth::Undecided,
        }
    }

    fn eval_atom(&self, a: &Atom) -> Truth {
        let v = |t: &ObjTerm| self.eval_term(t).ok();
        match a {
            Atom::Less(s, t) => match (v(s), v(t)) {
                (Some(x), Some(y)) => match compare(&x, &y) {
                    Ok(o) => Truth::from_bool(o == Ordering::Less),
                    Err(_) => Truth::Undecided,
                },
                _ => Truth::Undecided,
            },
            Atom::P(s, t) => match (v(s), v(t)) {
                (Some(OrdTerm::D(0, a)), Some(OrdTerm::F(b))) => Truth::from_bool(a == b),
                (Some(_), Some(_)) => Truth::False,
                _ => Truth::Undecided,
            },
            Atom::PRho(t) => match v(t) {
                Some(x) => Truth::from_bool(matches!(x, OrdTerm::D(1, _))),
                None => Truth::Undecided,
            },
            Atom::R(id, s, t) => match (v(s), v(t)) {
                (Some(x), Some(y)) => self.eval_r(id, x, y),
                _ => Truth::Undecided,
            },
        }
    }

    fn eval_r(&self, id: &str, a: OrdTerm, b: OrdTerm) -> Truth {
        let Some(def) = self.defs.rdefs.get(id) else {
            return Truth::Undecided;
        };
        if !matches!(region(&a), Ok(Region::Finite(_))) {
            return Truth::Undecided;
        }
        // inside the body of R at stage s, R is only visible below s
        let outer = self.stages.borrow().iter().rev().find(|(i, _)| i == id).map(|(_, s)| s.clone());
        if let Some(stage) = outer {
            match compare(&a, &stage) {
                Ok(Ordering::Less) => {}
                Ok(_) => return Truth::False,
                Err(_) => return Truth::Undecided,
            }
        }
        let key = (id.to_string(), a.clone(), b.clone());
        if let Some(&r) = self.r_memo.borrow().get(&key) {
            return Truth::from_bool(r);
        }
        let body = def.body.subst(&def.a, &ObjTerm::Const(a.clone())).subst(&def.b, &ObjTerm::Const(b));
        self.stages.borrow_mut().push((id.to_string(), a));
        let t = self.eval_inner(&body);
        self.stages.borrow_mut().pop();
        if t != Truth::Undecided {
            self.r_memo.borrow_mut().insert(key, t == Truth::True);
        }
        t
    }

    /// Three-valued truth of a closed sentence under the budget. Definite
    /// answers are always correct.
    pub fn eval(&self, f: &Formula) -> Truth {
        self.fuel.set(self.budget.fuel);
        self.eval_inner(f)
    }

    pub fn eval_delta0(&self, f: &Formula) -> Truth {
        self.eval(f)
    }

    /// Candidate witnesses for transfinite searches.
    pub fn candidates(&self) -> Vec<OrdTerm> {
        let mut set = BTreeSet::from([OrdTerm::Zero]);
        for p in &self.budget.pool {
            if let Ok(p) = self.resolve(p) {
                if let Ok(s) = ord_add(&p, &OrdTerm::one()) {
                    set.insert(s);
                }
                set.insert(p);
            }
        }
        set.into_iter().collect()
    }

    fn eval_inner(&self, f: &Formula) -> Truth {
        match f {
            Formula::Lit(..) => self.eval_literal(f),
            Formula::Or(a, b) => {
                let l = self.eval_inner(a);
                if l == Truth::True {
                    return l;
                }
                l.or(self.eval_inner(b))
            }
            Formula::And(a, b) => {
                let l = self.eval_inner(a).not();
                if l == Truth::True {
                    return Truth::False;
                }
                l.or(self.eval_inner(b).not()).not()
            }
            Formula::ExB(x, t, body) => self.quantify(x, Some(t), body, true),
            Formula::AllB(x, t, body) => self.quantify(x, Some(t), body, false),
            Formula::Ex(x, body) => self.quantify(x, None, body, true),
            Formula::All(x, body) => self.quantify(x, None, body, false),
        }
    }

    /// Existential search (`ex = true`) or its dual. A definite verdict needs
    /// either a deciding instance or exhaustion of a finite bound.
    fn quantify(&self, x: &str, bound: Option<&ObjTerm>, body: &Formula, ex: bool) -> Truth {
        let decisive = if ex { Truth::True } else { Truth::False };
        let bound_val = match bound.map(|t| self.eval_term(t)) {
            Some(Ok(v)) => Some(v),
            Some(Err(_)) => return Truth::Undecided,
            None => None,
        };
        if let Some(n) = bound_val.as_ref().and_then(OrdTerm::as_nat) {
            let mut all_other = true;
            for i in 0..n {
                if !self.burn() {
                    return Truth::Undecided;
                }
                match self.eval_inner(&body.subst(x, &ObjTerm::nat(i))) {
                    t if t == decisive => return decisive,
                    Truth::Undecided => all_other = false,
                    _ => {}
                }
            }
            return if all_other { decisive.not() } else { Truth::Undecided };
        }
        let mut cands: Vec<OrdTerm> = self.candidates();
        if bound_val.is_none() {
            // unbounded: numerals first, then the pool
            let extra = (0..self.budget.fuel.min(64)).map(OrdTerm::nat);
            let mut set: BTreeSet<OrdTerm> = cands.into_iter().collect();
            set.extend(extra);
            cands = set.into_iter().collect();
        }
        for c in cands {
            if let Some(v) = &bound_val {
                if compare(&c, v) != Ok(Ordering::Less) {
                    continue;
                }
            }
            if !self.burn() {
                return Truth::Undecided;
            }
            if self.eval_inner(&body.subst(x, &ObjTerm::Const(c))) == decisive {
                return decisive;
            }
        }
        Truth::Undecided
    }
}
