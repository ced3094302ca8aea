//! Text form of object terms and formulas.

use super::formula::{Atom, Formula};
use super::term::ObjTerm;
use crate::error::{Error, Result};
use crate::ordinals::{normalize, ord_to_sexp, OrdTerm};
use crate::sexp::{self, Sexp};
use std::fmt;

const RESERVED: &[&str] = &["+", "*", "w^", "D0", "D1", "F", "mu", "w1", "r0", "<", "R", "P", "Pr0", "not", "or", "and", "ex", "all", "exb", "allb"];

pub fn term_to_sexp(t: &ObjTerm) -> Sexp {
    match t {
        ObjTerm::Var(x) => Sexp::atom(x.clone()),
        ObjTerm::Const(c) => ord_to_sexp(c),
        ObjTerm::Plus(a, b) => Sexp::list(vec![Sexp::atom("+"), term_to_sexp(a), term_to_sexp(b)]),
        ObjTerm::Times(a, b) => Sexp::list(vec![Sexp::atom("*"), term_to_sexp(a), term_to_sexp(b)]),
        ObjTerm::WExp(a) => Sexp::list(vec![Sexp::atom("w^"), term_to_sexp(a)]),
        ObjTerm::Mu(id, args) => {
            let mut v = vec![Sexp::atom("mu"), Sexp::atom(id.clone())];
            v.extend(args.iter().map(term_to_sexp));
            Sexp::List(v)
        }
    }
}

pub fn term_from_sexp(s: &Sexp) -> Result<ObjTerm> {
    match s {
        Sexp::Atom(a) => {
            if a == "w1" || a == "r0" || a.chars().all(|c| c.is_ascii_digit()) {
                return crate::ordinals::ord_from_sexp(s).map(ObjTerm::Const);
            }
            if RESERVED.contains(&a.as_str()) || a.starts_with(':') {
                return Err(Error::parse(format!("`{a}` is not a variable")));
            }
            Ok(ObjTerm::Var(a.clone()))
        }
        Sexp::List(items) => {
            let head = s.head().ok_or_else(|| Error::parse(format!("bad term {s}")))?;
            let args = items[1..].iter().map(term_from_sexp);
            match head {
                "+" | "*" => {
                    let args = args.collect::<Result<Vec<_>>>()?;
                    let mut it = args.into_iter();
                    let first = it.next().ok_or_else(|| Error::parse(format!("empty `{head}`")))?;
                    Ok(it.fold(first, |acc, t| if head == "+" { ObjTerm::plus(acc, t) } else { ObjTerm::times(acc, t) }))
                }
                "w^" => Ok(ObjTerm::wexp(single(s, args)?)),
                "D0" | "D1" | "F" => {
                    let arg = single(s, args)?;
                    let v = arg
                        .as_const()
                        .cloned()
                        .ok_or_else(|| Error::parse(format!("collapse argument must be closed in {s}")))?;
                    Ok(ObjTerm::Const(normalize(match head {
                        "D0" => OrdTerm::d(0, v),
                        "D1" => OrdTerm::d(1, v),
                        _ => OrdTerm::f(v),
                    })))
                }
                "mu" => {
                    let id = items.get(1).and_then(Sexp::as_atom).ok_or_else(|| Error::parse(format!("mu needs an id in {s}")))?;
                    let rest = items[2..].iter().map(term_from_sexp).collect::<Result<Vec<_>>>()?;
                    Ok(ObjTerm::mu(id, rest))
                }
                _ => Err(Error::parse(format!("unknown term constructor `{head}`"))),
            }
        }
    }
}

fn single(s: &Sexp, mut args: impl Iterator<Item = Result<ObjTerm>>) -> Result<ObjTerm> {
    match (args.next(), args.next()) {
        (Some(a), None) => a,
        _ => Err(Error::parse(format!("expected one argument in {s}"))),
    }
}

fn atom_to_sexp(a: &Atom) -> Sexp {
    let t = term_to_sexp;
    match a {
        Atom::Less(x, y) => Sexp::list(vec![Sexp::atom("<"), t(x), t(y)]),
        Atom::R(id, x, y) => Sexp::list(vec![Sexp::atom("R"), Sexp::atom(id.clone()), t(x), t(y)]),
        Atom::P(x, y) => Sexp::list(vec![Sexp::atom("P"), t(x), t(y)]),
        Atom::PRho(x) => Sexp::list(vec![Sexp::atom("Pr0"), t(x)]),
    }
}

pub fn formula_to_sexp(f: &Formula) -> Sexp {
    let q = |h: &str, x: &str, b: Option<&ObjTerm>, a: &Formula| {
        let mut v = vec![Sexp::atom(h), Sexp::atom(x)];
        if let Some(b) = b {
            v.push(term_to_sexp(b));
        }
        v.push(formula_to_sexp(a));
        Sexp::List(v)
    };
    match f {
        Formula::Lit(true, a) => atom_to_sexp(a),
        Formula::Lit(false, a) => Sexp::list(vec![Sexp::atom("not"), atom_to_sexp(a)]),
        Formula::Or(a, b) => Sexp::list(vec![Sexp::atom("or"), formula_to_sexp(a), formula_to_sexp(b)]),
        Formula::And(a, b) => Sexp::list(vec![Sexp::atom("and"), formula_to_sexp(a), formula_to_sexp(b)]),
        Formula::Ex(x, a) => q("ex", x, None, a),
        Formula::All(x, a) => q("all", x, None, a),
        Formula::ExB(x, t, a) => q("exb", x, Some(t), a),
        Formula::AllB(x, t, a) => q("allb", x, Some(t), a),
    }
}

fn atom_from_sexp(s: &Sexp) -> Result<Atom> {
    let items = s.as_list().ok_or_else(|| Error::parse(format!("expected atom, got {s}")))?;
    let t = |i: usize| -> Result<ObjTerm> {
        items.get(i).ok_or_else(|| Error::parse(format!("missing argument in {s}"))).and_then(term_from_sexp)
    };
    let arity = |n: usize| -> Result<()> {
        if items.len() == n {
            Ok(())
        } else {
            Err(Error::parse(format!("wrong arity in {s}")))
        }
    };
    match s.head() {
        Some("<") => arity(3).and_then(|_| Ok(Atom::Less(t(1)?, t(2)?))),
        Some("P") => arity(3).and_then(|_| Ok(Atom::P(t(1)?, t(2)?))),
        Some("Pr0") => arity(2).and_then(|_| Ok(Atom::PRho(t(1)?))),
        Some("R") => {
            arity(4)?;
            let id = items[1].as_atom().ok_or_else(|| Error::parse(format!("R needs an id in {s}")))?;
            Ok(Atom::R(id.to_string(), t(2)?, t(3)?))
        }
        _ => Err(Error::parse(format!("unknown atom {s}"))),
    }
}

pub fn formula_from_sexp(s: &Sexp) -> Result<Formula> {
    let items = s.as_list().ok_or_else(|| Error::parse(format!("expected formula, got {s}")))?;
    let head = s.head().ok_or_else(|| Error::parse(format!("bad formula {s}")))?;
    let var = |i: usize| -> Result<String> {
        let v = items.get(i).and_then(Sexp::as_atom).ok_or_else(|| Error::parse(format!("expected variable in {s}")))?;
        match term_from_sexp(&Sexp::atom(v))? {
            ObjTerm::Var(x) => Ok(x),
            _ => Err(Error::parse(format!("`{v}` cannot be bound in {s}"))),
        }
    };
    let sub = |i: usize| -> Result<Formula> {
        items.get(i).ok_or_else(|| Error::parse(format!("missing subformula in {s}"))).and_then(formula_from_sexp)
    };
    let arity = |n: usize| -> Result<()> {
        if items.len() == n {
            Ok(())
        } else {
            Err(Error::parse(format!("wrong arity in {s}")))
        }
    };
    match head {
        "not" => {
            arity(2)?;
            Ok(Formula::Lit(false, atom_from_sexp(&items[1])?))
        }
        "or" | "and" => {
            if items.len() < 3 {
                return Err(Error::parse(format!("`{head}` needs two operands in {s}")));
            }
            let fs = items[1..].iter().map(formula_from_sexp).collect::<Result<Vec<_>>>()?;
            let mut it = fs.into_iter().rev();
            let last = it.next().unwrap();
            Ok(it.fold(last, |acc, f| if head == "or" { Formula::or(f, acc) } else { Formula::and(f, acc) }))
        }
        "ex" | "all" => {
            arity(3)?;
            let (x, a) = (var(1)?, Box::new(sub(2)?));
            Ok(if head == "ex" { Formula::Ex(x, a) } else { Formula::All(x, a) })
        }
        "exb" | "allb" => {
            arity(4)?;
            let (x, t, a) = (var(1)?, term_from_sexp(&items[2])?, Box::new(sub(3)?));
            Ok(if head == "exb" { Formula::ExB(x, t, a) } else { Formula::AllB(x, t, a) })
        }
        _ => Ok(Formula::Lit(true, atom_from_sexp(s)?)),
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    formula_from_sexp(&sexp::parse_one(src)?)
}

pub fn parse_term(src: &str) -> Result<ObjTerm> {
    term_from_sexp(&sexp::parse_one(src)?)
}

impl fmt::Display for ObjTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_to_sexp(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", formula_to_sexp(self))
    }
}
