//! Text form: `0`, `w1`, `r0`, `(+ a b ...)`, `(w^ a)`, `(D0 a)`, `(D1 a)`,
//! `(F a)`, `(mu <id> a ...)`. Decimal numerals are accepted on input.

use super::{normalize, OrdTerm};
use crate::error::{Error, Result};
use crate::sexp::{self, Sexp};
use std::fmt;
use std::str::FromStr;

pub fn ord_to_sexp(t: &OrdTerm) -> Sexp {
    match t {
        OrdTerm::Zero => Sexp::atom("0"),
        OrdTerm::Omega1 => Sexp::atom("w1"),
        OrdTerm::Rho0 => Sexp::atom("r0"),
        OrdTerm::Sum(ps) => {
            let mut items = vec![Sexp::atom("+")];
            items.extend(ps.iter().map(ord_to_sexp));
            Sexp::List(items)
        }
        OrdTerm::WPow(e) => Sexp::list(vec![Sexp::atom("w^"), ord_to_sexp(e)]),
        OrdTerm::D(i, a) => Sexp::list(vec![Sexp::atom(format!("D{i}")), ord_to_sexp(a)]),
        OrdTerm::F(a) => Sexp::list(vec![Sexp::atom("F"), ord_to_sexp(a)]),
        OrdTerm::Mu(id, args) => {
            let mut items = vec![Sexp::atom("mu"), Sexp::atom(id.clone())];
            items.extend(args.iter().map(ord_to_sexp));
            Sexp::List(items)
        }
    }
}

/// Reads a term and normalizes it.
pub fn ord_from_sexp(s: &Sexp) -> Result<OrdTerm> {
    raw_from_sexp(s).map(normalize)
}

fn raw_from_sexp(s: &Sexp) -> Result<OrdTerm> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "w1" => Ok(OrdTerm::Omega1),
            "r0" => Ok(OrdTerm::Rho0),
            _ => a
                .parse::<u64>()
                .map(OrdTerm::nat)
                .map_err(|_| Error::parse(format!("unknown ordinal atom `{a}`"))),
        },
        Sexp::List(items) => {
            let head = s.head().ok_or_else(|| Error::parse(format!("bad ordinal term {s}")))?;
            let args = &items[1..];
            let one = || -> Result<Box<OrdTerm>> {
                match args {
                    [x] => Ok(Box::new(raw_from_sexp(x)?)),
                    _ => Err(Error::parse(format!("`{head}` takes one argument in {s}"))),
                }
            };
            match head {
                "+" => Ok(OrdTerm::Sum(args.iter().map(raw_from_sexp).collect::<Result<_>>()?)),
                "w^" => Ok(OrdTerm::WPow(one()?)),
                "D0" => Ok(OrdTerm::D(0, one()?)),
                "D1" => Ok(OrdTerm::D(1, one()?)),
                "F" => Ok(OrdTerm::F(one()?)),
                "mu" => {
                    let id = args
                        .first()
                        .and_then(Sexp::as_atom)
                        .ok_or_else(|| Error::parse(format!("mu needs an id in {s}")))?;
                    let rest = args[1..].iter().map(raw_from_sexp).collect::<Result<_>>()?;
                    Ok(OrdTerm::Mu(id.to_string(), rest))
                }
                _ => Err(Error::parse(format!("unknown ordinal constructor `{head}`"))),
            }
        }
    }
}

pub fn parse_ord(src: &str) -> Result<OrdTerm> {
    ord_from_sexp(&sexp::parse_one(src)?)
}

impl fmt::Display for OrdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ord_to_sexp(self))
    }
}

impl FromStr for OrdTerm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ord(s)
    }
}
