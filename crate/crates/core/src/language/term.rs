//! Object terms. Closed sub-terms are folded into constants by the smart
//! constructors, so `Plus`, `Times`, `WExp` and `Mu` only ever wrap something
//! with a variable in it.

use crate::error::{Error, Result};
use crate::ordinals::{ord_add, ord_mul, OrdTerm};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObjTerm {
    Var(String),
    Const(OrdTerm),
    Plus(Box<ObjTerm>, Box<ObjTerm>),
    Times(Box<ObjTerm>, Box<ObjTerm>),
    WExp(Box<ObjTerm>),
    Mu(String, Vec<ObjTerm>),
}

impl ObjTerm {
    pub fn var(x: &str) -> Self {
        ObjTerm::Var(x.to_string())
    }

    pub fn nat(n: u64) -> Self {
        ObjTerm::Const(OrdTerm::nat(n))
    }

    pub fn konst(a: OrdTerm) -> Self {
        ObjTerm::Const(a)
    }

    pub fn omega1() -> Self {
        ObjTerm::Const(OrdTerm::Omega1)
    }

    pub fn as_const(&self) -> Option<&OrdTerm> {
        match self {
            ObjTerm::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Ordinary sum, folded when both sides are constants.
    pub fn plus(s: ObjTerm, t: ObjTerm) -> Self {
        if let (ObjTerm::Const(a), ObjTerm::Const(b)) = (&s, &t) {
            if let Ok(c) = ord_add(a, b) {
                return ObjTerm::Const(c);
            }
        }
        ObjTerm::Plus(Box::new(s), Box::new(t))
    }

    pub fn times(s: ObjTerm, t: ObjTerm) -> Self {
        if let (ObjTerm::Const(a), ObjTerm::Const(b)) = (&s, &t) {
            if let Ok(c) = ord_mul(a, b) {
                return ObjTerm::Const(c);
            }
        }
        ObjTerm::Times(Box::new(s), Box::new(t))
    }

    pub fn wexp(s: ObjTerm) -> Self {
        match s {
            ObjTerm::Const(a) => ObjTerm::Const(OrdTerm::wpow(a)),
            s => ObjTerm::WExp(Box::new(s)),
        }
    }

    pub fn mu(id: &str, args: Vec<ObjTerm>) -> Self {
        if args.iter().all(|a| a.as_const().is_some()) {
            let cs = args.into_iter().map(|a| a.as_const().cloned().unwrap()).collect();
            ObjTerm::Const(OrdTerm::Mu(id.to_string(), cs))
        } else {
            ObjTerm::Mu(id.to_string(), args)
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            ObjTerm::Var(_) => false,
            ObjTerm::Const(_) => true,
            ObjTerm::Plus(a, b) | ObjTerm::Times(a, b) => a.is_closed() && b.is_closed(),
            ObjTerm::WExp(a) => a.is_closed(),
            ObjTerm::Mu(_, args) => args.iter().all(ObjTerm::is_closed),
        }
    }

    pub fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            ObjTerm::Var(x) => {
                out.insert(x.clone());
            }
            ObjTerm::Const(_) => {}
            ObjTerm::Plus(a, b) | ObjTerm::Times(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            ObjTerm::WExp(a) => a.free_vars(out),
            ObjTerm::Mu(_, args) => args.iter().for_each(|a| a.free_vars(out)),
        }
    }

    /// Replaces `x` by `t` and refolds constants.
    pub fn subst(&self, x: &str, t: &ObjTerm) -> ObjTerm {
        match self {
            ObjTerm::Var(y) if y == x => t.clone(),
            ObjTerm::Var(_) | ObjTerm::Const(_) => self.clone(),
            ObjTerm::Plus(a, b) => ObjTerm::plus(a.subst(x, t), b.subst(x, t)),
            ObjTerm::Times(a, b) => ObjTerm::times(a.subst(x, t), b.subst(x, t)),
            ObjTerm::WExp(a) => ObjTerm::wexp(a.subst(x, t)),
            ObjTerm::Mu(id, args) => ObjTerm::mu(id, args.iter().map(|a| a.subst(x, t)).collect()),
        }
    }

    /// Constants occurring in the term, with all their ordinal subterms.
    pub fn closed_subterms(&self, out: &mut BTreeSet<OrdTerm>) {
        match self {
            ObjTerm::Var(_) => {}
            ObjTerm::Const(c) => c.subterms(out),
            ObjTerm::Plus(a, b) | ObjTerm::Times(a, b) => {
                a.closed_subterms(out);
                b.closed_subterms(out);
            }
            ObjTerm::WExp(a) => a.closed_subterms(out),
            ObjTerm::Mu(_, args) => args.iter().for_each(|a| a.closed_subterms(out)),
        }
    }

    /// Value of a closed term without mu resolution; object `+` and `*` are
    /// the ordinary operations.
    pub fn value(&self) -> Result<OrdTerm> {
        match self {
            ObjTerm::Var(x) => Err(Error::shape(format!("open term: variable {x}"))),
            ObjTerm::Const(c) => Ok(c.clone()),
            ObjTerm::Plus(a, b) => ord_add(&a.value()?, &b.value()?),
            ObjTerm::Times(a, b) => ord_mul(&a.value()?, &b.value()?),
            ObjTerm::WExp(a) => Ok(OrdTerm::wpow(a.value()?)),
            ObjTerm::Mu(id, args) => Ok(OrdTerm::Mu(
                id.clone(),
                args.iter().map(ObjTerm::value).collect::<Result<_>>()?,
            )),
        }
    }
}
