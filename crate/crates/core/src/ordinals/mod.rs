//! Ordinal notation over `0`, `w1`, `r0` with natural sums, `w^`, the
//! collapsing constructors `D0`, `D1`, `F` and opaque `mu` terms.
//!
//! Every public operation expects and returns terms in normal form (see
//! [`normalize`]). The derived `Ord` on [`OrdTerm`] is a structural order used
//! only for deterministic containers; the ordinal order is [`compare`].

mod arith;
pub mod enumerate;
pub mod cnf;
mod syntax;

pub use arith::{ord_add, ord_mul, nprod, nsum, nsum_all};
pub use cnf::{to_cnf_small, Cnf};
pub use syntax::{parse_ord, ord_from_sexp, ord_to_sexp};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrdTerm {
    Zero,
    Omega1,
    Rho0,
    /// At least two principal parts, non-increasing.
    Sum(Vec<OrdTerm>),
    WPow(Box<OrdTerm>),
    /// `D(0, a)` is below `w1`, `D(1, a)` lies strictly between `w1` and `r0`.
    D(u8, Box<OrdTerm>),
    F(Box<OrdTerm>),
    Mu(String, Vec<OrdTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    Finite(u64),
    Countable,
    EqOmega1,
    Middle,
    EqRho0,
    Above,
}

impl OrdTerm {
    pub fn one() -> Self {
        OrdTerm::WPow(Box::new(OrdTerm::Zero))
    }

    pub fn nat(n: u64) -> Self {
        match n {
            0 => OrdTerm::Zero,
            1 => OrdTerm::one(),
            _ => OrdTerm::Sum(vec![OrdTerm::one(); n as usize]),
        }
    }

    /// `w^e`, normalized.
    pub fn wpow(e: OrdTerm) -> Self {
        if e.is_epsilon() {
            e
        } else {
            OrdTerm::WPow(Box::new(e))
        }
    }

    pub fn d(level: u8, a: OrdTerm) -> Self {
        OrdTerm::D(level, Box::new(a))
    }

    pub fn f(a: OrdTerm) -> Self {
        OrdTerm::F(Box::new(a))
    }

    /// Builds a normal natural sum out of arbitrary normal summands.
    pub fn sum(parts: Vec<OrdTerm>) -> Self {
        normalize(OrdTerm::Sum(parts))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, OrdTerm::Zero)
    }

    /// Fixed points of `x -> w^x`: the atoms and collapse terms.
    pub fn is_epsilon(&self) -> bool {
        matches!(self, OrdTerm::Omega1 | OrdTerm::Rho0 | OrdTerm::D(..) | OrdTerm::F(_))
    }

    pub fn is_principal(&self) -> bool {
        !matches!(self, OrdTerm::Zero | OrdTerm::Sum(_))
    }

    /// Principal summands in order; empty for zero.
    pub fn parts(&self) -> &[OrdTerm] {
        match self {
            OrdTerm::Zero => &[],
            OrdTerm::Sum(ps) => ps,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        let mut n = 0;
        for p in self.parts() {
            match p {
                OrdTerm::WPow(e) if e.is_zero() => n += 1,
                _ => return None,
            }
        }
        Some(n)
    }

    pub fn contains_mu(&self) -> bool {
        match self {
            OrdTerm::Mu(..) => true,
            OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => false,
            OrdTerm::Sum(ps) => ps.iter().any(OrdTerm::contains_mu),
            OrdTerm::WPow(a) | OrdTerm::D(_, a) | OrdTerm::F(a) => a.contains_mu(),
        }
    }

    /// Number of constructor nodes, not counting the `Sum` node itself.
    pub fn size(&self) -> usize {
        match self {
            OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => 1,
            OrdTerm::Sum(ps) => ps.iter().map(OrdTerm::size).sum(),
            OrdTerm::WPow(a) | OrdTerm::D(_, a) | OrdTerm::F(a) => 1 + a.size(),
            OrdTerm::Mu(_, args) => 1 + args.iter().map(OrdTerm::size).sum::<usize>(),
        }
    }

    /// All subterms including `self`.
    pub fn subterms(&self, out: &mut BTreeSet<OrdTerm>) {
        out.insert(self.clone());
        match self {
            OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => {}
            OrdTerm::Sum(ps) | OrdTerm::Mu(_, ps) => ps.iter().for_each(|p| p.subterms(out)),
            OrdTerm::WPow(a) | OrdTerm::D(_, a) | OrdTerm::F(a) => a.subterms(out),
        }
    }

    /// Exponent of a principal term: `e` for `w^e`, the term itself for an
    /// epsilon atom.
    fn exponent(&self) -> Result<OrdTerm> {
        match self {
            OrdTerm::WPow(e) => Ok((**e).clone()),
            t if t.is_epsilon() => Ok(t.clone()),
            OrdTerm::Mu(..) => Err(undecidable_mu(self)),
            _ => Err(Error::shape(format!("exponent of non-principal term {self}"))),
        }
    }
}

fn undecidable_mu(t: &OrdTerm) -> Error {
    Error::Undecidable(format!("mu term {t} is order-opaque"))
}

/// Ordering used only to keep sums deterministic when `compare` cannot
/// decide (mu terms).
fn sort_key_cmp(a: &OrdTerm, b: &OrdTerm) -> Ordering {
    compare(a, b).unwrap_or_else(|_| a.cmp(b))
}

pub fn normalize(raw: OrdTerm) -> OrdTerm {
    match raw {
        OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => raw,
        OrdTerm::WPow(e) => OrdTerm::wpow(normalize(*e)),
        OrdTerm::D(i, a) => OrdTerm::D(i, Box::new(normalize(*a))),
        OrdTerm::F(a) => OrdTerm::F(Box::new(normalize(*a))),
        OrdTerm::Mu(id, args) => OrdTerm::Mu(id, args.into_iter().map(normalize).collect()),
        OrdTerm::Sum(ps) => {
            let mut flat = Vec::new();
            for p in ps {
                match normalize(p) {
                    OrdTerm::Zero => {}
                    OrdTerm::Sum(inner) => flat.extend(inner),
                    q => flat.push(q),
                }
            }
            flat.sort_by(|x, y| sort_key_cmp(y, x));
            match flat.len() {
                0 => OrdTerm::Zero,
                1 => flat.pop().unwrap(),
                _ => OrdTerm::Sum(flat),
            }
        }
    }
}

pub fn region(a: &OrdTerm) -> Result<Region> {
    Ok(match a {
        OrdTerm::Zero => Region::Finite(0),
        OrdTerm::Omega1 => Region::EqOmega1,
        OrdTerm::Rho0 => Region::EqRho0,
        OrdTerm::D(0, _) | OrdTerm::F(_) => Region::Countable,
        OrdTerm::D(_, _) => Region::Middle,
        OrdTerm::Mu(..) => return Err(undecidable_mu(a)),
        OrdTerm::WPow(e) => match region(e)? {
            Region::Finite(0) => Region::Finite(1),
            Region::Finite(_) | Region::Countable => Region::Countable,
            Region::EqOmega1 | Region::Middle => Region::Middle,
            Region::EqRho0 | Region::Above => Region::Above,
        },
        OrdTerm::Sum(ps) => {
            let regions = ps.iter().map(region).collect::<Result<Vec<_>>>()?;
            match regions.iter().max().copied().unwrap_or(Region::Finite(0)) {
                Region::Finite(_) => Region::Finite(regions.iter().map(|r| match r {
                    Region::Finite(n) => *n,
                    _ => 0,
                }).sum()),
                Region::Countable => Region::Countable,
                Region::EqOmega1 | Region::Middle => Region::Middle,
                Region::EqRho0 | Region::Above => Region::Above,
            }
        }
    })
}

/// Total syntactic order on normal terms. Fails only on mu terms that have
/// to be compared against something structurally different.
pub fn compare(a: &OrdTerm, b: &OrdTerm) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    let (ra, rb) = (region(a)?, region(b)?);
    if ra != rb {
        return Ok(ra.cmp(&rb));
    }
    let (pa, pb) = (a.parts(), b.parts());
    for (x, y) in pa.iter().zip(pb) {
        match cmp_principal(x, y)? {
            Ordering::Equal => {}
            o => return Ok(o),
        }
    }
    Ok(pa.len().cmp(&pb.len()))
}

pub fn lt(a: &OrdTerm, b: &OrdTerm) -> Result<bool> {
    Ok(compare(a, b)? == Ordering::Less)
}

fn cmp_principal(x: &OrdTerm, y: &OrdTerm) -> Result<Ordering> {
    if x == y {
        return Ok(Ordering::Equal);
    }
    match (x, y) {
        (OrdTerm::Mu(..), _) => Err(undecidable_mu(x)),
        (_, OrdTerm::Mu(..)) => Err(undecidable_mu(y)),
        (OrdTerm::WPow(e), OrdTerm::WPow(f)) => compare(e, f),
        (OrdTerm::WPow(e), _) => compare(e, y),
        (_, OrdTerm::WPow(f)) => compare(x, f),
        _ => cmp_epsilon(x, y),
    }
}

fn cmp_epsilon(x: &OrdTerm, y: &OrdTerm) -> Result<Ordering> {
    let (rx, ry) = (region(x)?, region(y)?);
    if rx != ry {
        return Ok(rx.cmp(&ry));
    }
    let (a, ta) = collapse_key(x)?;
    let (b, tb) = collapse_key(y)?;
    Ok(compare(a, b)?.then(ta.cmp(&tb)))
}

/// Argument and tie-break tag of a collapse term. Collapses of one region are
/// ordered by argument, with `D0(a) < F(a)`.
fn collapse_key(x: &OrdTerm) -> Result<(&OrdTerm, u8)> {
    match x {
        OrdTerm::D(_, a) => Ok((a, 0)),
        OrdTerm::F(a) => Ok((a, 1)),
        _ => Err(Error::shape(format!("not a collapse term: {x}"))),
    }
}

/// The hull-style justification for `lo < hi` between two collapse terms of
/// the same kind: the argument decreases and `G_hi(arg lo) < arg hi`.
/// Stronger than `compare`; used to certify descent steps.
pub fn collapse_certified(lo: &OrdTerm, hi: &OrdTerm) -> Result<bool> {
    let (a, _) = collapse_key(lo)?;
    let (b, _) = collapse_key(hi)?;
    Ok(lt(a, b)? && gset_below(hi, a, b)?)
}

/// The finite set `G_a(b)`.
pub fn gset(a: &OrdTerm, b: &OrdTerm) -> Result<BTreeSet<OrdTerm>> {
    let mut out = BTreeSet::new();
    gset_into(a, b, &mut out)?;
    Ok(out)
}

fn gset_into(a: &OrdTerm, b: &OrdTerm, out: &mut BTreeSet<OrdTerm>) -> Result<()> {
    match b {
        OrdTerm::Zero | OrdTerm::Omega1 | OrdTerm::Rho0 => Ok(()),
        OrdTerm::Sum(ps) | OrdTerm::Mu(_, ps) => ps.iter().try_for_each(|p| gset_into(a, p, out)),
        _ if lt(b, a)? => Ok(()),
        OrdTerm::WPow(e) => gset_into(a, e, out),
        OrdTerm::D(_, c) | OrdTerm::F(c) => {
            out.insert((**c).clone());
            gset_into(a, c, out)
        }
    }
}

/// Every element of `G_a(b)` is below `c`.
pub fn gset_below(a: &OrdTerm, b: &OrdTerm, c: &OrdTerm) -> Result<bool> {
    for x in gset(a, b)? {
        if !lt(&x, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
