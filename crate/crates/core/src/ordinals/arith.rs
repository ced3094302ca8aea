//! Natural (Hessenberg) and ordinary arithmetic on normal terms.

use super::{compare, OrdTerm};
use crate::error::Result;
use std::cmp::Ordering;

pub fn nsum(a: &OrdTerm, b: &OrdTerm) -> OrdTerm {
    let mut parts = a.parts().to_vec();
    parts.extend_from_slice(b.parts());
    OrdTerm::sum(parts)
}

pub fn nsum_all<'a>(terms: impl IntoIterator<Item = &'a OrdTerm>) -> OrdTerm {
    OrdTerm::sum(terms.into_iter().flat_map(|t| t.parts().to_vec()).collect())
}

/// Natural product: distribute over the parts, adding exponents naturally.
pub fn nprod(a: &OrdTerm, b: &OrdTerm) -> Result<OrdTerm> {
    let mut out = Vec::new();
    for p in a.parts() {
        let ep = p.exponent()?;
        for q in b.parts() {
            out.push(OrdTerm::wpow(nsum(&ep, &q.exponent()?)));
        }
    }
    Ok(OrdTerm::sum(out))
}

/// Ordinary ordinal sum: parts of `a` below the leading part of `b` are
/// absorbed.
pub fn ord_add(a: &OrdTerm, b: &OrdTerm) -> Result<OrdTerm> {
    let Some(lead) = b.parts().first() else {
        return Ok(a.clone());
    };
    let mut parts = Vec::new();
    for p in a.parts() {
        if compare(p, lead)? == Ordering::Less {
            break;
        }
        parts.push(p.clone());
    }
    parts.extend_from_slice(b.parts());
    Ok(OrdTerm::sum(parts))
}

/// Ordinary ordinal product.
pub fn ord_mul(a: &OrdTerm, b: &OrdTerm) -> Result<OrdTerm> {
    let Some(lead) = a.parts().first() else {
        return Ok(OrdTerm::Zero);
    };
    let lead_exp = lead.exponent()?;
    let mut acc = OrdTerm::Zero;
    for q in b.parts() {
        let eq = q.exponent()?;
        let piece = if eq.is_zero() { a.clone() } else { OrdTerm::wpow(ord_add(&lead_exp, &eq)?) };
        acc = ord_add(&acc, &piece)?;
    }
    Ok(acc)
}
