//! Cantor normal forms below epsilon-zero, used as an independent oracle.
//!
//! A `Cnf` is the list of exponents of `w^e1 + ... + w^en` with
//! `e1 >= ... >= en`. With that invariant the derived lexicographic `Ord`
//! on the exponent list is exactly the ordinal order.

use super::OrdTerm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cnf(pub Vec<Cnf>);

impl Cnf {
    pub fn zero() -> Self {
        Cnf(Vec::new())
    }

    pub fn omega_pow(e: Cnf) -> Self {
        Cnf(vec![e])
    }

    pub fn natural_sum(&self, other: &Cnf) -> Cnf {
        let mut es: Vec<Cnf> = self.0.iter().chain(&other.0).cloned().collect();
        es.sort_by(|x, y| y.cmp(x));
        Cnf(es)
    }

    pub fn natural_product(&self, other: &Cnf) -> Cnf {
        let mut es = Vec::new();
        for x in &self.0 {
            for y in &other.0 {
                es.push(x.natural_sum(y));
            }
        }
        es.sort_by(|x, y| y.cmp(x));
        Cnf(es)
    }
}

pub fn to_cnf_small(a: &OrdTerm) -> Result<Cnf> {
    match a {
        OrdTerm::Zero => Ok(Cnf::zero()),
        OrdTerm::WPow(e) => Ok(Cnf::omega_pow(to_cnf_small(e)?)),
        OrdTerm::Sum(ps) => {
            let mut es = Vec::new();
            for p in ps {
                es.extend(to_cnf_small(p)?.0);
            }
            es.sort_by(|x, y| y.cmp(x));
            Ok(Cnf(es))
        }
        _ => Err(Error::OutsideFragment(a.to_string())),
    }
}
