//! Exhaustive enumeration of normal terms by size, for oracle runs.

use super::{compare, OrdTerm};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// Only `0`, `w^` and sums.
    EpsilonZero,
    /// Every constructor except `mu`.
    Full,
}

/// All normal terms of size `1..=max_size`, zero included.
pub fn enumerate(max_size: usize, frag: Fragment) -> Vec<OrdTerm> {
    // by_size[k] holds the normal terms of size exactly k
    let mut by_size: Vec<Vec<OrdTerm>> = vec![Vec::new(); max_size + 1];
    let mut principals: Vec<Vec<OrdTerm>> = vec![Vec::new(); max_size + 1];
    for k in 1..=max_size {
        let mut prin = Vec::new();
        if k == 1 && frag == Fragment::Full {
            prin.push(OrdTerm::Omega1);
            prin.push(OrdTerm::Rho0);
        }
        for a in &by_size[k - 1] {
            if !a.is_epsilon() {
                prin.push(OrdTerm::WPow(Box::new(a.clone())));
            }
            if frag == Fragment::Full {
                prin.push(OrdTerm::d(0, a.clone()));
                prin.push(OrdTerm::d(1, a.clone()));
                prin.push(OrdTerm::f(a.clone()));
            }
        }
        principals[k] = prin;
        let mut terms = Vec::new();
        if k == 1 {
            terms.push(OrdTerm::Zero);
        }
        terms.extend(principals[k].iter().cloned());
        by_size[k] = terms;
        // sums of size k from principals of smaller sizes
        let mut pool: Vec<(usize, OrdTerm)> = (1..k)
            .flat_map(|s| principals[s].iter().map(move |p| (s, p.clone())))
            .collect();
        pool.sort_by(|(_, x), (_, y)| compare(y, x).unwrap_or(Ordering::Equal));
        let mut acc = Vec::new();
        sums(&pool, 0, k, &mut acc, &mut by_size[k]);
    }
    by_size.into_iter().flatten().collect()
}

fn sums(pool: &[(usize, OrdTerm)], from: usize, left: usize, acc: &mut Vec<OrdTerm>, out: &mut Vec<OrdTerm>) {
    if left == 0 {
        if acc.len() >= 2 {
            out.push(OrdTerm::Sum(acc.clone()));
        }
        return;
    }
    for i in from..pool.len() {
        let (s, p) = &pool[i];
        if *s <= left {
            acc.push(p.clone());
            sums(pool, i, left - s, acc, out);
            acc.pop();
        }
    }
}
