//! Replacing a subproof and pushing the change down to the end-sequent.

use super::surgery::{remap, weaken_in};
use crate::calculus::{is_d1_family, premise_map, Anc, Node, Rule};
use crate::error::{Error, Result};
use crate::language::{Evaluator, Formula, ObjTerm};

/// Length of the minor block the node at `path` owes its parent.
pub fn tail_len(root: &Node, path: &[usize]) -> usize {
    match path.split_last() {
        Some((&k, up)) => root.at(up).rule.minor_count(k),
        None => 0,
    }
}

/// Moves the listed formulas, in order, to the end of the sequent.
pub(crate) fn move_to_end(n: &mut Node, fs: &[Formula]) {
    let old = n.concl.clone();
    for f in fs {
        if let Some(i) = n.concl.iter().position(|g| g == f) {
            let g = n.concl.remove(i);
            n.concl.push(g);
        }
    }
    n.pl.main = remap(&n.pl.main, &old, &n.concl);
}

/// Puts `new` at `path`. Formulas of the old conclusion that `new` lacks are
/// weakened into it; formulas it adds travel down to the end-sequent,
/// relativized at a `D1` when they belong to the rule's family.
pub fn graft(root: &Node, path: &[usize], new: Node) -> Result<Node> {
    let old = root.at(path);
    let tail = tail_len(root, path);
    let lost: Vec<Formula> = old.concl.iter().filter(|f| !new.concl.contains(f)).cloned().collect();
    if let Some(f) = lost.iter().find(|f| !f.is_closed()) {
        return Err(Error::Transform { node: old.id.clone(), msg: format!("cannot weaken by open formula {f}") });
    }
    let mut new = if lost.is_empty() { new } else { weaken_in(&new, &lost, 0)? };
    let old_tail = old.concl[old.concl.len() - tail.min(old.concl.len())..].to_vec();
    move_to_end(&mut new, &old_tail);

    let olds: Vec<Vec<Formula>> = (0..=path.len()).map(|i| root.at(&path[..i]).concl.clone()).collect();
    let mut out = root.clone();
    *out.at_mut(path) = new;
    for i in (0..path.len()).rev() {
        let k = path[i];
        let ptail = tail_len(&out, &path[..i]);
        let parent = out.at_mut(&path[..i]);
        let before = parent.concl.clone();
        if parent.rule == Rule::D1 {
            parent.pl.rel = remap(&parent.pl.rel, &olds[i + 1], &parent.prems[k].concl);
        }
        let missing: Vec<usize> = premise_map(parent, k)
            .into_iter()
            .enumerate()
            .filter(|(_, a)| *a == Anc::Lost)
            .map(|(p, _)| p)
            .collect();
        for p in missing {
            let f = parent.prems[k].concl[p].clone();
            let img = match (&parent.rule, &parent.pl.relativizer) {
                (Rule::D1, Some(a)) if is_d1_family(&f) => {
                    parent.pl.rel.push(p);
                    f.relativize(&ObjTerm::konst(a.clone()))
                }
                _ => f,
            };
            if !parent.concl.contains(&img) {
                let at = parent.concl.len() - ptail.min(parent.concl.len());
                parent.concl.insert(at, img);
            }
        }
        parent.pl.rel.sort_unstable();
        parent.pl.rel.dedup();
        parent.pl.main = remap(&parent.pl.main, &before, &parent.concl);
    }
    Ok(out)
}

/// Drops every occurrence of the false closed literal `f` from the
/// conclusion of `n`, with ancestors.
pub fn drop_all(n: &Node, f: &Formula, ev: &Evaluator) -> Result<Node> {
    let mut n = n.clone();
    while let Some(pos) = n.concl.iter().position(|g| g == f) {
        n = super::surgery::drop_false_in(&n, pos, ev)?;
    }
    Ok(n)
}
