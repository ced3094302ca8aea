//! Proof scripts: a `(proof <root-id>)` header, optional definitions, and one
//! `(node ...)` form per inference, printed in pre-order.

use super::proof::{Node, Payload, Proof, Rule};
use crate::error::{Error, Result};
use crate::language::{formula_from_sexp, formula_to_sexp, term_from_sexp, term_to_sexp, Defs, Formula};
use crate::ordinals::{ord_from_sexp, ord_to_sexp};
use crate::sexp::{parse_all, Sexp};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub proof: Proof,
    pub defs: Defs,
    pub axioms: Vec<Formula>,
}

struct Raw {
    node: Node,
    prems: Vec<String>,
}

fn atom_list(s: &Sexp, what: &str) -> Result<Vec<String>> {
    s.as_list()
        .ok_or_else(|| Error::parse(format!("{what} must be a list, got {s}")))?
        .iter()
        .map(|a| a.as_atom().map(str::to_string).ok_or_else(|| Error::parse(format!("bad {what} entry {a}"))))
        .collect()
}

fn index_list(s: &Sexp, what: &str) -> Result<Vec<usize>> {
    atom_list(s, what)?
        .iter()
        .map(|a| a.parse().map_err(|_| Error::parse(format!("bad {what} index `{a}`"))))
        .collect()
}

fn parse_node(items: &[Sexp]) -> Result<Raw> {
    let id = items.get(1).and_then(Sexp::as_atom).ok_or_else(|| Error::parse("node without id"))?;
    let tag = items.get(2).and_then(Sexp::as_atom).ok_or_else(|| Error::parse(format!("node {id} without rule")))?;
    let rule = Rule::from_tag(tag).ok_or_else(|| Error::parse(format!("node {id}: unknown rule `{tag}`")))?;
    let mut node = Node::new(id, rule, Vec::new(), Vec::new());
    let mut prems = Vec::new();
    let mut rest = &items[3..];
    while !rest.is_empty() {
        let key = rest[0].as_atom().filter(|k| k.starts_with(':'));
        let (key, val) = match (key, rest.get(1)) {
            (Some(k), Some(v)) => (k, v),
            _ => return Err(Error::parse(format!("node {id}: expected `:key value`, got {}", rest[0]))),
        };
        let pl = &mut node.pl;
        match key {
            ":concl" => {
                let l = val.as_list().filter(|_| val.head() == Some("seq"));
                let l = l.ok_or_else(|| Error::parse(format!("node {id}: :concl must be (seq ...)")))?;
                node.concl = l[1..].iter().map(formula_from_sexp).collect::<Result<_>>()?;
            }
            ":prem" => prems = atom_list(val, ":prem")?,
            ":main" => pl.main = index_list(val, ":main")?,
            ":rel" => pl.rel = index_list(val, ":rel")?,
            ":witness" => pl.witness = Some(term_from_sexp(val)?),
            ":eigen" => {
                pl.eigen = Some(val.as_atom().ok_or_else(|| Error::parse(format!("node {id}: bad :eigen")))?.to_string())
            }
            ":formula" => pl.formula = Some(formula_from_sexp(val)?),
            ":vars" => pl.vars = atom_list(val, ":vars")?,
            ":terms" => {
                let l = val.as_list().ok_or_else(|| Error::parse(format!("node {id}: :terms must be a list")))?;
                pl.terms = l.iter().map(term_from_sexp).collect::<Result<_>>()?;
            }
            ":relativizer" => pl.relativizer = Some(ord_from_sexp(val)?),
            ":stock" => pl.stock = Some(ord_from_sexp(val)?),
            _ => return Err(Error::parse(format!("node {id}: unknown key `{key}`"))),
        }
        rest = &rest[2..];
    }
    Ok(Raw { node, prems })
}

pub fn parse_script(src: &str) -> Result<Script> {
    Ok(parse_forms(src, "proof")?.0)
}

/// A skeleton: `(skeleton <root-id>)` header and `(leaf <id> <kind> ...)`
/// forms besides ordinary nodes. Leaves come back as premise-free `taut`
/// placeholders, with their kinds keyed by id.
pub fn parse_skeleton_script(src: &str) -> Result<(Script, BTreeMap<String, String>)> {
    parse_forms(src, "skeleton")
}

fn parse_forms(src: &str, header: &str) -> Result<(Script, BTreeMap<String, String>)> {
    let forms = parse_all(src)?;
    let mut leaves = BTreeMap::new();
    let mut root_id = None;
    let mut defs = Defs::default();
    let mut axioms = Vec::new();
    let mut raws: HashMap<String, Raw> = HashMap::new();
    for f in &forms {
        let items = f.as_list().unwrap_or(&[]);
        match f.head() {
            Some(h) if h == header => {
                let id = items.get(1).and_then(Sexp::as_atom);
                let id = id.ok_or_else(|| Error::parse(format!("bad ({header} <root-id>) header")))?;
                root_id = Some(id.to_string());
            }
            Some("leaf") if header == "skeleton" => {
                let kind = items.get(2).and_then(Sexp::as_atom).ok_or_else(|| Error::parse("leaf without kind"))?;
                let mut v = items.to_vec();
                v[2] = Sexp::atom("taut");
                let raw = parse_node(&v)?;
                let id = raw.node.id.clone();
                leaves.insert(id.clone(), kind.to_string());
                if raws.insert(id.clone(), raw).is_some() {
                    return Err(Error::parse(format!("duplicate node id {id}")));
                }
            }
            Some("axiom") if items.len() == 2 => axioms.push(formula_from_sexp(&items[1])?),
            Some("node") => {
                let raw = parse_node(items)?;
                let id = raw.node.id.clone();
                if raws.insert(id.clone(), raw).is_some() {
                    return Err(Error::parse(format!("duplicate node id {id}")));
                }
            }
            _ => {
                if !defs.absorb(f)? {
                    return Err(Error::parse(format!("unexpected form {f}")));
                }
            }
        }
    }
    let root_id = root_id.ok_or_else(|| Error::parse(format!("missing ({header} <root-id>) header")))?;
    let root = build(&root_id, &mut raws, 0)?;
    if let Some(id) = raws.keys().next() {
        return Err(Error::parse(format!("node {id} is not reachable from the root")));
    }
    Ok((Script { proof: Proof::new(root), defs, axioms }, leaves))
}

fn build(id: &str, raws: &mut HashMap<String, Raw>, depth: usize) -> Result<Node> {
    if depth > 100_000 {
        return Err(Error::parse("proof too deep"));
    }
    let raw = raws.remove(id).ok_or_else(|| Error::parse(format!("missing or shared node {id}")))?;
    let mut node = raw.node;
    for p in &raw.prems {
        node.prems.push(build(p, raws, depth + 1)?);
    }
    Ok(node)
}

fn node_sexp(n: &Node) -> Sexp {
    let a = |s: &str| Sexp::atom(s);
    let mut v = vec![a("node"), a(&n.id), a(n.rule.tag())];
    let mut concl = vec![a("seq")];
    concl.extend(n.concl.iter().map(formula_to_sexp));
    v.extend([a(":concl"), Sexp::list(concl)]);
    v.extend([a(":prem"), Sexp::list(n.prems.iter().map(|p| a(&p.id)).collect())]);
    let Payload { main, witness, eigen, formula, vars, terms, rel, relativizer, stock } = &n.pl;
    let idx = |xs: &[usize]| Sexp::list(xs.iter().map(|i| a(&i.to_string())).collect());
    if !main.is_empty() {
        v.extend([a(":main"), idx(main)]);
    }
    if let Some(t) = witness {
        v.extend([a(":witness"), term_to_sexp(t)]);
    }
    if let Some(x) = eigen {
        v.extend([a(":eigen"), a(x)]);
    }
    if let Some(f) = formula {
        v.extend([a(":formula"), formula_to_sexp(f)]);
    }
    if !vars.is_empty() {
        v.extend([a(":vars"), Sexp::list(vars.iter().map(|x| a(x)).collect())]);
    }
    if !terms.is_empty() {
        v.extend([a(":terms"), Sexp::list(terms.iter().map(term_to_sexp).collect())]);
    }
    if !rel.is_empty() {
        v.extend([a(":rel"), idx(rel)]);
    }
    if let Some(r) = relativizer {
        v.extend([a(":relativizer"), ord_to_sexp(r)]);
    }
    if let Some(c) = stock {
        v.extend([a(":stock"), ord_to_sexp(c)]);
    }
    Sexp::List(v)
}

pub fn print_script(s: &Script) -> String {
    let mut out = format!("(proof {})\n", s.proof.root.id);
    for d in s.defs.to_sexps() {
        out.push_str(&format!("{d}\n"));
    }
    for ax in &s.axioms {
        out.push_str(&format!("(axiom {})\n", formula_to_sexp(ax)));
    }
    s.proof.root.walk(&mut Vec::new(), &mut |_, n| {
        out.push_str(&format!("{}\n", node_sexp(n)));
    });
    out
}
