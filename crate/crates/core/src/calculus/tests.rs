use super::*;
use crate::language::parse_formula;
use crate::ordinals::OrdTerm;

const SMALL: &str = "\
(proof r)
(node r D0 :concl (seq (< 0 1)) :stock 1 :relativizer (D0 (+ (w^ 1) 1)) :prem (a))
(node a ax :concl (seq (< 0 1)) :main (0))
";

fn clauses(src: &str) -> Vec<String> {
    let s = parse_script(src).unwrap();
    validate(&s.proof, &Context::from_script(&s)).diagnostics.into_iter().map(|d| d.clause).collect()
}

#[test]
fn small_proof_validates_with_expected_ordinal() {
    let s = parse_script(SMALL).unwrap();
    let rep = validate(&s.proof, &Context::from_script(&s));
    assert!(rep.is_clean(), "{:?}", rep.diagnostics);
    let o = rep.annotation.unwrap().o_proof().clone();
    assert_eq!(o, OrdTerm::d(0, OrdTerm::nat(2)));
}

#[test]
fn script_round_trips() {
    let s = parse_script(SMALL).unwrap();
    assert_eq!(parse_script(&print_script(&s)).unwrap(), s);
    let nested = parse_script(include_str!("../../../../fixtures/nested_ind.proof")).unwrap();
    assert_eq!(parse_script(&print_script(&nested)).unwrap(), nested);
}

#[test]
fn nested_induction_is_rejected_by_h4() {
    let cs = clauses(include_str!("../../../../fixtures/nested_ind.proof"));
    assert!(cs.iter().any(|c| c == "h4"), "{cs:?}");
}

#[test]
fn missing_root_stock_is_reported() {
    let cs = clauses(&SMALL.replace(":stock 1 ", ""));
    assert!(cs.iter().any(|c| c == "stock" || c == "assign"), "{cs:?}");
}

#[test]
fn low_relativizer_is_a_p2_violation() {
    let cs = clauses(&SMALL.replace("(D0 (+ (w^ 1) 1))", "(D0 (w^ 1))"));
    assert!(cs.iter().any(|c| c == "p2"), "{cs:?}");
}

#[test]
fn false_axiom_fails_rule_check() {
    let cs = clauses(&SMALL.replace("(< 0 1)", "(< 1 0)"));
    assert!(!cs.is_empty());
}

#[test]
fn missing_d0_is_h7() {
    let src = "(proof a)\n(node a ax :concl (seq (< 0 1)) :main (0))\n";
    assert!(clauses(src).iter().any(|c| c == "h7"));
}

#[test]
fn heights_count_h_rules() {
    let a = parse_formula("(< 0 1)").unwrap();
    let top = Node::new("t", Rule::Ax, vec![a.clone()], vec![]).with(|p| p.main = vec![0]);
    let h1 = Node::new("h1", Rule::H, vec![a.clone()], vec![top]);
    let h2 = Node::new("h2", Rule::H, vec![a.clone()], vec![h1]);
    let p = Proof::new(Node::new("r", Rule::D0, vec![a], vec![h2]));
    let hs = heights(&p);
    assert_eq!(hs["r"], Height::ZERO);
    assert!(hs["t"].at_least(2));
    assert!(hs["t"] > hs["h1"] && hs["h1"] > hs["h2"]);
}
