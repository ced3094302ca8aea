use super::*;
use crate::ordinals::{parse_ord, OrdTerm};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn t(s: &str) -> ObjTerm {
    parse_term(s).unwrap()
}

#[test]
fn negate_examples() {
    let a = f("(< x y)");
    assert_eq!(a.negate(), f("(not (< x y))"));
    let b = f("(ex x (and (< x y) (P x y)))");
    assert_eq!(b.negate(), f("(all x (or (not (< x y)) (not (P x y))))"));
    assert_eq!(b.negate().negate(), b);
}

#[test]
fn degree_examples() {
    assert_eq!(f("(< x y)").dg(), 1);
    let l1 = f("(ex x (Pr0 x))");
    let l2 = f("(ex x (P x y))");
    assert_eq!(Formula::or(l1.clone(), l2.clone()).dg(), l1.dg() + l2.dg() + 2);
    let rfl = f("(allb x t (ex z (ex w (and (Pr0 z) (< x w)))))");
    assert_eq!(rfl.dg(), 10);
    assert_eq!(f("(ex u (allb v 3 (< v u)))").dg(), 3);
}

#[test]
fn classify_examples() {
    assert_eq!(f("(< s t)").classify(), Class::Literal);
    assert_eq!(f("(exb x t (< x s))").classify(), Class::Delta0);
    let e = f("(ex x (P x y))");
    assert_eq!(e.classify(), Class::EForm);
    assert!(!e.is_delta0());
    assert_eq!(f("(ex x (< x y))").classify(), Class::Sigma1);
    assert_eq!(f("(all x (< x y))").classify(), Class::Pi1);
    assert_eq!(f("(all x (P x y))").classify(), Class::Other);
}

#[test]
fn subst_examples() {
    assert_eq!(f("(< x s)").subst("x", &ObjTerm::nat(0)), f("(< 0 s)"));
    let q = f("(ex x (< x s))");
    assert_eq!(q.subst("x", &ObjTerm::nat(0)), q);
    // capture avoidance
    let g = f("(ex y (< x y))").subst("x", &ObjTerm::var("y"));
    match &g {
        Formula::Ex(z, body) => {
            assert_ne!(z, "y");
            assert_eq!(**body, f(&format!("(< y {z})")));
        }
        _ => panic!("{g}"),
    }
    // closed substitutions fold constants
    assert_eq!(t("(+ x 1)").subst("x", &ObjTerm::nat(2)), ObjTerm::nat(3));
}

#[test]
fn relativize_examples() {
    let b = f("(< z w)");
    let y = ObjTerm::var("y");
    assert_eq!(Formula::ex("z", b.clone()).relativize(&y), Formula::exb("z", y.clone(), b.clone()));
    let d0 = f("(allb x 3 (< x 4))");
    assert_eq!(d0.relativize(&y), d0);
    let a = f("(ex z (ex w (and (Pr0 z) (< x w))))");
    assert_eq!(a.relativize(&y), f("(exb z y (exb w y (and (Pr0 z) (< x w))))"));
}

#[test]
fn term_evaluation() {
    let defs = Defs::default();
    let ev = Evaluator::new(&defs, SearchBudget::default());
    let raw = ObjTerm::Plus(Box::new(ObjTerm::nat(0)), Box::new(ObjTerm::omega1()));
    assert_eq!(ev.eval_term(&raw).unwrap(), OrdTerm::Omega1);
    let raw = ObjTerm::Plus(Box::new(ObjTerm::omega1()), Box::new(ObjTerm::nat(1)));
    assert_eq!(ev.eval_term(&raw).unwrap().to_string(), "(+ w1 (w^ 0))");
    let raw = ObjTerm::Plus(Box::new(ObjTerm::nat(1)), Box::new(ObjTerm::omega1()));
    assert_eq!(ev.eval_term(&raw).unwrap(), OrdTerm::Omega1);
    assert_eq!(ev.mj(&ObjTerm::var("y")).unwrap(), OrdTerm::Rho0);
    assert_eq!(ev.mj(&ObjTerm::nat(5)).unwrap(), OrdTerm::nat(5));
}

#[test]
fn literal_truth() {
    let defs = Defs::default();
    let ev = Evaluator::new(&defs, SearchBudget::default());
    assert_eq!(ev.eval_literal(&f("(P (D0 3) (F 3))")), Truth::True);
    assert_eq!(ev.eval_literal(&f("(P (D0 3) (F 2))")), Truth::False);
    assert_eq!(ev.eval_literal(&f("(Pr0 w1)")), Truth::False);
    assert_eq!(ev.eval_literal(&f("(Pr0 (D1 0))")), Truth::True);
    assert_eq!(ev.eval_literal(&f("(< w1 1)")), Truth::False);
    assert_eq!(ev.eval_literal(&f("(not (< w1 1))")), Truth::True);
}

#[test]
fn bounded_truth() {
    let defs = Defs::default();
    let ev = Evaluator::new(&defs, SearchBudget::default());
    assert_eq!(ev.eval_delta0(&f("(exb x 3 (< x 2))")), Truth::True);
    assert_eq!(ev.eval_delta0(&f("(allb x 2 (< x 2))")), Truth::True);
    assert_eq!(ev.eval_delta0(&f("(allb x 3 (< x 2))")), Truth::False);
    assert_eq!(ev.eval_delta0(&f("(allb x w1 (< x w1))")), Truth::Undecided);
    assert_eq!(ev.eval_delta0(&f("(exb x w1 (< 7 x))")), Truth::Undecided);
    let mut ev2 = Evaluator::new(&defs, SearchBudget::default());
    ev2.extend_pool([OrdTerm::nat(9)]);
    assert_eq!(ev2.eval_delta0(&f("(exb x w1 (< 7 x))")), Truth::True);
    assert_eq!(ev2.eval_delta0(&f("(allb x w1 (< x 5))")), Truth::False);
}

#[test]
fn recursive_predicates_and_mu() {
    let mut defs = Defs::default();
    // even(a): a = 0 or a = y+1 for some y < a with not even(y)
    let body = "(or (< a 1) (exb y a (and (not (R ev y 0)) (and (not (< (+ y 1) a)) (not (< a (+ y 1)))))))";
    defs.absorb(&crate::sexp::parse_one(&format!("(rdef ev a b {body})")).unwrap()).unwrap();
    defs.absorb(&crate::sexp::parse_one("(mudef sq y (n) (not (< (* y y) n)))").unwrap()).unwrap();
    let ev = Evaluator::new(&defs, SearchBudget::default());
    for n in 0..8u64 {
        let lit = Formula::lit(true, Atom::R("ev".into(), ObjTerm::nat(n), ObjTerm::nat(0)));
        assert_eq!(ev.eval(&lit), Truth::from_bool(n % 2 == 0), "ev {n}");
    }
    let m = parse_ord("(mu sq 10)").unwrap();
    assert_eq!(ev.resolve(&m).unwrap(), OrdTerm::nat(4));
    let lit = Formula::lit(true, Atom::R("ev".into(), ObjTerm::omega1(), ObjTerm::nat(0)));
    assert_eq!(ev.eval(&lit), Truth::Undecided);
}

#[test]
fn formula_round_trip() {
    for s in [
        "(exb x (+ y (w^ 0)) (or (< x y) (not (P x (F 0)))))",
        "(allb x (* y 2) (and (R r x y) (Pr0 x)))",
        "(all x (ex y (< (w^ x) y)))",
    ] {
        let a = f(s);
        assert_eq!(f(&a.to_string()), a);
    }
}
