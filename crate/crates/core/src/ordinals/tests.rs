use super::*;
use std::cmp::Ordering::*;

fn p(s: &str) -> OrdTerm {
    parse_ord(s).unwrap()
}

#[test]
fn normalize_examples() {
    let one = OrdTerm::one();
    assert_eq!(normalize(OrdTerm::Sum(vec![OrdTerm::Zero, one.clone()])), one);
    assert_eq!(normalize(OrdTerm::WPow(Box::new(OrdTerm::Omega1))), OrdTerm::Omega1);
    assert_eq!(
        normalize(OrdTerm::Sum(vec![one.clone(), OrdTerm::Rho0])),
        OrdTerm::Sum(vec![OrdTerm::Rho0, one])
    );
}

#[test]
fn compare_examples() {
    assert_eq!(compare(&OrdTerm::Zero, &OrdTerm::one()).unwrap(), Less);
    assert_eq!(compare(&OrdTerm::Omega1, &OrdTerm::Rho0).unwrap(), Less);
    for a in ["0", "w1", "r0", "(D1 r0)", "(+ r0 1)"] {
        assert_eq!(compare(&OrdTerm::d(0, p(a)), &OrdTerm::Omega1).unwrap(), Less);
        assert_eq!(compare(&OrdTerm::Omega1, &OrdTerm::d(1, p(a))).unwrap(), Less);
        assert_eq!(compare(&OrdTerm::d(1, p(a)), &OrdTerm::Rho0).unwrap(), Less);
    }
    let c = p("(w^ (w^ 0))");
    let (b1, b2) = (p("1"), p("(w^ 1)"));
    assert_eq!(
        compare(&nsum(&c, &OrdTerm::wpow(b1)), &nsum(&c, &OrdTerm::wpow(b2))).unwrap(),
        Less
    );
}

#[test]
fn arithmetic_examples() {
    let a = p("(+ w1 (D0 0))");
    assert_eq!(nsum(&a, &OrdTerm::Zero), a);
    assert_eq!(nsum(&OrdTerm::one(), &OrdTerm::one()), OrdTerm::nat(2));
    let w = p("(w^ (w^ 0))");
    assert_eq!(nsum(&w, &nsum(&w, &OrdTerm::one())).to_string(), "(+ (w^ (w^ 0)) (w^ (w^ 0)) (w^ 0))");
    assert_eq!(nprod(&a, &OrdTerm::one()).unwrap(), a);
    assert_eq!(nprod(&OrdTerm::nat(2), &w).unwrap(), nsum(&w, &w));
    assert_eq!(nprod(&OrdTerm::nat(2), &OrdTerm::Rho0).unwrap().to_string(), "(+ r0 r0)");
}

#[test]
fn ordinary_arithmetic_absorbs() {
    let one = OrdTerm::one();
    assert_eq!(ord_add(&OrdTerm::Zero, &OrdTerm::Omega1).unwrap(), OrdTerm::Omega1);
    assert_eq!(ord_add(&OrdTerm::Omega1, &one).unwrap().to_string(), "(+ w1 (w^ 0))");
    assert_eq!(ord_add(&one, &OrdTerm::Omega1).unwrap(), OrdTerm::Omega1);
    assert_eq!(ord_mul(&OrdTerm::nat(2), &OrdTerm::Omega1).unwrap(), OrdTerm::Omega1);
    assert_eq!(ord_mul(&OrdTerm::Omega1, &OrdTerm::nat(2)).unwrap().to_string(), "(+ w1 w1)");
    assert_eq!(ord_mul(&OrdTerm::nat(2), &OrdTerm::nat(3)).unwrap(), OrdTerm::nat(6));
}

#[test]
fn gset_examples() {
    let any = p("(D1 (+ w1 1))");
    assert!(gset(&any, &OrdTerm::Zero).unwrap().is_empty());
    let dc = p("(D1 5)");
    assert!(gset(&dc, &p("(D0 r0)")).unwrap().is_empty());
    let g = gset(&OrdTerm::one(), &p("(D1 w1)")).unwrap();
    assert_eq!(g.into_iter().collect::<Vec<_>>(), vec![OrdTerm::Omega1]);
    assert!(gset_below(&any, &OrdTerm::Zero, &OrdTerm::Zero).unwrap());
    assert!(gset_below(&OrdTerm::one(), &p("(D1 w1)"), &OrdTerm::Rho0).unwrap());
    assert!(!gset_below(&OrdTerm::one(), &p("(D1 r0)"), &OrdTerm::Rho0).unwrap());
}

#[test]
fn region_examples() {
    assert_eq!(region(&OrdTerm::nat(2)).unwrap(), Region::Finite(2));
    assert_eq!(region(&p("(F (+ r0 1))")).unwrap(), Region::Countable);
    assert_eq!(region(&p("(w^ (+ r0 1))")).unwrap(), Region::Above);
}

#[test]
fn cnf_examples() {
    assert_eq!(to_cnf_small(&OrdTerm::Zero).unwrap(), Cnf::zero());
    let ww = to_cnf_small(&p("(w^ (w^ 1))")).unwrap();
    assert_eq!(ww, Cnf::omega_pow(Cnf::omega_pow(Cnf::omega_pow(Cnf::zero()))));
    assert!(matches!(to_cnf_small(&OrdTerm::Omega1), Err(Error::OutsideFragment(_))));
}

#[test]
fn mu_is_opaque() {
    let m = p("(mu f 3)");
    assert!(compare(&m, &OrdTerm::one()).is_err());
    assert_eq!(compare(&m, &m).unwrap(), Equal);
}

#[test]
fn print_parse_round_trip() {
    for s in ["0", "w1", "(+ r0 (w^ 0))", "(D1 (+ w1 (w^ 0)))", "(F (D0 0))", "(mu g (w^ 0) w1)"] {
        assert_eq!(p(s).to_string(), s);
    }
    assert!(parse_ord("(G 0)").is_err());
}

#[test]
fn enumeration_yields_normal_terms() {
    use enumerate::{enumerate, Fragment};
    let small = enumerate(4, Fragment::EpsilonZero);
    for t in &small {
        assert_eq!(&normalize(t.clone()), t, "not normal: {t}");
    }
    let full = enumerate(3, Fragment::Full);
    for t in &full {
        assert_eq!(&normalize(t.clone()), t, "not normal: {t}");
    }
    let mut dedup = full.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), full.len());
}
