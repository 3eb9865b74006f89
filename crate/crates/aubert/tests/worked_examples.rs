use aubert::arthur::{self, check_star, der_special, dual_tempered, from_aparam, soc_special, to_aparam, AParamForm};
use aubert::calculus::{
    derivative_at, derivative_delta01, derivative_z01, irreducible_at, socle_at, socle_z01, Point,
};
use aubert::duality::dual;
use aubert::model::{GroupType, LanglandsDatum, Rho, Sign, TemperedData};
use aubert::parse::{parse_rep, Decls};
use aubert::HalfInt;

fn sp(s: &str) -> LanglandsDatum {
    parse_rep(s, &Decls::standard(GroupType::SpEven)).unwrap()
}

fn one() -> Rho {
    Rho::trivial("1")
}

fn at(x: i64) -> Point {
    Point::new(one(), HalfInt::int(x))
}

fn phi(s: &str) -> TemperedData {
    sp(s).temp.clone()
}

#[test]
fn rank_of_golden_inputs() {
    assert_eq!(sp("pi(1+,1+,3+,5-,5-)").rank().unwrap(), 7);
    assert_eq!(sp("L(D[0,-2],D[0,-1];pi(3+))").rank().unwrap(), 6);
}

#[test]
fn derivatives_along_the_chains() {
    let cases = [
        ("L(D[-2,-2];pi(3+))", -2, 1, "pi(3+)"),
        ("pi(1+,1+,3+,5-,5-)", 2, 1, "L(D[1,-2];pi(1+,1+,3+))"),
        ("L(D[1,-2];pi(1-,1-,3+))", 1, 1, "L(D[0,-2];pi(1-,1-,3+))"),
        ("pi(3+)", 1, 1, "pi(1+)"),
        ("pi(1+,1+,3+)", 1, 1, "pi(1+,1+,1+)"),
        ("L(D[1,-2];pi(1+,1+,3+))", 1, 2, "L(D[0,-2];pi(1+,1+,1+))"),
    ];
    for (input, x, k, want) in cases {
        let r = derivative_at(&sp(input), &at(x)).unwrap();
        assert_eq!((r.k, r.value.to_string()), (k, want.to_string()), "{input} at {x}");
    }
}

#[test]
fn derivative_away_from_support_is_trivial() {
    let d = sp("L(D[0,-1];pi(1+))");
    let r = derivative_at(&d, &at(3)).unwrap();
    assert_eq!(r.k, 0);
    assert_eq!(r.value, d);
}

#[test]
fn socles_along_the_chains() {
    let cases = [
        ("pi(1+)", -1, 1, "L(D[-1,-1];pi(1+))"),
        ("L(D[-1,-1];pi(1+))", 2, 1, "L(D[-1,-2];pi(1+))"),
        (
            "L(D[0,-2],D[-1,-1];pi(1-,1-,3+))",
            -2,
            1,
            "L(D[-2,-2],D[-1,-1],D[0,-2];pi(1-,1-,3+))",
        ),
    ];
    for (input, x, r, want) in cases {
        assert_eq!(socle_at(&sp(input), &at(x), r).unwrap(), sp(want), "{input} at {x}");
    }
}

#[test]
fn delta01_derivatives() {
    let cases = [
        ("L(D[0,-2],D[0,-1];pi(3+))", 2, "L(D[-2,-2];pi(3+))"),
        ("L(D[0,-1];pi(1+,1+,1+))", 1, "pi(1+,1+,1+)"),
        ("L(D[0,-2];pi(1-,1-,3+))", 1, "L(D[-2,-2];pi(1-,1-,3+))"),
    ];
    for (input, k, want) in cases {
        let r = derivative_delta01(&sp(input), &one()).unwrap();
        assert_eq!((r.k, r.value.to_string()), (k, want.to_string()), "{input}");
    }
}

#[test]
fn z01_derivatives_and_socles() {
    assert_eq!(derivative_z01(&sp("pi(1+)"), &one()).unwrap().k, 0);
    let r = derivative_z01(&sp("pi(1-,1-,3+)"), &one()).unwrap();
    assert_eq!((r.k, r.value.to_string()), (1, "pi(1+)".to_string()));
    let r = derivative_z01(&sp("pi(1-,1-,1-,1-,3+)"), &one()).unwrap();
    assert_eq!((r.k, r.value.to_string()), (1, "pi(1+,1+,1+)".to_string()));

    let cases = [
        ("pi(1+)", 1, "pi(1-,1-,3+)"),
        ("L(D[-1,-2];pi(1+))", 2, "L(D[0,-2],D[0,-1];pi(3+))"),
        ("L(D[0,-2];pi(1+))", 1, "L(D[0,-2];pi(1-,1-,3+))"),
        ("pi(1+,1+,1+)", 1, "pi(1-,1-,1-,1-,3+)"),
    ];
    for (input, k, want) in cases {
        assert_eq!(socle_z01(&sp(input), &one(), k).unwrap(), sp(want), "{input}");
    }
}

#[test]
fn aparam_round_trips() {
    let a = to_aparam(0, &phi("pi(1-,1-,3+)"), HalfInt::ONE, &one()).unwrap();
    assert_eq!(a.l, 0);
    assert_eq!(from_aparam(&a, GroupType::SpEven).unwrap(), sp("pi(1-,1-,3+)"));

    let a = to_aparam(0, &phi("pi(3+)"), HalfInt::int(2), &one()).unwrap();
    assert_eq!(a.l, 1);
    let a = to_aparam(1, &phi("pi(3+)"), HalfInt::ONE, &one()).unwrap();
    assert_eq!(a.l, 1);
}

#[test]
fn from_aparam_examples() {
    let form = |x: i64, s: u32, t: u32, p: &str| AParamForm {
        rho: one(),
        x: HalfInt::int(x),
        s,
        t,
        l: 1,
        phi: phi(p),
        eta_psi: Sign::Plus,
    };
    let cases = [
        (form(1, 0, 0, "pi(3+)"), "pi(3+)"),
        (form(1, 0, 1, "pi(1+)"), "L(D[0,-1];pi(1+))"),
        (form(2, 1, 0, "pi(3+)"), "L(D[-2,-2];pi(3+))"),
    ];
    for (a, want) in cases {
        assert_eq!(from_aparam(&a, GroupType::SpEven).unwrap(), sp(want));
    }
}

#[test]
fn special_derivative_and_socle() {
    let a = to_aparam(0, &phi("pi(3+)"), HalfInt::ONE, &one()).unwrap();
    let (k, low) = der_special(&a).unwrap();
    assert_eq!(k, 1);
    assert_eq!(from_aparam(&low, GroupType::SpEven).unwrap(), sp("pi(1+)"));

    // Only the special part of the derivative; the A-set contributes the rest.
    let a = to_aparam(0, &phi("pi(1+,1+,3+)"), HalfInt::ONE, &one()).unwrap();
    assert_eq!(der_special(&a).unwrap().0, 1);

    let a = to_aparam(0, &phi("pi(1-,1-,3+)"), HalfInt::ONE, &one()).unwrap();
    let up = soc_special(&a).unwrap();
    assert_eq!(from_aparam(&up, GroupType::SpEven).unwrap(), sp("L(D[0,-1];pi(3+))"));
    assert_eq!(der_special(&up).unwrap(), (der_special(&a).unwrap().0 + 1, der_special(&a).unwrap().1));

    let a = to_aparam(0, &phi("pi(1+)"), HalfInt::int(2), &one()).unwrap();
    assert_eq!(a.m_prime(), 0);
    assert_eq!(soc_special(&a).unwrap().s, 1);
}

#[test]
fn star_condition() {
    assert!(check_star(&phi("pi(1-,1-,3+)"), GroupType::SpEven));
    assert!(check_star(&phi("pi(1+,1+,1+)"), GroupType::SpEven));
    assert!(!check_star(&phi("pi(1+,3+,3+)"), GroupType::SpEven));
}

#[test]
fn tempered_duals() {
    let (segs, temp) = dual_tempered(&phi("pi(1-,1-,3+)"), GroupType::SpEven).unwrap();
    assert_eq!(LanglandsDatum::new(GroupType::SpEven, segs, temp), sp("L(D[0,-1];pi(1+))"));
    let (segs, temp) = dual_tempered(&phi("pi(1+,1+,1+)"), GroupType::SpEven).unwrap();
    assert!(segs.is_empty());
    assert_eq!(temp, phi("pi(1+,1+,1+)"));
}

#[test]
fn irreducibility_examples() {
    assert!(!irreducible_at(&sp("pi(1+)"), &at(1)).unwrap());
    assert!(irreducible_at(&sp("pi(1+)"), &at(3)).unwrap());
    let a = to_aparam(0, &phi("pi(3+)"), HalfInt::ONE, &one()).unwrap();
    assert_eq!(arthur::m_psi_minus(&a), 0);
    assert!(irreducible_at(&sp("pi(3+)"), &at(1)).unwrap());
}

#[test]
fn golden_duals() {
    let cases = [
        ("L(D[0,-2],D[0,-1];pi(3+))", "L(D[0,-2],D[0,-1];pi(3+))"),
        ("pi(1+,1+,3+,5-,5-)", "L(D[-1,-2],D[-2,-2],D[-1,-1];pi(1-,1-,1-,1-,3+))"),
        ("pi(1-,1-,3+,5-,5-)", "L(D[0,-2],D[-2,-2],D[-1,-1];pi(1-,1-,3+))"),
        ("pi(3+,5-,5-)", "L(D[-1,-2],D[-2,-2],D[-1,-1];pi(1-,1-,3+))"),
        ("L(D[0,-2];pi(1-,1-,3+))", "L(D[0,-2];pi(1-,1-,3+))"),
    ];
    for (input, want) in cases {
        assert_eq!(dual(&sp(input)).unwrap().0, sp(want), "{input}");
    }
}
