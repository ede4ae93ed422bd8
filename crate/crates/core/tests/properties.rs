use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use supergrass::constructors::{self, Method1Spec, TriangularSpec};
use supergrass::identities::{self, CheckOptions};
use supergrass::isomorphism;
use supergrass::{
    Degree, Element, Monomial, Parity, QElement, QGrading, QSuperPolynomial, Scalar, TailRule, Truncation, Variable,
};

const N: usize = 7;

fn trunc() -> Truncation {
    Truncation::new(N).unwrap()
}

fn el(text: &str) -> QElement {
    Element::parse(trunc(), text).unwrap()
}

fn element() -> impl Strategy<Value = QElement> {
    prop::collection::vec((0u64..1 << N, -5i64..=5, 1i64..=4), 0..6).prop_map(|terms| {
        let terms = terms
            .into_iter()
            .map(|(bits, num, den)| (Monomial::from_bits(bits), BigRational::new(num.into(), den.into())));
        Element::from_terms(trunc(), terms).unwrap()
    })
}

fn gradings() -> Vec<QGrading> {
    let n = trunc();
    let phi = Method1Spec {
        plus: (2..=N).collect(),
        minus: Default::default(),
        shifts: [(1, el("e2e3e4"))].into(),
    };
    let mixed = Method1Spec {
        plus: [2, 5].into(),
        minus: Default::default(),
        shifts: [(4, el("e1e2e3 + 3e2"))].into(),
    };
    vec![
        constructors::method1(&phi, n, TailRule::Identity).unwrap(),
        constructors::method1(&mixed, n, TailRule::Negation).unwrap(),
        constructors::method2(1, 3, n).unwrap(),
        constructors::prop_minus(n).unwrap(),
        constructors::triangular_grading(
            &TriangularSpec {
                n: 2,
                p: el("e3 - e4e5e6"),
            },
            n,
        )
        .unwrap(),
        constructors::homogeneous(supergrass::HomogeneousModel::EInf, n).unwrap(),
    ]
}

fn polynomial() -> impl Strategy<Value = QSuperPolynomial> {
    let var = (0u8..3, 1u32..=3).prop_map(|(sort, i)| match sort {
        0 => Variable::y(i),
        1 => Variable::z(i),
        _ => Variable::x(i),
    });
    let word = prop::collection::vec(var, 0..4);
    prop::collection::vec((word, -3i64..=3), 0..5)
        .prop_map(|terms| QSuperPolynomial::from_terms(terms.into_iter().map(|(w, c)| (w, BigRational::from_int(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative_and_unital(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let one = Element::one(trunc());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&one * &a, a);
    }

    #[test]
    fn even_part_is_central(a in element(), b in element()) {
        let even = a.even_part();
        prop_assert_eq!(&even * &b, &b * &even);
    }

    #[test]
    fn constructor_maps_are_multiplicative(a in element(), b in element()) {
        for g in gradings() {
            let phi = g.phi();
            prop_assert_eq!(phi.apply(&(&a * &b)).unwrap(), &phi.apply(&a).unwrap() * &phi.apply(&b).unwrap());
            prop_assert_eq!(phi.apply(&phi.apply(&a).unwrap()).unwrap(), a.clone());
        }
    }

    #[test]
    fn projections_split_and_respect_products(a in element(), b in element()) {
        for g in gradings() {
            let (a0, a1) = (g.project(&a, Parity::Even).unwrap(), g.project(&a, Parity::Odd).unwrap());
            prop_assert_eq!(&a0 + &a1, a.clone());
            prop_assert_eq!(g.project(&a0, Parity::Even).unwrap(), a0.clone());
            prop_assert!(g.lies_in(&a1, Parity::Odd).unwrap());
            let b1 = g.project(&b, Parity::Odd).unwrap();
            prop_assert!(g.lies_in(&(&a0 * &b1), Parity::Odd).unwrap());
            prop_assert!(g.lies_in(&(&a1 * &b1), Parity::Even).unwrap());
            if !a0.is_zero() && !a1.is_zero() {
                prop_assert_eq!(g.degree_of(&a).unwrap(), Degree::Mixed);
            }
        }
    }

    #[test]
    fn certificates_carry_components_across(a in element()) {
        for g in gradings() {
            let cert = isomorphism::standard_equivalence(&g).unwrap().unwrap();
            prop_assert!(cert.verified);
            for p in [Parity::Even, Parity::Odd] {
                let x = cert.f.source().project(&a, p).unwrap();
                let fx = cert.f.apply(&x).unwrap();
                prop_assert!(g.lies_in(&fx, p).unwrap());
                prop_assert_eq!(cert.g.apply(&fx).unwrap(), x);
            }
        }
    }

    #[test]
    fn elements_survive_text_and_json(a in element()) {
        prop_assert_eq!(Element::parse(trunc(), &a.to_string()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<QElement>(&json).unwrap(), a);
    }

    #[test]
    fn polynomials_survive_text(p in polynomial()) {
        let back: QSuperPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn multilinear_input_is_left_alone(p in polynomial()) {
        let parts = p.multilinearize();
        prop_assert!(parts.iter().all(QSuperPolynomial::is_multilinear));
        if p.is_multilinear() && !p.is_zero() {
            prop_assert_eq!(parts, vec![p]);
        }
    }

    #[test]
    fn witnesses_reproduce(p in polynomial()) {
        let g = constructors::homogeneous::<BigRational>(supergrass::HomogeneousModel::EInf, Truncation::new(4).unwrap()).unwrap();
        let v = identities::is_identity(&p, &g, &CheckOptions::exhaustive(2)).unwrap();
        if let Some(w) = v.witness {
            let value = w.polynomial.evaluate(g.truncation(), &w.assignment, Some(&g)).unwrap();
            prop_assert!(!value.is_zero());
            prop_assert_eq!(value, w.value);
        }
    }
}

#[test]
fn parity_mismatch_is_rejected() {
    let g = constructors::homogeneous::<BigRational>(supergrass::HomogeneousModel::ECan, trunc()).unwrap();
    let p: QSuperPolynomial = "y1 z1".parse().unwrap();
    let assignment: BTreeMap<_, _> = [(Variable::y(1), el("e1")), (Variable::z(1), el("e2"))].into();
    assert!(p.evaluate(trunc(), &assignment, Some(&g)).is_err());
    let assignment: BTreeMap<_, _> = [(Variable::y(1), el("e1e3")), (Variable::z(1), el("e2"))].into();
    assert_eq!(p.evaluate(trunc(), &assignment, Some(&g)).unwrap(), el("-e1e2e3"));
}
