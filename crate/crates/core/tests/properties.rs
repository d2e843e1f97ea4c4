use std::sync::OnceLock;

use ghost_algebra::enumeration::{all_diagrams, cut, glue};
use ghost_algebra::json::{diagram_from_json, diagram_to_json, element_from_json, element_to_json};
use ghost_algebra::{Diagram, Element, Monomial, ParamBinding, ParamId, ParamMode, Poly, Variant};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

type Pools = Vec<((usize, Variant), Vec<Diagram>)>;

fn pool(n: usize, v: Variant) -> &'static [Diagram] {
    static POOLS: OnceLock<Pools> = OnceLock::new();
    let pools = POOLS.get_or_init(|| {
        let mut out = vec![];
        for n in 1..=3 {
            for v in Variant::ALL {
                out.push(((n, v), all_diagrams(n, v)));
            }
        }
        out
    });
    &pools.iter().find(|(k, _)| *k == (n, v)).unwrap().1
}

fn param() -> impl Strategy<Value = ParamId> {
    prop::sample::select(ParamId::ALL.to_vec())
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(param(), 0..4).prop_map(|ps| {
        let mut m = Monomial::one();
        for p in ps {
            m.bump(p);
        }
        m
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..6).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(), rational()), 0..5).prop_map(|ts| {
        let mut p = Poly::zero();
        for (m, c) in ts {
            p.add_assign_ref(&Poly::term(m, c));
        }
        p
    })
}

fn variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(Variant::ALL.to_vec())
}

fn element(n: usize, v: Variant) -> impl Strategy<Value = Element<Poly>> {
    let len = pool(n, v).len();
    prop::collection::vec((0..len, -3i64..4), 1..4).prop_map(move |ts| {
        let mut e = Element::zero(n, v);
        for (i, c) in ts {
            e.add_term(pool(n, v)[i].clone(), Poly::constant(c));
        }
        e
    })
}

fn triple() -> impl Strategy<Value = (Element<Poly>, Element<Poly>, Element<Poly>)> {
    (1usize..=2, variant()).prop_flat_map(|(n, v)| (element(n, v), element(n, v), element(n, v)))
}

fn mode() -> impl Strategy<Value = ParamMode> {
    prop::sample::select(vec![ParamMode::Standard, ParamMode::Generalised])
}

fn binding() -> impl Strategy<Value = ParamBinding> {
    prop::collection::vec((0.2f64..1.5, -0.5f64..0.5), ParamId::ALL.len()).prop_map(|vals| {
        let mut b = ParamBinding::new();
        for (p, (re, im)) in ParamId::ALL.iter().zip(vals) {
            b.set(*p, Complex64::new(re, im));
        }
        b
    })
}

proptest! {
    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn poly_evaluation_is_a_ring_map(a in poly(), b in poly(), env in binding()) {
        let (x, y) = (a.evaluate(&env).unwrap(), b.evaluate(&env).unwrap());
        let scale = 1.0 + x.norm() * y.norm() + x.norm() + y.norm();
        prop_assert!(((&a * &b).evaluate(&env).unwrap() - x * y).norm() < 1e-9 * scale);
        prop_assert!(((&a + &b).evaluate(&env).unwrap() - (x + y)).norm() < 1e-9 * scale);
    }

    #[test]
    fn poly_json_round_trip(a in poly()) {
        prop_assert_eq!(Poly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn products_are_associative((x, y, z) in triple(), m in mode()) {
        let l = x.mul(&y, m, &()).unwrap().mul(&z, m, &()).unwrap();
        let r = x.mul(&y.mul(&z, m, &()).unwrap(), m, &()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn products_distribute((x, y, z) in triple(), m in mode()) {
        let l = x.mul(&y.add(&z).unwrap(), m, &()).unwrap();
        let r = x.mul(&y, m, &()).unwrap().add(&x.mul(&z, m, &()).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn reflection_reverses_products((x, y, _) in triple()) {
        let m = ParamMode::Standard;
        prop_assert_eq!(x.mul(&y, m, &()).unwrap().reflect(), y.reflect().mul(&x.reflect(), m, &()).unwrap());
    }

    #[test]
    fn numeric_products_match_exact_ones((x, y, _) in triple(), env in binding(), m in mode()) {
        let exact = x.mul(&y, m, &()).unwrap().evaluate(&env).unwrap();
        let (xn, yn) = (x.evaluate(&env).unwrap(), y.evaluate(&env).unwrap());
        let numeric = xn.mul(&yn, m, &env).unwrap();
        prop_assert!(exact.relative_residual(&numeric) < 1e-12);
    }

    #[test]
    fn cut_then_glue_is_identity(n in 1usize..=3, v in variant(), k in any::<prop::sample::Index>()) {
        let d = k.get(pool(n, v));
        let (a, b) = cut(d);
        prop_assert_eq!(&glue(&a, &b).unwrap(), d);
    }

    #[test]
    fn diagram_json_round_trip(n in 1usize..=3, v in variant(), k in any::<prop::sample::Index>()) {
        let d = k.get(pool(n, v));
        prop_assert_eq!(&diagram_from_json(&diagram_to_json(d)).unwrap(), d);
    }

    #[test]
    fn element_json_round_trip((x, _, _) in triple()) {
        prop_assert_eq!(element_from_json::<Poly>(&element_to_json(&x)).unwrap(), x);
    }
}
