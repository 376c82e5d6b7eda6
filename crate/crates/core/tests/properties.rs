mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use lgmut_core::analysis::{newton, normal_form_2d};
use lgmut_core::lattice::det;
use lgmut_core::seeds::{wall_cross_point, wall_cross_potential, CATALOG_NAMES};
use lgmut_core::{
    catalog, DirectionVector, EquivalenceGroup, ExponentVector, LaurentPoly, RationalPoint,
    UnimodularMap,
};
use num_rational::BigRational;

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(common::pt_seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

fn poly(n: usize, max_terms: usize, exp: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (prop::collection::vec(-exp..=exp, n), -5i64..=5),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        LaurentPoly::from_terms(
            n,
            terms
                .into_iter()
                .map(|(e, c)| (ExponentVector::new(&e), BigInt::from(c))),
        )
        .unwrap()
    })
}

fn nonzero_poly(n: usize, max_terms: usize, exp: i64) -> impl Strategy<Value = LaurentPoly> {
    poly(n, max_terms, exp).prop_filter("nonzero", |p| !p.is_zero())
}

fn unimodular(n: usize) -> impl Strategy<Value = UnimodularMap> {
    any::<u64>().prop_map(move |s| {
        use rand::SeedableRng;
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(s);
        common::random_unimodular(&mut r, n, 6)
    })
}

fn point(n: usize) -> impl Strategy<Value = RationalPoint> {
    prop::collection::vec(((1i64..=7), any::<bool>(), 1i64..=5), n).prop_map(|c| {
        RationalPoint::new(
            c.into_iter()
                .map(|(a, neg, b)| BigRational::new((if neg { -a } else { a }).into(), b.into()))
                .collect(),
        )
        .unwrap()
    })
}

fn primitive_direction() -> impl Strategy<Value = DirectionVector> {
    ((-3i64..=3), (-3i64..=3))
        .prop_filter_map("primitive", |(a, b)| DirectionVector::new(&[a, b]).ok())
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn exact_division_recovers_the_quotient(a in nonzero_poly(3, 5, 2), b in nonzero_poly(3, 4, 2)) {
        let p = a.try_mul(&b).unwrap();
        prop_assert_eq!(p.try_div_exact(&b).unwrap(), Some(a));
    }

    #[test]
    fn division_matches_the_kronecker_oracle(
        a in nonzero_poly(2, 4, 2),
        b in nonzero_poly(2, 3, 1),
        noise in poly(2, 2, 2),
    ) {
        let p = a.try_mul(&b).unwrap().try_add(&noise).unwrap();
        prop_assert_eq!(p.try_div_exact(&b).unwrap(), common::oracle_div(&p, &b));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly(3, 6, 3), b in poly(3, 6, 3), pt in point(3)) {
        let (ea, eb) = (a.evaluate(&pt).unwrap(), b.evaluate(&pt).unwrap());
        prop_assert_eq!(a.try_mul(&b).unwrap().evaluate(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!(a.try_add(&b).unwrap().evaluate(&pt).unwrap(), &ea + &eb);
    }

    #[test]
    fn substitution_is_functorial(a in poly(3, 6, 3), m in unimodular(3), k in unimodular(3)) {
        let twice = a.monomial_substitute(&m).unwrap().monomial_substitute(&k).unwrap();
        prop_assert_eq!(&twice, &a.monomial_substitute(&m.compose(&k)).unwrap());
        let back = twice.monomial_substitute(&m.compose(&k).inverse()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn substitution_is_multiplicative_and_keeps_coefficients(
        a in poly(2, 6, 3),
        b in poly(2, 6, 3),
        m in unimodular(2),
    ) {
        let sa = a.monomial_substitute(&m).unwrap();
        prop_assert_eq!(sa.coefficient_multiset(), a.coefficient_multiset());
        let lhs = a.try_mul(&b).unwrap().monomial_substitute(&m).unwrap();
        prop_assert_eq!(lhs, sa.try_mul(&b.monomial_substitute(&m).unwrap()).unwrap());
    }

    #[test]
    fn newton_polygon_of_a_product_is_the_minkowski_sum(a in nonzero_poly(2, 5, 3), b in nonzero_poly(2, 5, 3)) {
        let ab = a.try_mul(&b).unwrap();
        let sum = newton(&a).unwrap().minkowski_sum(&newton(&b).unwrap()).unwrap();
        prop_assert_eq!(newton(&ab).unwrap(), sum);
    }

    #[test]
    fn wall_crossing_commutes_with_evaluation(
        w in poly(2, 6, 2),
        v in primitive_direction(),
        pt in point(2),
    ) {
        let Some(image) = wall_cross_point(&pt, &v).unwrap() else {
            return Ok(());
        };
        let expected = w.evaluate(&image).unwrap();
        let got = wall_cross_potential(&w, &v).unwrap();
        match got.as_laurent() {
            Some(l) => prop_assert_eq!(l.evaluate(&pt).unwrap(), expected),
            None => {
                if let lgmut_core::Mutated::NonLaurent(nl) = &got {
                    if let Some(value) = nl.evaluate(&pt).unwrap() {
                        prop_assert_eq!(value, expected);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn canonical_form_is_invariant(idx in 0..CATALOG_NAMES.len(), m in unimodular(2)) {
        let seed = catalog(CATALOG_NAMES[idx]).unwrap();
        let moved = seed.act(&m).unwrap();
        let general = EquivalenceGroup::General;
        prop_assert_eq!(
            moved.canonical_form(general).unwrap().into_seed(),
            seed.canonical_form(general).unwrap().into_seed()
        );
        if m.det() == 1 {
            let special = EquivalenceGroup::Special;
            prop_assert_eq!(
                moved.canonical_form(special).unwrap().into_seed(),
                seed.canonical_form(special).unwrap().into_seed()
            );
        }
    }

    #[test]
    fn canonical_map_reproduces_the_form(idx in 0..CATALOG_NAMES.len(), m in unimodular(2)) {
        let seed = catalog(CATALOG_NAMES[idx]).unwrap().act(&m).unwrap();
        let cf = seed.canonical_form(EquivalenceGroup::General).unwrap();
        prop_assert_eq!(&seed.act(cf.map()).unwrap().sorted(), cf.seed());
    }

    #[test]
    fn normal_form_is_invariant(w in nonzero_poly(2, 6, 3), m in unimodular(2)) {
        let Ok(nf) = normal_form_2d(&newton(&w).unwrap()) else {
            return Ok(());
        };
        let moved = normal_form_2d(&newton(&w.monomial_substitute(&m).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(moved.vertices, nf.vertices);
    }

    #[test]
    fn seed_mutation_is_an_involution(idx in 0..CATALOG_NAMES.len(), pick in any::<prop::sample::Index>()) {
        let seed = catalog(CATALOG_NAMES[idx]).unwrap();
        let j = pick.index(seed.directions().len());
        let once = seed.mutate(j).unwrap().seed().unwrap();
        let twice = once.mutate(j).unwrap().seed().unwrap();
        let special = EquivalenceGroup::Special;
        prop_assert_eq!(
            twice.canonical_form(special).unwrap().into_seed(),
            seed.canonical_form(special).unwrap().into_seed()
        );
    }
}

#[test]
fn random_unimodular_maps_have_unit_determinant() {
    let mut r = common::rng(99);
    for _ in 0..50 {
        let m = common::random_unimodular(&mut r, 4, 10);
        assert_eq!(det(m.rows()).magnitude(), &num_bigint::BigUint::from(1u32));
    }
}
