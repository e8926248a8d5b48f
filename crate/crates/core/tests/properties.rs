//! Property tests for the algebraic and geometric invariants.

use bundle_glue::glue::{
    bundle_from_matrix, cech_h1, formal_from_matrix, global_sections, random_chart_change,
    random_laurent_transition, splitting_type, transition_of_triple, TransitionDatum,
};
use bundle_glue::laurent::{classify_series_unit, invert_in_b, BFraction, LaurentPoly, UnitClass};
use bundle_glue::matfact::{
    cartan_type, coset_equal, factorize_gdelta, membership_gl_power_series, random_b_matrix,
    random_product, CosetRelation, Membership,
};
use bundle_glue::matrix::{FractionMatrix, MatLaurent, PolyMatrix};
use bundle_glue::ring::Ring;
use bundle_glue::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rings() -> Vec<Ring> {
    vec![
        Ring::rationals(),
        Ring::prime_field(5).unwrap(),
        Ring::integers_mod(8).unwrap(),
        Ring::dual(Ring::prime_field(2).unwrap(), 2).unwrap(),
    ]
}

fn field() -> Ring {
    Ring::prime_field(7).unwrap()
}

fn random_poly(ring: &Ring, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> LaurentPoly {
    LaurentPoly::from_coeffs(ring, lo, (lo..=hi).map(|_| ring.random(rng)).collect())
}

fn admissible(ring: &Ring, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let deg = rng.gen_range(0..=2);
    LaurentPoly::constant(ring, ring.random_unit(rng)).add(&random_poly(ring, rng, 1, deg.max(1)))
}

fn to_poly(m: &FractionMatrix) -> PolyMatrix {
    m.map(|e| e.as_poly().expect("polynomial entry").clone())
}

fn td(g: FractionMatrix) -> TransitionDatum {
    TransitionDatum::new(g).expect("invertible transition")
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn unit_iff_series_witness(seed in any::<u64>(), which in 0usize..4) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut num = random_poly(ring, &mut rng, -3, 3);
        // make nilpotent-only numerators common enough to exercise both sides
        if rng.gen_bool(0.3) {
            num = LaurentPoly::from_coeffs(ring, -2, (0..4).map(|_| ring.random_nilpotent(&mut rng)).collect());
        }
        let f = BFraction::new(num, admissible(ring, &mut rng)).unwrap();
        let inverted = invert_in_b(&f);
        let witnessed = matches!(classify_series_unit(&f.expand(40)).unwrap(), UnitClass::Unit(_));
        prop_assert_eq!(inverted.is_ok(), witnessed);
        if let Ok(inv) = inverted {
            let one = f.mul(&inv);
            prop_assert_eq!(one.num(), one.den());
        }
    }

    #[test]
    fn nilpotent_polynomials_vanish_at_nilradical_exponent(seed in any::<u64>(), which in 0usize..4) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = LaurentPoly::from_coeffs(ring, -3, (0..6).map(|_| ring.random_nilpotent(&mut rng)).collect());
        prop_assert!(n.pow(ring.nilradical_exponent()).is_zero());
    }

    #[test]
    fn factorization_roundtrip(seed in any::<u64>(), which in 1usize..4, n in 1usize..=3) {
        let ring = &rings()[which];
        let (gamma, _, _) = random_product(ring, n, &mut ChaCha8Rng::seed_from_u64(seed), 24);
        let f = factorize_gdelta(&gamma, 24).unwrap();
        prop_assert!(f.product().agrees_below(&gamma, f.prec.min(24)));
        prop_assert!(matches!(membership_gl_power_series(&f.delta), Membership::Yes { .. }), "δ not certified");
        prop_assert!(invert_in_b(&f.g.det()).is_ok());
    }

    #[test]
    fn phi_roundtrips(seed in any::<u64>(), which in 1usize..4, n in 1usize..=3) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_b_matrix(ring, n, &mut rng);
        let back = transition_of_triple(&bundle_from_matrix(&g).unwrap());
        prop_assert_eq!(back.matrix(), &g);

        let (gamma, _, _) = random_product(ring, n, &mut rng, 20);
        let t = formal_from_matrix(&gamma, 20).unwrap();
        let delta = t.formal_delta().unwrap();
        let g = transition_of_triple(&t).matrix().to_series(28);
        prop_assert!(g.mul(delta).agrees_below(&gamma, delta.prec().unwrap_or(20).min(20)));
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn cartan_invariance_and_degree(seed in any::<u64>(), n in 1usize..=3) {
        let k = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..n * n).map(|_| random_poly(&k, &mut rng, -2, 2)).collect();
        let m = PolyMatrix::new(&k, n, entries).unwrap();
        let det = m.det();
        prop_assume!(!det.is_zero());
        let ct = cartan_type(&m).unwrap();
        prop_assert_eq!(ct.0.iter().sum::<i64>(), det.min_degree().unwrap());
        let a = to_poly(&random_chart_change(&k, n, &mut rng, true));
        let b = to_poly(&random_chart_change(&k, n, &mut rng, true));
        prop_assert_eq!(cartan_type(&a.mul(&m).mul(&b)).unwrap(), ct);
    }

    #[test]
    fn coset_is_an_equivalence(seed in any::<u64>(), which in 1usize..4, n in 1usize..=3) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_b_matrix(ring, n, &mut rng);
        let u1 = random_chart_change(ring, n, &mut rng, true);
        let u2 = random_chart_change(ring, n, &mut rng, true);
        let z = BFraction::from_poly(LaurentPoly::monomial(ring, 1, ring.one()));
        let other = random_b_matrix(ring, n, &mut rng);
        let mats: Vec<MatLaurent> = [g.clone(), g.mul(&u1), g.mul(&u1).mul(&u2), g.scale(&z), other]
            .into_iter()
            .map(MatLaurent::Fraction)
            .collect();
        let rel = |i: usize, j: usize| coset_equal(&mats[i], &mats[j], 0).unwrap() == CosetRelation::Equal;
        for i in 0..mats.len() {
            prop_assert!(rel(i, i));
            for j in 0..mats.len() {
                prop_assert_eq!(rel(i, j), rel(j, i));
                for k in 0..mats.len() {
                    if rel(i, j) && rel(j, k) {
                        prop_assert!(rel(i, k));
                    }
                }
            }
        }
        prop_assert!(rel(0, 1) && rel(0, 2));
        prop_assert!(!rel(0, 3));
    }

    #[test]
    fn cohomology_laws(seed in any::<u64>(), n in 1usize..=3, m in -3i64..=3) {
        let k = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = td(random_laurent_transition(&k, n, &mut rng));
        let deg = -t.matrix().det().valuation().unwrap();
        let h0 = global_sections(&t, m).unwrap();
        prop_assert!(h0.satisfies(&t));
        let h1 = cech_h1(&t, m).unwrap();
        prop_assert_eq!(h0.dimension as i64 - h1 as i64, deg + n as i64 * m + n as i64);
        prop_assert_eq!(splitting_type(&t).unwrap().degree(), deg);
    }

    #[test]
    fn splitting_laws(seed in any::<u64>(), n in 1usize..=3, n2 in 1usize..=2) {
        let k = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_laurent_transition(&k, n, &mut rng);
        let st = splitting_type(&td(g.clone())).unwrap();
        let a = random_chart_change(&k, n, &mut rng, false);
        let b = random_chart_change(&k, n, &mut rng, true);
        prop_assert_eq!(&splitting_type(&td(a.mul(&g).mul(&b))).unwrap(), &st);

        let g2 = random_laurent_transition(&k, n2, &mut rng);
        let st2 = splitting_type(&td(g2.clone())).unwrap();
        let mut merged = [st.0.clone(), st2.0].concat();
        merged.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(splitting_type(&td(g.block_diag(&g2))).unwrap().0, merged);
    }
}

#[test]
fn cohomology_rejects_non_field_rings() {
    let r = Ring::dual(Ring::prime_field(2).unwrap(), 2).unwrap();
    let g = random_b_matrix(&r, 2, &mut ChaCha8Rng::seed_from_u64(1));
    let t = td(g);
    assert!(matches!(splitting_type(&t), Err(Error::UnsupportedRing(_))));
    assert!(matches!(
        global_sections(&t, 0),
        Err(Error::UnsupportedRing(_))
    ));
}
