use foliation_core::exterior::{hodge, inner, interior_multi, interior_vector, wedge, AlternatingForm, FiberVector};
use foliation_core::instances::{random_unit_form, stream};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-12;

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn vector(q: usize, rng: &mut impl Rng) -> FiberVector {
    FiberVector::new((0..q).map(|_| rng.random_range(-1.0..1.0)).collect())
}

/// `(q, p, r, seed)` with `p + r ≤ q`.
fn shape() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=6)
        .prop_flat_map(|q| (Just(q), 0..=q))
        .prop_flat_map(|(q, p)| (Just(q), Just(p), 0..=q - p, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wedge_is_graded_commutative((q, p, r, seed) in shape()) {
        let mut rng = stream(seed, 0);
        let a = random_unit_form(q, p, &mut rng).unwrap();
        let b = random_unit_form(q, r, &mut rng).unwrap();
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap().scaled(sign(p * r));
        prop_assert!(ab.max_abs_diff(&ba).unwrap() <= TOL);
    }

    #[test]
    fn wedge_of_a_vector_with_itself_vanishes((q, _p, _r, seed) in shape()) {
        prop_assume!(q >= 2);
        let x = vector(q, &mut stream(seed, 1)).flat();
        prop_assert!(wedge(&x, &x).unwrap().norm_sq() <= TOL);
    }

    #[test]
    fn contraction_is_a_graded_derivation((q, p, r, seed) in shape()) {
        prop_assume!(p >= 1 && r >= 1);
        let mut rng = stream(seed, 2);
        let a = random_unit_form(q, p, &mut rng).unwrap();
        let b = random_unit_form(q, r, &mut rng).unwrap();
        let x = vector(q, &mut rng);
        let left = interior_vector(&x, &wedge(&a, &b).unwrap()).unwrap();
        let mut right = wedge(&interior_vector(&x, &a).unwrap(), &b).unwrap();
        right.add_scaled(&wedge(&a, &interior_vector(&x, &b).unwrap()).unwrap(), sign(p)).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= TOL);
    }

    #[test]
    fn contraction_is_adjoint_to_wedge((q, p, _r, seed) in shape()) {
        prop_assume!(p >= 1);
        let mut rng = stream(seed, 3);
        let a = random_unit_form(q, p, &mut rng).unwrap();
        let b = random_unit_form(q, p - 1, &mut rng).unwrap();
        let x = vector(q, &mut rng);
        let left = inner(&interior_vector(&x, &a).unwrap(), &b).unwrap();
        let right = inner(&a, &wedge(&x.flat(), &b).unwrap()).unwrap();
        prop_assert!((left - right).abs() <= TOL);
    }

    #[test]
    fn hodge_is_an_involution_up_to_sign_and_an_isometry((q, p, _r, seed) in shape()) {
        let a = random_unit_form(q, p, &mut stream(seed, 4)).unwrap();
        let star = hodge(&a);
        prop_assert_eq!(star.degree(), q - p);
        prop_assert!((star.norm_sq() - a.norm_sq()).abs() <= TOL);
        prop_assert!(hodge(&star).max_abs_diff(&a.scaled(sign(p * (q - p)))).unwrap() <= TOL);
        let vol = wedge(&a, &star).unwrap();
        prop_assert!(vol.max_abs_diff(&AlternatingForm::volume(q).scaled(a.norm_sq())).unwrap() <= TOL);
    }

    #[test]
    fn contraction_of_hodge_is_hodge_of_wedge((q, p, _r, seed) in shape()) {
        prop_assume!(p < q);
        let mut rng = stream(seed, 5);
        let a = random_unit_form(q, p, &mut rng).unwrap();
        let x = vector(q, &mut rng);
        let left = interior_vector(&x, &hodge(&a)).unwrap();
        let right = hodge(&wedge(&x.flat(), &a).unwrap()).scaled(sign(p));
        prop_assert!(left.max_abs_diff(&right).unwrap() <= TOL);
    }

    #[test]
    fn multi_contraction_matches_iterated((q, p, _r, seed) in shape()) {
        let mut rng = stream(seed, 6);
        let a = random_unit_form(q, p, &mut rng).unwrap();
        let (u, v) = (vector(q, &mut rng), vector(q, &mut rng));
        let multi = interior_multi(&[u.clone(), v.clone()], &a).unwrap();
        if p < 2 {
            prop_assert!(multi.vacuous);
            prop_assert_eq!(multi.norm_sq(), 0.0);
        } else {
            let iterated = interior_vector(&u, &interior_vector(&v, &a).unwrap()).unwrap();
            prop_assert!(multi.form.max_abs_diff(&iterated).unwrap() <= TOL);
            let swapped = interior_multi(&[v, u], &a).unwrap();
            prop_assert!(multi.form.max_abs_diff(&swapped.form.scaled(-1.0)).unwrap() <= TOL);
        }
    }

    #[test]
    fn contraction_sum_counts_degree((q, p, _r, seed) in shape()) {
        prop_assume!(p >= 1);
        let a = random_unit_form(q, p, &mut stream(seed, 7)).unwrap();
        let total: f64 = (0..q)
            .map(|i| interior_vector(&FiberVector::basis(q, i), &a).unwrap().norm_sq())
            .sum();
        prop_assert!((total - p as f64 * a.norm_sq()).abs() <= TOL);
    }
}
