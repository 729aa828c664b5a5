use foliation_core::curvature::{
    curvature_action_on_form, curvature_operator_extremes, curvature_term, sectional, RiemannTensor,
    TransverseCurvature,
};
use foliation_core::exterior::{inner, FiberVector};
use foliation_core::instances::{perturbed_space_form, random_oneill, random_symmetric, random_unit_form, stream};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kulkarni_nomizu_products_are_curvature_tensors(q in 2usize..=6, seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let h = random_symmetric(q, 1.0, &mut rng);
        let k = random_symmetric(q, 1.0, &mut rng);
        let r = RiemannTensor::kulkarni_nomizu(q, &h, &k);
        let scale = r.max_abs().max(1.0);
        prop_assert!(r.symmetry_residual() <= 1e-12 * scale);
        prop_assert!(r.bianchi_residual() <= 1e-12 * scale);
    }

    #[test]
    fn sectional_curvature_lies_between_operator_extremes(q in 2usize..=6, seed in any::<u64>()) {
        let mut rng = stream(seed, 1);
        let r = perturbed_space_form(q, 1.0, 0.3, &mut rng);
        let (lo, hi) = curvature_operator_extremes(&r).unwrap();
        for _ in 0..16 {
            let u = FiberVector::new((0..q).map(|_| rng.random_range(-1.0..1.0)).collect());
            let v = FiberVector::new((0..q).map(|_| rng.random_range(-1.0..1.0)).collect());
            if let Ok(k) = sectional(&r, &u, &v) {
                prop_assert!(lo - 1e-10 <= k && k <= hi + 1e-10, "{lo} ≤ {k} ≤ {hi}");
            }
        }
    }

    #[test]
    fn transverse_curvature_keeps_the_symmetries(q in 2usize..=6, vdim in 1usize..=3, seed in any::<u64>()) {
        let mut rng = stream(seed, 2);
        let rm = perturbed_space_form(q, 1.0, 0.1, &mut rng);
        let a = random_oneill(q, vdim, &mut rng);
        let tc = TransverseCurvature::compute(&rm, &a).unwrap();
        let scale = tc.riemann.max_abs().max(1.0);
        prop_assert!(tc.riemann.symmetry_residual() <= 1e-12 * scale);
        prop_assert!(tc.riemann.bianchi_residual() <= 1e-12 * scale);
        let ric = tc.riemann.ricci();
        prop_assert!(ric.iter().zip(&tc.ricci).all(|(x, y)| (x - y).abs() <= 1e-11 * scale));
        prop_assert!((tc.riemann.scalar() - tc.scalar).abs() <= 1e-10 * scale);
    }

    #[test]
    fn space_forms_act_on_forms_by_a_constant(q in 2usize..=6, p_frac in 0.0f64..1.0, c in -2.0f64..2.0, seed in any::<u64>()) {
        let p = ((q + 1) as f64 * p_frac) as usize;
        let r = RiemannTensor::space_form(q, c);
        let a = random_unit_form(q, p, &mut stream(seed, 3)).unwrap();
        let want = c * (p * (q - p)) as f64;
        let action = curvature_action_on_form(&r, &a).unwrap();
        prop_assert!(action.max_abs_diff(&a.scaled(want)).unwrap() <= 1e-12);
        let term = curvature_term(&r.ricci(), &r, &a).unwrap();
        prop_assert!((term - want).abs() <= 1e-11);
        prop_assert!((inner(&action, &a).unwrap() - term).abs() <= 1e-11);
    }
}
