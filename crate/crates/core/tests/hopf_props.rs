use foliation_core::hopf::{
    bracket_displays, norm_displays, oneill_from_brackets, sample_indexed, transverse_model, AdaptedFrame,
    WeightedHopfModel, DEFAULT_EPS_DEG,
};
use foliation_core::curvature::TransverseCurvature;
use foliation_core::oneill::oneill_norm;
use proptest::prelude::*;

fn model() -> impl Strategy<Value = WeightedHopfModel> {
    (2usize..=6)
        .prop_flat_map(|m| proptest::collection::vec(0.2f64..=1.0, m - 1))
        .prop_map(|rest| {
            let mut theta = vec![1.0];
            theta.extend(rest);
            WeightedHopfModel::new(theta).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adapted_frame_is_orthonormal_and_tangent(model in model(), seed in any::<u64>(), index in 0u64..1000) {
        let z = sample_indexed(&model, seed, index, DEFAULT_EPS_DEG).unwrap();
        let frame = AdaptedFrame::new(&model, &z).unwrap();
        prop_assert_eq!(frame.q(), 2 * model.m() - 2);
        prop_assert!(frame.gram_residual() <= 1e-10);
        prop_assert!(frame.tangency_residual(&z) <= 1e-10);
    }

    #[test]
    fn computed_fields_match_their_displays(model in model(), seed in any::<u64>(), index in 0u64..1000) {
        let z = sample_indexed(&model, seed, index, DEFAULT_EPS_DEG).unwrap();
        for d in norm_displays(&model, &z).unwrap() {
            prop_assert!((d.computed - d.displayed).abs() <= 1e-12, "{d:?}");
        }
        for d in bracket_displays(&model, &z).unwrap() {
            prop_assert!((d.computed - d.displayed).abs() <= 1e-10, "{d:?}");
        }
    }

    #[test]
    fn sandwich_identity_holds_pointwise(model in model(), seed in any::<u64>(), index in 0u64..1000) {
        let z = sample_indexed(&model, seed, index, DEFAULT_EPS_DEG).unwrap();
        let (rm, a) = transverse_model(&model, &z).unwrap();
        let (_, a2) = oneill_from_brackets(&model, &z).unwrap();
        prop_assert!((a2 - oneill_norm(&a)).abs() <= 1e-12 * a2.max(1.0));
        let q = model.q() as f64;
        let scal = TransverseCurvature::compute(&rm, &a).unwrap().scalar;
        prop_assert!((3.0 * a2 - (scal - q * (q - 1.0))).abs() <= 1e-9 * scal.abs().max(1.0));
    }
}
