//! Invariants checked on random inputs.

use fpool::baselines::PoolingKind;
use fpool::compose::{
    signal_feature, toy_classifier_consistency, ConsistencyConfig, FeatureShape, FeatureShift, Layer, Padding,
    Pipeline,
};
use fpool::fpool::FPoolPlan;
use fpool::metrics::{consistency_from_predictions, retention_ablation};
use fpool::seeded_rng;
use fpool::spectral::{circular_shift, dft, energy_above, idft, RealSignal, ShiftSpec};
use proptest::prelude::*;

fn signal(max_len: usize) -> impl Strategy<Value = RealSignal> {
    prop::collection::vec(-10.0f64..10.0, 2..=max_len).prop_map(|v| RealSignal::new(v).unwrap())
}

/// A signal together with a valid pooled length.
fn signal_and_m() -> impl Strategy<Value = (RealSignal, usize)> {
    signal(40).prop_flat_map(|x| {
        let n = x.len();
        (Just(x), 1..=n)
    })
}

fn close(a: &RealSignal, b: &RealSignal, scale: f64) -> bool {
    a.max_abs_diff(b) <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn parseval_and_inverse(x in signal(48)) {
        let spec = dft(&x);
        let n = x.len() as f64;
        prop_assert!((spec.energy() / n - x.energy()).abs() <= 1e-9 * x.energy().max(1.0));
        let back: Vec<f64> = idft(&spec).iter().map(|c| c.re / n).collect();
        prop_assert!(x.max_abs_diff(&RealSignal::new(back).unwrap()) <= 1e-9 * x.norm().max(1.0));
        prop_assert!(spec.conjugate_asymmetry() <= 1e-9 * x.norm().max(1.0));
    }

    #[test]
    fn pooling_is_linear((x, m) in signal_and_m(), a in -3.0f64..3.0, seed in 0u64..1000) {
        let plan = FPoolPlan::new(x.len(), m, true).unwrap();
        let y = fpool::io::signal::SignalSpec::Random(seed).generate(x.len()).unwrap();
        let combo = RealSignal::new(x.iter().zip(y.iter()).map(|(p, q)| a * p + q).collect()).unwrap();
        let lhs = plan.pool1d(&combo).unwrap();
        let (px, py) = (plan.pool1d(&x).unwrap(), plan.pool1d(&y).unwrap());
        let rhs = RealSignal::new(px.iter().zip(py.iter()).map(|(p, q)| a * p + q).collect()).unwrap();
        prop_assert!(close(&lhs, &rhs, combo.norm()));
    }

    #[test]
    fn projection_commutes_with_shifts((x, m) in signal_and_m(), t in -60i64..60, odd in any::<bool>()) {
        prop_assume!(odd || m % 2 == 1);
        let plan = FPoolPlan::new(x.len(), m, odd).unwrap();
        let s = ShiftSpec::new(t);
        let a = circular_shift(&plan.project(&x).unwrap(), s);
        let b = plan.project(&circular_shift(&x, s)).unwrap();
        prop_assert!(close(&a, &b, x.norm()));
    }

    #[test]
    fn projection_is_idempotent((x, m) in signal_and_m()) {
        let plan = FPoolPlan::new(x.len(), m, true).unwrap();
        let once = plan.project(&x).unwrap();
        prop_assert!(close(&plan.project(&once).unwrap(), &once, x.norm()));
    }

    #[test]
    fn pooling_preserves_the_mean((x, m) in signal_and_m(), odd in any::<bool>()) {
        let plan = FPoolPlan::new(x.len(), m, odd).unwrap();
        prop_assert!((plan.pool1d(&x).unwrap().mean() - x.mean()).abs() <= 1e-9 * x.norm().max(1.0));
    }

    #[test]
    fn pooled_output_is_band_limited((x, m) in signal_and_m()) {
        let plan = FPoolPlan::new(x.len(), m, true).unwrap();
        let up = plan.project(&x).unwrap();
        prop_assert!(energy_above(&up, m / 2) <= 1e-18 * x.energy().max(1.0));
    }

    #[test]
    fn stride_multiple_shifts_pass_through(
        k in 1usize..8, factor in 1usize..5, j in -20i64..20, seed in 0u64..1000,
    ) {
        let m = k;
        let n = m * factor;
        let x = fpool::io::signal::SignalSpec::Random(seed).generate(n).unwrap();
        let plan = FPoolPlan::new(n, m, false).unwrap();
        let lhs = plan.pool1d(&circular_shift(&x, ShiftSpec::new(j * factor as i64))).unwrap();
        let rhs = circular_shift(&plan.pool1d(&x).unwrap(), ShiftSpec::new(j));
        prop_assert!(close(&lhs, &rhs, x.norm()));
    }

    #[test]
    fn consistency_is_permutation_invariant(
        classes in prop::collection::vec(0usize..4, 2..12), rotate in 0usize..12,
    ) {
        let mut permuted = classes.clone();
        permuted.reverse();
        let r = rotate % permuted.len();
        permuted.rotate_left(r);
        let a = consistency_from_predictions(&classes).unwrap();
        prop_assert_eq!(a, consistency_from_predictions(&permuted).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(a == 1.0, classes.iter().all(|c| *c == classes[0]));
    }

    #[test]
    fn conv_and_relu_commute_with_circular_shifts(seed in 0u64..500, dy in -8i64..8, dx in -8i64..8) {
        let mut rng = seeded_rng(seed);
        let shape = FeatureShape::grid(2, 8, 6);
        let p = Pipeline::new(
            shape,
            vec![Layer::random_conv(&mut rng, 2, 3, (3, 3), Padding::Circular), Layer::Relu],
        ).unwrap();
        let x = ndarray::Array3::from_shape_fn(shape.dim(), |(c, y, w)| ((c * 31 + y * 7 + w * 3 + seed as usize) % 11) as f64 - 5.0);
        let s = FeatureShift { dy, dx };
        let a = s.apply(&p.apply(&x).unwrap());
        let b = p.apply(&s.apply(&x)).unwrap();
        let diff = a.iter().zip(b.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-9);
    }

    #[test]
    fn retention_error_decreases_with_rate(seed in 0u64..200, n in 8usize..40) {
        let corpus: Vec<RealSignal> = (0..3)
            .map(|i| fpool::io::signal::SignalSpec::Random(seed * 7 + i).generate(n).unwrap())
            .collect();
        let rows = retention_ablation(&[0.125, 0.25, 0.375, 0.5], &corpus).unwrap();
        for w in rows.windows(2) {
            prop_assert!(w[1].error <= w[0].error + 1e-9);
        }
    }
}

#[test]
fn nyquist_zeroing_keeps_the_rest_of_the_signal() {
    let x = fpool::io::signal::SignalSpec::Random(2).generate(16).unwrap();
    let z = fpool::experiments::zero_unmatched_nyquist(&x, 8).unwrap();
    let removed = RealSignal::new(x.iter().zip(z.iter()).map(|(a, b)| a - b).collect()).unwrap();
    // only the +-4 bins are removed: the difference is a single sinusoid
    assert!(energy_above(&removed, 3) >= removed.energy() - 1e-12);
    assert!(energy_above(&removed, 4) <= 1e-20);
    assert!(removed.energy() > 0.0 && removed.energy() < x.energy());
}

#[test]
fn zero_padding_breaks_shift_commutation() {
    let mut rng = seeded_rng(5);
    let shape = FeatureShape::line(1, 16);
    let p = Pipeline::new(shape, vec![Layer::random_conv(&mut rng, 1, 1, (1, 3), Padding::Zero)]).unwrap();
    let x = signal_feature(&fpool::io::signal::SignalSpec::Random(1).generate(16).unwrap());
    let s = FeatureShift::diagonal(3);
    let a = s.apply(&p.apply(&x).unwrap());
    let b = p.apply(&s.apply(&x)).unwrap();
    let diff = a.iter().zip(b.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    assert!(diff > 1e-3, "zero-padded conv unexpectedly commuted: {diff}");
}

#[test]
fn equivalence_error_is_symmetric_in_shift_sign() {
    let x = signal_feature(&fpool::io::signal::SignalSpec::Random(9).generate(24).unwrap());
    let p = Pipeline::new(
        FeatureShape::line(1, 24),
        vec![Layer::Pool(PoolingKind::FPool { factor: 3, odd_padding: true })],
    )
    .unwrap();
    for t in 1..24 {
        let e = |t| fpool::compose::equivalence_error(&p, Default::default(), FeatureShift::diagonal(t), &x).unwrap();
        assert!(e(t) <= 1e-12 && e(-t) <= 1e-12);
    }
}

#[test]
fn zero_padding_classifier_is_not_exactly_invariant() {
    // circular padding is what makes the F-pooling classifier exactly invariant
    let r = toy_classifier_consistency(&ConsistencyConfig {
        padding: Padding::Zero,
        ..ConsistencyConfig::default()
    })
    .unwrap();
    assert!(r.std > 1e-9);
}
