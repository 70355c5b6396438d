use std::f64::consts::PI;

use hfsynth::dataset::io::{ManifestRow, PlanFields};
use hfsynth::dataset::{recipe_table, sample_impairment_plan, segment_recording, synthesize_example};
use hfsynth::impairments::{apply_frequency_offset, apply_phase_offset, synthesize_noise, NoiseKind};
use hfsynth::metrology::{estimate_tone_frequency, mean_power};
use hfsynth::waveforms::{generate_waveform, WaveformRequest};
use hfsynth::{Complex64, RngStream, SignalClass, FRAME_LEN, SAMPLE_RATE_HZ};
use proptest::prelude::*;

fn samples(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn tone(f: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::from_polar(1.0, 2.0 * PI * f * i as f64 / SAMPLE_RATE_HZ))
        .collect()
}

fn class() -> impl Strategy<Value = SignalClass> {
    (0..SignalClass::COUNT).prop_map(|i| SignalClass::from_index(i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn frequency_offsets_compose(x in samples(FRAME_LEN), a in -250.0..250.0f64, b in -250.0..250.0f64) {
        let twice = apply_frequency_offset(&apply_frequency_offset(&x, a), b);
        let once = apply_frequency_offset(&x, a + b);
        for (p, q) in twice.iter().zip(&once) {
            prop_assert!((p - q).norm() < 1e-9 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn offsets_preserve_power(x in samples(512), phi in 0.0..2.0 * PI, df in -250.0..250.0f64) {
        let p0 = mean_power(&x).unwrap();
        let p1 = mean_power(&apply_phase_offset(&x, phi)).unwrap();
        let p2 = mean_power(&apply_frequency_offset(&x, df)).unwrap();
        prop_assert!((p1 / p0 - 1.0).abs() < 1e-12);
        prop_assert!((p2 / p0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tone_estimate_is_shift_equivariant(f0 in -2000.0..2000.0f64, df in -250.0..250.0f64) {
        let x = tone(f0, FRAME_LEN);
        let base = estimate_tone_frequency(&x).unwrap();
        let moved = estimate_tone_frequency(&apply_frequency_offset(&x, df)).unwrap();
        let res = SAMPLE_RATE_HZ / FRAME_LEN as f64;
        prop_assert!((moved - base - df).abs() <= res, "{} {} {}", base, moved, df);
    }

    #[test]
    fn waveforms_are_deterministic(c in class(), seed in any::<u64>()) {
        let a = generate_waveform(WaveformRequest::new(c.spec(), FRAME_LEN, RngStream::new(seed))).unwrap();
        let b = generate_waveform(WaveformRequest::new(c.spec(), FRAME_LEN, RngStream::new(seed))).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn noise_is_deterministic(seed in any::<u64>(), k in 0usize..4) {
        let kind = [
            NoiseKind::Awgn,
            NoiseKind::Impulsive { exponent: 1.5 },
            NoiseKind::Impulsive { exponent: 2.0 },
            NoiseKind::Impulsive { exponent: 3.0 },
        ][k];
        let a = synthesize_noise(kind, 256, &mut RngStream::new(seed)).unwrap();
        let b = synthesize_noise(kind, 256, &mut RngStream::new(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn plans_respect_recipe_bounds(r in 0usize..11, c in class(), seed in any::<u64>()) {
        let recipe = &recipe_table()[r];
        let plan = sample_impairment_plan(recipe, c, &RngStream::new(seed));
        prop_assert!(plan.check(recipe, c).is_ok(), "{:?}", plan);
    }

    #[test]
    fn manifest_rows_round_trip(r in 0usize..11, c in class(), seed in any::<u64>(), index in 0u64..1_000_000) {
        let recipe = &recipe_table()[r];
        let plan = sample_impairment_plan(recipe, c, &RngStream::new(seed));
        let row = ManifestRow {
            index,
            class: c.name().to_string(),
            label: Some(c.index()),
            plan: Some(PlanFields::from_plan(&plan)),
            source_offset: None,
        };
        let json = serde_json::to_string(&row).unwrap();
        let back: ManifestRow = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &row);
        prop_assert_eq!(back.plan.as_ref().unwrap().to_plan().unwrap(), plan);
        prop_assert_eq!(back.signal_class().unwrap(), Some(c));
    }

    #[test]
    fn segments_bit_match_the_recording(extra in 0usize..5000, hop in 1usize..3000, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let x: Vec<Complex64> = (0..FRAME_LEN + extra)
            .map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
            .collect();
        let frames = segment_recording(&x, hop).unwrap();
        prop_assert_eq!(frames.len(), extra / hop + 1);
        for (k, f) in frames.iter().enumerate() {
            prop_assert_eq!(f.samples(), &x[k * hop..k * hop + FRAME_LEN]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn examples_are_finite_frames(r in 0usize..11, c in class(), seed in any::<u64>()) {
        let recipe = &recipe_table()[r];
        let plan = sample_impairment_plan(recipe, c, &RngStream::new(seed));
        let rec = synthesize_example(c, &plan, 0).unwrap();
        prop_assert_eq!(rec.frame.len(), FRAME_LEN);
        prop_assert!(rec.frame.samples().iter().all(|s| s.re.is_finite() && s.im.is_finite()));
        let again = synthesize_example(c, &plan, 0).unwrap();
        prop_assert_eq!(rec.frame.to_le_bytes(), again.frame.to_le_bytes());
    }
}
