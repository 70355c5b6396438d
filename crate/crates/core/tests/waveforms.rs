use hfsynth::metrology::{
    band_energy_fraction, count_spectral_peaks, estimate_fsk_shift, estimate_symbol_rate,
    mean_power, occupied_bandwidth, symbol_tone_frequencies, tone_clusters, welch_psd,
};
use hfsynth::waveforms::{generate_waveform, nominal_bandwidth, WaveformRequest};
use hfsynth::{Complex64, ModulationFamily, RngStream, SignalClass, SAMPLE_RATE_HZ};

const TEN_SECONDS: usize = 60_000;

fn gen(class: SignalClass, n: usize, seed: u64) -> Vec<Complex64> {
    generate_waveform(WaveformRequest::new(class.spec(), n, RngStream::new(seed))).unwrap()
}

#[test]
fn energy_is_contained_in_the_nominal_band() {
    for class in SignalClass::ALL {
        let spec = class.spec();
        let x = gen(class, TEN_SECONDS, 1);
        let frac = band_energy_fraction(&x, spec.center_hz(), nominal_bandwidth(&spec), 4096).unwrap();
        assert!(frac >= 0.99, "{class}: {frac}");
    }
}

#[test]
fn unit_power_for_every_class_and_length() {
    for class in SignalClass::ALL {
        for (seed, n) in [(0, 2048), (1, 2560), (2, 10_000)] {
            let p = mean_power(&gen(class, n, seed)).unwrap();
            assert!((0.99..=1.01).contains(&p), "{class}: {p}");
        }
    }
}

#[test]
fn fsk_and_mfsk_baud_is_observable() {
    for class in SignalClass::ALL {
        let spec = class.spec();
        if !matches!(spec.family, ModulationFamily::Fsk | ModulationFamily::Mfsk) {
            continue;
        }
        let x = gen(class, TEN_SECONDS, 2);
        let baud = estimate_symbol_rate(&x).unwrap();
        let err = (baud / spec.baud_rate - 1.0).abs();
        assert!(err < 0.02, "{class}: {baud} vs {}", spec.baud_rate);
    }
}

#[test]
fn mfsk_tone_counts_are_exact() {
    for class in SignalClass::ALL {
        let spec = class.spec();
        if spec.family != ModulationFamily::Mfsk {
            continue;
        }
        let x = gen(class, 6 * TEN_SECONDS, 3);
        let spacing = spec.tone_spacing_hz().unwrap();
        let freqs = symbol_tone_frequencies(&x, spec.baud_rate).unwrap();
        let clusters = tone_clusters(&freqs, 0.5 * spacing, 0.2 / spec.tone_count as f64);
        assert_eq!(clusters.len(), spec.tone_count as usize, "{class}: {clusters:?}");
        for pair in clusters.windows(2) {
            let gap = pair[1].0 - pair[0].0;
            assert!((gap / spacing - 1.0).abs() < 0.05, "{class}: gap {gap}");
        }
    }
}

#[test]
fn fsk_shifts_match() {
    for class in [
        SignalClass::Rtty45_170,
        SignalClass::Rtty50_450,
        SignalClass::Rtty75_170,
        SignalClass::Navtex,
    ] {
        let spec = class.spec();
        let shift = estimate_fsk_shift(&gen(class, TEN_SECONDS, 4)).unwrap();
        let err = (shift / spec.shift_or_bandwidth_hz - 1.0).abs();
        assert!(err < 0.05, "{class}: {shift}");
    }
}

#[test]
fn olivia_8_250_occupies_its_bandwidth() {
    let x = gen(SignalClass::Olivia8_250, TEN_SECONDS, 5);
    let bw = occupied_bandwidth(&x, 0.99).unwrap();
    assert!((bw / 250.0 - 1.0).abs() < 0.15, "{bw}");
}

// Cosine-shaped reversals put 99% of the power within twice the baud rate;
// the figure scales with the baud.
#[test]
fn psk_occupied_bandwidth_scales_with_baud() {
    let bw31 = occupied_bandwidth(&gen(SignalClass::Psk31, TEN_SECONDS, 6), 0.99).unwrap();
    let bw63 = occupied_bandwidth(&gen(SignalClass::Psk63, TEN_SECONDS, 6), 0.99).unwrap();
    assert!((31.25..=62.5).contains(&bw31), "{bw31}");
    assert!((bw63 / bw31 - 2.0).abs() < 0.3, "{bw31} {bw63}");
}

#[test]
fn mt63_has_64_carriers_at_5_baud() {
    let spec = SignalClass::Mt63_500.spec();
    assert_eq!((spec.tone_count, spec.baud_rate), (64, 5.0));
    let x = gen(SignalClass::Mt63_500, 4 * TEN_SECONDS, 7);
    let est = welch_psd(&x, 8192, SAMPLE_RATE_HZ).unwrap();
    let peaks = count_spectral_peaks(&est, 15.0, 0.6 * spec.tone_spacing_hz().unwrap());
    assert_eq!(peaks, 64);
    let frac = band_energy_fraction(&x, 0.0, 500.0, 8192).unwrap();
    assert!(frac > 0.99, "{frac}");
}
