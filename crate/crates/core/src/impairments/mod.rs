//! Non-fading impairments: phase and frequency offsets, sample-rate offset,
//! additive noise with a full-band SNR, and the receiver bandpass.

mod filter;
mod noise;
mod offsets;
mod resample;

pub use filter::{apply_rx_filter, RxFilterSpec, RX_FILTER_ATTEN_DB, RX_FILTER_TRANSITION_HZ};
pub use noise::{
    add_noise, add_noise_with_power, synthesize_noise, NoiseKind, NoiseSpec, IMPULSE_EXPONENTS,
};
pub use offsets::{apply_frequency_offset, apply_phase_offset};
pub use resample::{
    apply_sample_rate_offset, resample, source_len_for, RESAMPLE_CUTOFF_HZ, RESAMPLE_HALF,
};

/// The five sample-rate offsets a plan can draw from.
pub const FS_OFFSETS: [f64; 5] = [-0.01, -0.005, 0.0, 0.005, 0.01];
/// Largest tuning offset a plan can draw, in Hz.
pub const MAX_FREQ_OFFSET_HZ: f64 = 250.0;

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::dsp::{fft_forward, bin_frequency};
    use crate::metrology::{estimate_tone_frequency, mean_power};
    use crate::rng::RngStream;
    use crate::signal::{FRAME_LEN, SAMPLE_RATE_HZ};

    const BIN_HZ: f64 = SAMPLE_RATE_HZ / FRAME_LEN as f64;

    fn tone(f: f64, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * f * i as f64 / SAMPLE_RATE_HZ))
            .collect()
    }

    fn noise(n: usize, seed: u64) -> Vec<Complex64> {
        synthesize_noise(NoiseKind::Awgn, n, &mut RngStream::new(seed)).unwrap()
    }

    #[test]
    fn zero_phase_is_identity_and_pi_negates() {
        let x = noise(FRAME_LEN, 1);
        assert_eq!(apply_phase_offset(&x, 0.0), x);
        for (a, b) in apply_phase_offset(&x, PI).iter().zip(&x) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_offset_preserves_power() {
        let x = noise(FRAME_LEN, 2);
        let y = apply_phase_offset(&x, 1.234);
        let (px, py) = (mean_power(&x).unwrap(), mean_power(&y).unwrap());
        assert!(((px - py) / px).abs() < 1e-14);
    }

    #[test]
    fn frequency_offset_moves_tone() {
        let x = tone(500.0, FRAME_LEN);
        assert_eq!(apply_frequency_offset(&x, 0.0), x);
        let f = estimate_tone_frequency(&apply_frequency_offset(&x, 100.0)).unwrap();
        assert!((f - 600.0).abs() <= BIN_HZ, "{f}");
    }

    #[test]
    fn sample_rate_offset_scales_tone() {
        let n = source_len_for(0.01, FRAME_LEN);
        let x = tone(1000.0, n);
        let y = apply_sample_rate_offset(&x, 0.01).unwrap();
        let f = estimate_tone_frequency(y.samples()).unwrap();
        assert!((f - 1000.0 / 1.01).abs() <= BIN_HZ, "{f}");
    }

    #[test]
    fn zero_sample_rate_offset_is_a_crop() {
        let x = noise(3000, 3);
        let y = apply_sample_rate_offset(&x, 0.0).unwrap();
        assert_eq!(y.samples(), &x[RESAMPLE_HALF..RESAMPLE_HALF + FRAME_LEN]);
    }

    #[test]
    fn sample_rate_offset_rejects_short_input() {
        let x = noise(FRAME_LEN, 4);
        assert!(apply_sample_rate_offset(&x, 0.01).is_err());
        assert!(apply_sample_rate_offset(&x, 0.0).is_err());
    }

    #[test]
    fn resampler_images_are_rejected() {
        // A tone well inside the band should come out clean: everything
        // except the main lobe at least 60 dB down.
        let n = source_len_for(-0.01, 8192);
        let x = tone(1234.5, n);
        let mut y = resample(&x, -0.01, RESAMPLE_HALF, 8192).unwrap();
        let w = crate::dsp::hann(8192);
        for (s, w) in y.iter_mut().zip(w) {
            *s *= w;
        }
        fft_forward(&mut y);
        let expect = 1234.5 / 0.99;
        let peak = y.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        for (k, v) in y.iter().enumerate() {
            let f = bin_frequency(k, 8192, SAMPLE_RATE_HZ);
            if (f - expect).abs() > 20.0 {
                assert!(10.0 * (v.norm_sqr() / peak).log10() < -60.0, "spur at {f} Hz");
            }
        }
    }

    #[test]
    fn resample_round_trip_restores_tone() {
        for delta in FS_OFFSETS {
            let x = tone(777.0, 4 * FRAME_LEN);
            let y = resample(&x, delta, RESAMPLE_HALF, 3 * FRAME_LEN).unwrap();
            let z = resample(&y, 1.0 / (1.0 + delta) - 1.0, RESAMPLE_HALF, FRAME_LEN).unwrap();
            let f = estimate_tone_frequency(&z).unwrap();
            assert!((f - 777.0).abs() <= BIN_HZ, "delta {delta}: {f}");
        }
    }

    #[test]
    fn awgn_is_unit_power_and_circular() {
        let x = noise(1_000_000, 5);
        let p = mean_power(&x).unwrap();
        assert!((p - 1.0).abs() < 0.005, "{p}");
        let pr = x.iter().map(|s| s.re * s.re).sum::<f64>() / x.len() as f64;
        let cross = x.iter().map(|s| s.re * s.im).sum::<f64>() / x.len() as f64;
        assert!((pr - 0.5).abs() < 0.005);
        assert!(cross.abs() < 0.005);
    }

    #[test]
    fn noise_spec_validates_exponent() {
        assert!(NoiseSpec::impulsive(2.0, 0.0).is_ok());
        assert!(NoiseSpec::impulsive(2.5, 0.0).is_err());
        assert!(NoiseSpec::awgn(f64::NAN).is_err());
        let mut r = RngStream::new(0);
        assert!(synthesize_noise(NoiseKind::Impulsive { exponent: -1.0 }, 10, &mut r).is_err());
        assert!(synthesize_noise(NoiseKind::Awgn, 0, &mut r).is_err());
    }

    #[test]
    fn zero_db_noise_has_signal_power() {
        let x = tone(300.0, FRAME_LEN);
        let spec = NoiseSpec::awgn(0.0).unwrap();
        let y = add_noise(&x, &spec, &mut RngStream::new(6)).unwrap();
        let n: Vec<Complex64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let p = mean_power(&n).unwrap();
        assert!((p - 1.0).abs() < 0.02, "{p}");
    }

    #[test]
    fn infinite_snr_is_identity() {
        let x = noise(FRAME_LEN, 7);
        let spec = NoiseSpec {
            kind: NoiseKind::Awgn,
            snr_db: f64::INFINITY,
        };
        assert_eq!(add_noise(&x, &spec, &mut RngStream::new(1)).unwrap(), x);
    }

    #[test]
    fn full_band_filter_is_passthrough() {
        let x = noise(FRAME_LEN, 8);
        assert_eq!(apply_rx_filter(&x, &RxFilterSpec::full_band()).unwrap(), x);
    }

    #[test]
    fn rx_filter_rejects_out_of_band() {
        let filt = RxFilterSpec::new(0.0, 500.0).unwrap();
        // Average periodograms of filtered noise frames.
        let mut psd = vec![0.0; FRAME_LEN];
        for seed in 0..50 {
            let y = apply_rx_filter(&noise(FRAME_LEN, 100 + seed), &filt).unwrap();
            assert_eq!(y.len(), FRAME_LEN);
            let w = crate::dsp::hann(FRAME_LEN);
            let mut s: Vec<Complex64> = y.iter().zip(&w).map(|(a, b)| a * b).collect();
            fft_forward(&mut s);
            for (p, v) in psd.iter_mut().zip(&s) {
                *p += v.norm_sqr();
            }
        }
        let at = |f: f64| {
            let k = ((f / SAMPLE_RATE_HZ * FRAME_LEN as f64).round() as isize)
                .rem_euclid(FRAME_LEN as isize) as usize;
            psd[k]
        };
        let inband = (at(-100.0) + at(0.0) + at(100.0)) / 3.0;
        for f in [-2000.0, 2000.0] {
            let db = 10.0 * (at(f) / inband).log10();
            assert!(db < -60.0, "{f} Hz: {db} dB");
        }
    }

    #[test]
    fn rx_filter_passband_is_flat() {
        let filt = RxFilterSpec::new(800.0, 1000.0).unwrap();
        for f in [350.0, 500.0, 800.0, 1100.0, 1250.0] {
            let x = tone(f, FRAME_LEN);
            let y = apply_rx_filter(&x, &filt).unwrap();
            let g = (mean_power(&y[300..1700]).unwrap()).sqrt();
            let db = 20.0 * g.log10();
            assert!(db.abs() < 0.1, "{f} Hz: {db} dB");
        }
    }

    #[test]
    fn rx_filter_rejects_bad_specs() {
        assert!(RxFilterSpec::new(2900.0, 500.0).is_err());
        assert!(RxFilterSpec::new(0.0, 0.0).is_err());
        assert!(RxFilterSpec::new(0.0, 7000.0).is_err());
    }
}
