//! Small DSP building blocks shared by the generators, the impairment
//! operators and the estimators.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward FFT (unnormalized).
pub fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// In-place inverse FFT, scaled by `1/N`.
pub fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Frequency of FFT bin `k` for an `n`-point transform, mapped to `[-fs/2, fs/2)`.
pub fn bin_frequency(k: usize, n: usize, fs: f64) -> f64 {
    let k = if k >= n.div_ceil(2) {
        k as f64 - n as f64
    } else {
        k as f64
    };
    k * fs / n as f64
}

/// Zeroth-order modified Bessel function of the first kind.
pub fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= (half / k) * (half / k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Kaiser window shape parameter for a stopband attenuation in dB.
pub fn kaiser_beta(atten_db: f64) -> f64 {
    if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * (atten_db - 21.0).powf(0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    }
}

/// Odd tap count meeting `atten_db` with a transition of `transition_hz`.
pub fn kaiser_taps(atten_db: f64, transition_hz: f64, fs: f64) -> usize {
    let dw = 2.0 * PI * transition_hz / fs;
    let n = ((atten_db - 7.95) / (2.285 * dw)).ceil() as usize + 1;
    n | 1
}

/// Kaiser window evaluated at `x ∈ [-1, 1]` (0 outside).
pub fn kaiser_at(x: f64, beta: f64, i0_beta: f64) -> f64 {
    if x.abs() > 1.0 {
        0.0
    } else {
        bessel_i0(beta * (1.0 - x * x).sqrt()) / i0_beta
    }
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Linear-phase low-pass FIR (Kaiser-windowed sinc) with unit DC gain.
pub fn lowpass_taps(cutoff_hz: f64, fs: f64, ntaps: usize, beta: f64) -> Vec<f64> {
    let mid = (ntaps - 1) as f64 / 2.0;
    let i0b = bessel_i0(beta);
    let fc = cutoff_hz / fs;
    let mut taps: Vec<f64> = (0..ntaps)
        .map(|i| {
            let t = i as f64 - mid;
            let x = if mid > 0.0 { t / mid } else { 0.0 };
            2.0 * fc * sinc(2.0 * fc * t) * kaiser_at(x, beta, i0b)
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Periodic Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Linear convolution of `x` with complex taps `h` via FFT; returns the full
/// `x.len() + h.len() - 1` result.
pub fn fft_convolve(x: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let out_len = x.len() + h.len() - 1;
    let n = out_len.next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    a[..x.len()].copy_from_slice(x);
    b[..h.len()].copy_from_slice(h);
    fft_forward(&mut a);
    fft_forward(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v;
    }
    fft_inverse(&mut a);
    a.truncate(out_len);
    a
}

/// Step response table of a smoothing kernel: `table[d + half]` is the
/// fraction of a unit step completed `d` samples after the step instant.
#[derive(Debug, Clone)]
pub struct StepShape {
    half: usize,
    table: Vec<f64>,
}

impl StepShape {
    /// Gaussian smoothing with bandwidth-time product `bt` for symbol length
    /// `samples_per_symbol` (the GFSK convention).
    pub fn gaussian(bt: f64, samples_per_symbol: f64) -> Self {
        let sigma = (2f64.ln()).sqrt() / (2.0 * PI * bt) * samples_per_symbol;
        let half = (4.0 * sigma).ceil().max(1.0) as usize;
        let kernel: Vec<f64> = (0..=2 * half)
            .map(|i| {
                let t = i as f64 - half as f64;
                (-t * t / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        Self::from_kernel(&kernel)
    }

    /// Raised-cosine (sin²) ramp lasting `ramp_samples`.
    pub fn raised_cosine(ramp_samples: f64) -> Self {
        let len = ramp_samples.round().max(1.0) as usize;
        let len = len | 1;
        let kernel: Vec<f64> = (0..len)
            .map(|i| (PI * (i as f64 + 0.5) / len as f64).sin().powi(2))
            .collect();
        Self::from_kernel(&kernel)
    }

    fn from_kernel(kernel: &[f64]) -> Self {
        let total: f64 = kernel.iter().sum();
        let mut acc = 0.0;
        let table = kernel
            .iter()
            .map(|k| {
                // Value at the kernel center counts half so the step is
                // symmetric about the switching instant.
                let before = acc;
                acc += k / total;
                0.5 * (before + acc)
            })
            .collect();
        Self {
            half: kernel.len() / 2,
            table,
        }
    }

    pub fn half_width(&self) -> usize {
        self.half
    }
}

/// Piecewise-constant trajectory `levels[j]` starting at `starts[j]`,
/// smoothed at every switch with `shape`. `starts[0]` must be 0.
pub fn smooth_steps(levels: &[f64], starts: &[usize], n: usize, shape: &StepShape) -> Vec<f64> {
    debug_assert_eq!(levels.len(), starts.len());
    let mut out = vec![0.0; n];
    for (j, &lv) in levels.iter().enumerate() {
        let a = starts[j].min(n);
        let b = starts.get(j + 1).copied().unwrap_or(n).min(n);
        out[a..b].fill(lv);
    }
    let half = shape.half as isize;
    for j in 1..levels.len() {
        let delta = levels[j] - levels[j - 1];
        if delta == 0.0 {
            continue;
        }
        let b = starts[j] as isize;
        for d in -half..=half {
            let idx = b + d;
            if idx < 0 || idx >= n as isize {
                continue;
            }
            let ideal = if d >= 0 { 1.0 } else { 0.0 };
            let smooth = shape.table[(d + half) as usize];
            out[idx as usize] += delta * (smooth - ideal);
        }
    }
    out
}

/// Integrates an instantaneous-frequency track (Hz) into a unit-amplitude
/// complex exponential with continuous phase.
pub fn frequency_to_phasor(freq_hz: &[f64], fs: f64, phase0: f64) -> Vec<Complex64> {
    let k = 2.0 * PI / fs;
    let mut phase = phase0;
    freq_hz
        .iter()
        .map(|f| {
            let s = Complex64::from_polar(1.0, phase);
            phase = (phase + k * f) % (2.0 * PI);
            s
        })
        .collect()
}

/// Scales `x` in place to unit mean power. All-zero input is left as is.
pub fn normalize_power(x: &mut [Complex64]) {
    let p = x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len().max(1) as f64;
    if p > 0.0 {
        let g = 1.0 / p.sqrt();
        for s in x.iter_mut() {
            *s *= g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_reference_values() {
        assert!((bessel_i0(0.0) - 1.0).abs() < 1e-15);
        // scipy.special.i0(1.0), i0(5.0)
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-12);
        assert!((bessel_i0(5.0) - 27.239_871_823_604_45).abs() < 1e-9);
    }

    #[test]
    fn lowpass_has_unit_dc_gain_and_is_symmetric() {
        let h = lowpass_taps(500.0, 6000.0, 101, 6.0);
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..h.len() {
            assert!((h[i] - h[h.len() - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn fft_convolve_matches_direct() {
        let x: Vec<Complex64> = (0..37)
            .map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let h: Vec<Complex64> = (0..9).map(|i| Complex64::new(1.0 / (i + 1) as f64, 0.1 * i as f64)).collect();
        let fast = fft_convolve(&x, &h);
        for (n, v) in fast.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, hk) in h.iter().enumerate() {
                if n >= k && n - k < x.len() {
                    acc += x[n - k] * hk;
                }
            }
            assert!((acc - v).norm() < 1e-12);
        }
    }

    #[test]
    fn smooth_steps_reach_levels_and_are_symmetric() {
        let shape = StepShape::gaussian(0.5, 100.0);
        let y = smooth_steps(&[-1.0, 1.0, -1.0], &[0, 300, 600], 900, &shape);
        assert!((y[150] + 1.0).abs() < 1e-9);
        assert!((y[450] - 1.0).abs() < 1e-9);
        // antisymmetric around each switch
        for d in 1..40 {
            assert!((y[300 + d] + y[300 - d]).abs() < 1e-9, "d={d}");
        }
        assert!(y[300].abs() < 1e-9);
    }

    #[test]
    fn bin_frequencies_wrap_to_negative_half() {
        assert_eq!(bin_frequency(0, 8, 8.0), 0.0);
        assert_eq!(bin_frequency(3, 8, 8.0), 3.0);
        assert_eq!(bin_frequency(4, 8, 8.0), -4.0);
        assert_eq!(bin_frequency(7, 8, 8.0), -1.0);
    }
}
