use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Exponents allowed for impulsive noise in a [`NoiseSpec`].
pub const IMPULSE_EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    Awgn,
    /// `sign(n)·|n|^x` applied to each Gaussian component.
    Impulsive { exponent: f64 },
}

impl NoiseKind {
    /// Manifest name: `"awgn"` or `"impulsive"`.
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKind::Awgn => "awgn",
            NoiseKind::Impulsive { .. } => "impulsive",
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match self {
            NoiseKind::Awgn => None,
            NoiseKind::Impulsive { exponent } => Some(*exponent),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    /// Signal-to-noise ratio over the full 6 kHz band.
    pub snr_db: f64,
}

impl NoiseSpec {
    pub fn awgn(snr_db: f64) -> Result<Self> {
        check_snr(snr_db)?;
        Ok(Self {
            kind: NoiseKind::Awgn,
            snr_db,
        })
    }

    pub fn impulsive(exponent: f64, snr_db: f64) -> Result<Self> {
        check_snr(snr_db)?;
        if !IMPULSE_EXPONENTS.contains(&exponent) {
            return Err(Error::InvalidParameter(format!(
                "impulse exponent {exponent} not in {IMPULSE_EXPONENTS:?}"
            )));
        }
        Ok(Self {
            kind: NoiseKind::Impulsive { exponent },
            snr_db,
        })
    }
}

fn check_snr(snr_db: f64) -> Result<()> {
    if snr_db.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("SNR {snr_db} dB")))
    }
}

/// `n` samples of unit-mean-power noise.
///
/// AWGN is circular complex Gaussian with analytically unit power.
/// Impulsive noise transforms each Gaussian component by `sign(g)·|g|^x` and
/// is then rescaled to unit power over the `n` samples. Any finite `x > 0`
/// is accepted here (`x = 1` reproduces AWGN).
pub fn synthesize_noise(kind: NoiseKind, n: usize, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut g: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()) * FRAC_1_SQRT_2)
        .collect();
    if let NoiseKind::Impulsive { exponent: x } = kind {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidParameter(format!("impulse exponent {x}")));
        }
        let t = |v: f64| v.signum() * v.abs().powf(x);
        for s in g.iter_mut() {
            *s = Complex64::new(t(s.re), t(s.im));
        }
        let p = g.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
        let scale = 1.0 / p.sqrt();
        for s in g.iter_mut() {
            *s *= scale;
        }
    }
    Ok(g)
}

/// Adds noise at `spec.snr_db` relative to the power of `x`.
pub fn add_noise(x: &[Complex64], spec: &NoiseSpec, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    let p = crate::metrology::mean_power(x)?;
    add_noise_with_power(x, spec, p, 0..x.len(), rng)
}

/// Adds noise whose power, measured over `window`, is
/// `signal_power / 10^(snr_db/10)`. `snr_db = +inf` returns `x` unchanged.
pub fn add_noise_with_power(
    x: &[Complex64],
    spec: &NoiseSpec,
    signal_power: f64,
    window: std::ops::Range<usize>,
    rng: &mut RngStream,
) -> Result<Vec<Complex64>> {
    if spec.snr_db == f64::INFINITY {
        return Ok(x.to_vec());
    }
    check_snr(spec.snr_db)?;
    if window.is_empty() || window.end > x.len() {
        return Err(Error::InvalidParameter(format!(
            "noise window {window:?} for {} samples",
            x.len()
        )));
    }
    let noise = synthesize_noise(spec.kind, x.len(), rng)?;
    let measured = crate::metrology::mean_power(&noise[window])?;
    let target = signal_power / 10f64.powf(spec.snr_db / 10.0);
    let g = (target / measured).sqrt();
    Ok(x.iter().zip(noise).map(|(s, v)| s + v * g).collect())
}
