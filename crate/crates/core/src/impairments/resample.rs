//! Band-limited fractional resampling with a Kaiser-windowed sinc kernel.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::dsp::{bessel_i0, kaiser_at, sinc};
use crate::error::{Error, Result};
use crate::signal::{IqFrame, FRAME_LEN, NYQUIST_HZ, SAMPLE_RATE_HZ};

/// One-sided kernel length in input samples.
pub const RESAMPLE_HALF: usize = 64;
const PHASES: usize = 512;
const KAISER_BETA: f64 = 6.8;
/// Kernel cutoff; leaves room for the ±1% rate change below Nyquist.
pub const RESAMPLE_CUTOFF_HZ: f64 = 0.95 * NYQUIST_HZ;

/// `table[p][j]` is the kernel at offset `(j - HALF + 1) - p / PHASES`,
/// each phase normalized to unit DC gain. One extra phase closes the
/// interpolation interval.
fn kernel_table() -> &'static Vec<Vec<f64>> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let fc = RESAMPLE_CUTOFF_HZ / SAMPLE_RATE_HZ;
        let i0b = bessel_i0(KAISER_BETA);
        (0..=PHASES)
            .map(|p| {
                let frac = p as f64 / PHASES as f64;
                let mut taps: Vec<f64> = (0..2 * RESAMPLE_HALF)
                    .map(|j| {
                        let t = j as f64 - (RESAMPLE_HALF as f64 - 1.0) - frac;
                        2.0 * fc * sinc(2.0 * fc * t)
                            * kaiser_at(t / RESAMPLE_HALF as f64, KAISER_BETA, i0b)
                    })
                    .collect();
                let sum: f64 = taps.iter().sum();
                for t in &mut taps {
                    *t /= sum;
                }
                taps
            })
            .collect()
    })
}

/// Evaluates the band-limited continuation of `x` at fractional index `t`.
fn interpolate(x: &[Complex64], t: f64) -> Complex64 {
    let table = kernel_table();
    let i = t.floor() as usize;
    let pos = (t - i as f64) * PHASES as f64;
    let p = (pos.floor() as usize).min(PHASES - 1);
    let w = pos - p as f64;
    let (a, b) = (&table[p], &table[p + 1]);
    let base = i + 1 - RESAMPLE_HALF;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..2 * RESAMPLE_HALF {
        acc += x[base + j] * ((1.0 - w) * a[j] + w * b[j]);
    }
    acc
}

/// Resamples so that output sample `m` is the input at `start + m/(1+delta)`.
/// A tone at `f` in the input appears at `f / (1 + delta)` in the output.
///
/// `delta == 0` copies `x[start..start + out_len]` exactly.
pub fn resample(x: &[Complex64], delta: f64, start: usize, out_len: usize) -> Result<Vec<Complex64>> {
    if !delta.is_finite() || delta <= -0.5 {
        return Err(Error::InvalidParameter(format!("sample-rate offset {delta}")));
    }
    if delta == 0.0 {
        let end = start + out_len;
        if x.len() < end {
            return Err(Error::TooShort {
                needed: end,
                got: x.len(),
            });
        }
        return Ok(x[start..end].to_vec());
    }
    let step = 1.0 / (1.0 + delta);
    let last = start as f64 + (out_len.saturating_sub(1)) as f64 * step;
    let needed = last.floor() as usize + RESAMPLE_HALF + 1;
    if start + 1 < RESAMPLE_HALF || x.len() < needed {
        return Err(Error::TooShort {
            needed: needed.max(RESAMPLE_HALF),
            got: x.len(),
        });
    }
    Ok((0..out_len)
        .map(|m| interpolate(x, start as f64 + m as f64 * step))
        .collect())
}

/// Input samples needed by [`apply_sample_rate_offset`] for a given offset.
pub fn source_len_for(delta: f64, out_len: usize) -> usize {
    let span = (out_len - 1) as f64 / (1.0 + delta);
    RESAMPLE_HALF + span.floor() as usize + RESAMPLE_HALF + 1
}

/// Resamples a longer source by `(1 + delta)` and crops one frame, starting
/// [`RESAMPLE_HALF`] samples in so the kernel always has history.
pub fn apply_sample_rate_offset(source: &[Complex64], delta: f64) -> Result<IqFrame> {
    IqFrame::new(resample(source, delta, RESAMPLE_HALF, FRAME_LEN)?)
}
