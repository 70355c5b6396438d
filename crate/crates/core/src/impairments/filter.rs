use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::{fft_convolve, kaiser_beta, kaiser_taps, lowpass_taps};
use crate::error::{Error, Result};
use crate::signal::{NYQUIST_HZ, SAMPLE_RATE_HZ};

/// Stopband attenuation of the receiver filter design.
pub const RX_FILTER_ATTEN_DB: f64 = 65.0;
/// Width of each transition band.
pub const RX_FILTER_TRANSITION_HZ: f64 = 100.0;

/// Receiver bandpass: `bandwidth_hz` wide around `center_hz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RxFilterSpec {
    pub center_hz: f64,
    pub bandwidth_hz: f64,
}

impl RxFilterSpec {
    pub fn new(center_hz: f64, bandwidth_hz: f64) -> Result<Self> {
        let f = Self {
            center_hz,
            bandwidth_hz,
        };
        f.validate()?;
        Ok(f)
    }

    /// The full-band (identity) filter.
    pub fn full_band() -> Self {
        Self {
            center_hz: 0.0,
            bandwidth_hz: SAMPLE_RATE_HZ,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.center_hz.is_finite()
            && self.bandwidth_hz.is_finite()
            && self.bandwidth_hz > 0.0
            && self.bandwidth_hz <= SAMPLE_RATE_HZ
            && self.center_hz.abs() + self.bandwidth_hz / 2.0 <= NYQUIST_HZ + 1e-9;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "RX filter {} Hz wide at {} Hz does not fit in ±{NYQUIST_HZ} Hz",
                self.bandwidth_hz, self.center_hz
            )))
        }
    }

    /// True when there is no room for a stopband, so filtering is skipped.
    pub fn is_passthrough(&self) -> bool {
        self.bandwidth_hz + RX_FILTER_TRANSITION_HZ >= SAMPLE_RATE_HZ
    }

    /// Complex bandpass taps (odd length, linear phase).
    pub fn taps(&self) -> Vec<Complex64> {
        let n = kaiser_taps(RX_FILTER_ATTEN_DB, RX_FILTER_TRANSITION_HZ, SAMPLE_RATE_HZ);
        let cutoff = self.bandwidth_hz / 2.0 + RX_FILTER_TRANSITION_HZ / 2.0;
        let lp = lowpass_taps(cutoff, SAMPLE_RATE_HZ, n, kaiser_beta(RX_FILTER_ATTEN_DB));
        let mid = (n - 1) as f64 / 2.0;
        let w = 2.0 * PI * self.center_hz / SAMPLE_RATE_HZ;
        lp.iter()
            .enumerate()
            .map(|(k, h)| Complex64::from_polar(*h, w * (k as f64 - mid)))
            .collect()
    }
}

/// Applies the bandpass with reflection padding at both ends, so the output
/// has the input's length and no start-up transient.
pub fn apply_rx_filter(x: &[Complex64], filt: &RxFilterSpec) -> Result<Vec<Complex64>> {
    filt.validate()?;
    if filt.is_passthrough() {
        return Ok(x.to_vec());
    }
    let h = filt.taps();
    let pad = h.len() / 2;
    if x.len() <= pad {
        return Err(Error::TooShort {
            needed: pad + 1,
            got: x.len(),
        });
    }
    let mut padded = Vec::with_capacity(x.len() + 2 * pad);
    padded.extend((1..=pad).rev().map(|k| x[k]));
    padded.extend_from_slice(x);
    padded.extend((1..=pad).map(|k| x[x.len() - 1 - k]));
    let full = fft_convolve(&padded, &h);
    Ok(full[2 * pad..2 * pad + x.len()].to_vec())
}
