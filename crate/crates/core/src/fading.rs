//! Watterson two-path ionospheric channel.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::signal::SAMPLE_RATE_HZ;

/// Name used in manifests and plans for "no channel model".
pub const NO_CHANNEL: &str = "none";
/// Tap gains are synthesized at this many times the spread, then
/// interpolated.
pub const TAP_OVERSAMPLING: f64 = 32.0;

/// Where a channel definition comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelOrigin {
    Ccir,
    Itu,
    Custom,
}

/// One fading channel parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WattersonParams {
    pub name: String,
    pub paths: u8,
    /// Delay of the second path; 0 for one-path channels.
    pub differential_delay_ms: f64,
    /// Two-sided spread, i.e. 2σ of the Gaussian Doppler spectrum.
    pub freq_spread_hz: f64,
    /// Fixed frequency offset of the second path.
    pub freq_offset_hz: f64,
    pub origin: ChannelOrigin,
}

impl WattersonParams {
    fn flat(name: &str, spread: f64) -> Self {
        Self {
            name: name.to_string(),
            paths: 1,
            differential_delay_ms: 0.0,
            freq_spread_hz: spread,
            freq_offset_hz: 0.0,
            origin: ChannelOrigin::Ccir,
        }
    }

    fn two_path(name: &str, delay_ms: f64, spread: f64, offset: f64, origin: ChannelOrigin) -> Self {
        Self {
            name: name.to_string(),
            paths: 2,
            differential_delay_ms: delay_ms,
            freq_spread_hz: spread,
            freq_offset_hz: offset,
            origin,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.differential_delay_ms.is_finite()
            && self.freq_spread_hz.is_finite()
            && self.freq_offset_hz.is_finite();
        let ok = finite
            && self.freq_spread_hz > 0.0
            && self.differential_delay_ms >= 0.0
            && match self.paths {
                1 => self.differential_delay_ms == 0.0 && self.freq_offset_hz == 0.0,
                2 => true,
                _ => false,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("channel {self:?}")))
        }
    }

    /// Differential delay in whole samples at 6 kHz.
    pub fn delay_samples(&self) -> usize {
        (self.differential_delay_ms * 1e-3 * SAMPLE_RATE_HZ).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ChannelSetName {
    Ccir520,
    Itu1487,
    Extended,
}

impl ChannelSetName {
    pub const ALL: [ChannelSetName; 3] = [
        ChannelSetName::Ccir520,
        ChannelSetName::Itu1487,
        ChannelSetName::Extended,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelSetName::Ccir520 => "CCIR520",
            ChannelSetName::Itu1487 => "ITU1487",
            ChannelSetName::Extended => "Extended",
        }
    }
}

impl fmt::Display for ChannelSetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelSetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "ccir520" | "ccir" => Ok(ChannelSetName::Ccir520),
            "itu1487" | "itu" => Ok(ChannelSetName::Itu1487),
            "extended" => Ok(ChannelSetName::Extended),
            _ => Err(Error::UnknownChannel(s.to_string())),
        }
    }
}

impl TryFrom<String> for ChannelSetName {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ChannelSetName> for String {
    fn from(n: ChannelSetName) -> String {
        n.name().to_string()
    }
}

/// A named list of channels plus the always-available "no channel" option.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub name: ChannelSetName,
    pub channels: Vec<WattersonParams>,
    pub includes_no_channel: bool,
}

impl ChannelSet {
    /// Number of equally likely choices, counting "no channel".
    pub fn choices(&self) -> usize {
        self.channels.len() + usize::from(self.includes_no_channel)
    }

    pub fn get(&self, name: &str) -> Option<&WattersonParams> {
        self.channels.iter().find(|c| c.name == name)
    }
}

fn ccir520() -> Vec<WattersonParams> {
    use ChannelOrigin::Ccir;
    vec![
        WattersonParams::flat("Flat 1", 0.2),
        WattersonParams::flat("Flat 2", 1.0),
        WattersonParams::two_path("Good", 0.5, 0.1, 0.0, Ccir),
        WattersonParams::two_path("Moderate", 1.0, 0.5, 0.0, Ccir),
        WattersonParams::two_path("Poor", 2.0, 1.0, 0.0, Ccir),
        WattersonParams::two_path("Flutter", 0.5, 10.0, 0.0, Ccir),
        WattersonParams::two_path("Doppler", 0.5, 0.2, 5.0, Ccir),
    ]
}

fn itu1487() -> Vec<WattersonParams> {
    use ChannelOrigin::Itu;
    [
        ("Low - Quiet", 0.5, 0.5),
        ("Low - Moderate", 2.0, 1.5),
        ("Low - Disturbed", 6.0, 10.0),
        ("Mid - Quiet", 0.5, 0.1),
        ("Mid - Moderate", 1.0, 0.5),
        ("Mid - Disturbed", 2.0, 1.0),
        ("Mid - NVIS", 7.0, 1.0),
        ("High - Quiet", 1.0, 0.5),
        ("High - Moderate", 3.0, 10.0),
        ("High - Disturbed", 7.0, 30.0),
    ]
    .into_iter()
    .map(|(n, d, s)| WattersonParams::two_path(n, d, s, 0.0, Itu))
    .collect()
}

fn extended() -> Vec<WattersonParams> {
    use ChannelOrigin::Custom;
    let itu = itu1487();
    let pick = |n: &str| itu.iter().find(|c| c.name == n).cloned().unwrap();
    let mut set = ccir520();
    set.extend(
        ["Low - Disturbed", "Mid - NVIS", "High - Moderate", "High - Disturbed"]
            .into_iter()
            .map(pick),
    );
    set.extend([
        WattersonParams::two_path("Poor Doppler", 2.0, 1.0, 10.0, Custom),
        WattersonParams::two_path("High - Moderate Doppler", 3.0, 10.0, 8.0, Custom),
        WattersonParams::two_path("Extreme 1", 1.0, 40.0, 0.0, Custom),
        WattersonParams::two_path("Extreme 2", 5.0, 0.5, 0.0, Custom),
    ]);
    set
}

pub fn channel_set(name: ChannelSetName) -> ChannelSet {
    let channels = match name {
        ChannelSetName::Ccir520 => ccir520(),
        ChannelSetName::Itu1487 => itu1487(),
        ChannelSetName::Extended => extended(),
    };
    ChannelSet {
        name,
        channels,
        includes_no_channel: true,
    }
}

/// Looks a channel up by name across all sets. `"none"` yields `None`.
pub fn find_channel(name: &str) -> Result<Option<WattersonParams>> {
    if name == NO_CHANNEL {
        return Ok(None);
    }
    ChannelSetName::ALL
        .iter()
        .find_map(|s| channel_set(*s).get(name).cloned())
        .map(Some)
        .ok_or_else(|| Error::UnknownChannel(name.to_string()))
}

/// Complex Gaussian tap-gain process with a Gaussian Doppler spectrum of
/// two-sided width `spread_hz` (= 2σ) and unit mean power.
///
/// The process is filtered at `min(fs, 32·spread)` and linearly
/// interpolated to `fs_hz`.
pub fn generate_tap_gain(spread_hz: f64, n: usize, fs_hz: f64, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    if !(spread_hz.is_finite() && spread_hz > 0.0) {
        return Err(Error::InvalidParameter(format!("Doppler spread {spread_hz} Hz")));
    }
    if !(fs_hz.is_finite() && fs_hz > 0.0) {
        return Err(Error::InvalidParameter(format!("sample rate {fs_hz} Hz")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let fs_low = fs_hz.min(TAP_OVERSAMPLING * spread_hz);
    let sigma_f = spread_hz / 2.0;
    // Gaussian impulse response whose squared magnitude response has std sigma_f.
    let tau = fs_low / (2.0 * SQRT_2 * PI * sigma_f);
    let half = (4.0 * tau).ceil() as usize;
    let mut h: Vec<f64> = (0..=2 * half)
        .map(|i| {
            let t = i as f64 - half as f64;
            (-t * t / (2.0 * tau * tau)).exp()
        })
        .collect();
    let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut h {
        *v /= norm;
    }

    let ratio = fs_low / fs_hz;
    let n_low = ((n - 1) as f64 * ratio).floor() as usize + 2;
    let white: Vec<Complex64> = (0..n_low + 2 * half)
        .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()) * FRAC_1_SQRT_2)
        .collect();
    let hc: Vec<Complex64> = h.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let full = crate::dsp::fft_convolve(&white, &hc);
    let low = &full[2 * half..2 * half + n_low];

    if ratio == 1.0 {
        return Ok(low[..n].to_vec());
    }
    Ok((0..n)
        .map(|i| {
            let t = i as f64 * ratio;
            let k = t.floor() as usize;
            let w = t - k as f64;
            low[k] * (1.0 - w) + low[k + 1] * w
        })
        .collect())
}

/// Passes `x` through the channel. Two-path output is
/// `√½·(g1·x[n] + g2·x[n−d]·e^{j2π·foff·n/fs})`; one-path output is `g1·x[n]`.
/// Samples before the delay see no second-path history; callers feed a
/// longer source and discard the head.
pub fn apply_watterson(x: &[Complex64], params: &WattersonParams, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    params.validate()?;
    let n = x.len();
    let g1 = generate_tap_gain(params.freq_spread_hz, n, SAMPLE_RATE_HZ, rng)?;
    if params.paths == 1 {
        return Ok(x.iter().zip(g1).map(|(s, g)| s * g).collect());
    }
    let d = params.delay_samples();
    if d >= n {
        return Err(Error::TooShort { needed: d + 1, got: n });
    }
    let g2 = generate_tap_gain(params.freq_spread_hz, n, SAMPLE_RATE_HZ, rng)?;
    let cycles = params.freq_offset_hz / SAMPLE_RATE_HZ;
    Ok((0..n)
        .map(|i| {
            let direct = x[i] * g1[i];
            let delayed = if i >= d {
                let rot = Complex64::from_polar(1.0, 2.0 * PI * (cycles * i as f64).fract());
                x[i - d] * g2[i] * rot
            } else {
                Complex64::new(0.0, 0.0)
            };
            (direct + delayed) * FRAC_1_SQRT_2
        })
        .collect())
}

/// Applies the named channel, or returns `x` unchanged for `"none"`.
pub fn apply_channel(x: &[Complex64], name: &str, rng: &mut RngStream) -> Result<Vec<Complex64>> {
    match find_channel(name)? {
        None => Ok(x.to_vec()),
        Some(p) => apply_watterson(x, &p, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(set: ChannelSetName, name: &str) -> (u8, f64, f64, f64) {
        let s = channel_set(set);
        let c = s.get(name).unwrap_or_else(|| panic!("{name} missing from {set}"));
        (c.paths, c.differential_delay_ms, c.freq_spread_hz, c.freq_offset_hz)
    }

    #[test]
    fn set_sizes() {
        assert_eq!(channel_set(ChannelSetName::Ccir520).channels.len(), 7);
        assert_eq!(channel_set(ChannelSetName::Itu1487).channels.len(), 10);
        assert_eq!(channel_set(ChannelSetName::Extended).channels.len(), 15);
        for s in ChannelSetName::ALL {
            let set = channel_set(s);
            assert!(set.includes_no_channel);
            for c in &set.channels {
                c.validate().unwrap();
            }
        }
    }

    #[test]
    fn table_examples() {
        use ChannelSetName::*;
        assert_eq!(row(Ccir520, "Good"), (2, 0.5, 0.1, 0.0));
        assert_eq!(row(Itu1487, "High - Disturbed"), (2, 7.0, 30.0, 0.0));
        assert_eq!(row(Extended, "Poor Doppler"), (2, 2.0, 1.0, 10.0));
    }

    #[test]
    fn delays_are_whole_samples() {
        for s in ChannelSetName::ALL {
            for c in channel_set(s).channels {
                let exact = c.differential_delay_ms * 6.0;
                assert_eq!(exact.fract(), 0.0, "{}", c.name);
            }
        }
        assert_eq!(find_channel("Good").unwrap().unwrap().delay_samples(), 3);
        assert_eq!(find_channel("Mid - NVIS").unwrap().unwrap().delay_samples(), 42);
    }

    #[test]
    fn set_names_parse() {
        assert_eq!("ccir520".parse::<ChannelSetName>().unwrap(), ChannelSetName::Ccir520);
        assert_eq!("ITU 1487".parse::<ChannelSetName>().unwrap(), ChannelSetName::Itu1487);
        assert!("bogus".parse::<ChannelSetName>().is_err());
        assert!(find_channel("bogus").is_err());
        assert_eq!(find_channel(NO_CHANNEL).unwrap(), None);
    }

    #[test]
    fn no_channel_is_identity() {
        let x: Vec<Complex64> = (0..2048).map(|i| Complex64::new(i as f64, 1.0)).collect();
        assert_eq!(apply_channel(&x, NO_CHANNEL, &mut RngStream::new(1)).unwrap(), x);
    }

    #[test]
    fn tap_gain_rejects_bad_spread() {
        let mut r = RngStream::new(0);
        assert!(generate_tap_gain(0.0, 10, 6000.0, &mut r).is_err());
        assert!(generate_tap_gain(-1.0, 10, 6000.0, &mut r).is_err());
    }

    #[test]
    fn delay_longer_than_input_is_rejected() {
        let p = find_channel("Mid - NVIS").unwrap().unwrap();
        let x = vec![Complex64::new(1.0, 0.0); 42];
        assert!(apply_watterson(&x, &p, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn independent_seeds_give_uncorrelated_gains() {
        let a = generate_tap_gain(10.0, 600_000, 6000.0, &mut RngStream::new(1)).unwrap();
        let b = generate_tap_gain(10.0, 600_000, 6000.0, &mut RngStream::new(2)).unwrap();
        let cross: Complex64 = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum();
        let pa: f64 = a.iter().map(|v| v.norm_sqr()).sum();
        let pb: f64 = b.iter().map(|v| v.norm_sqr()).sum();
        let rho = cross.norm() / (pa * pb).sqrt();
        assert!(rho < 0.05, "{rho}");
    }

    #[test]
    fn fading_varies_a_constant_envelope() {
        let x = vec![Complex64::new(1.0, 0.0); 60_000];
        let p = find_channel("Flutter").unwrap().unwrap();
        let y = apply_watterson(&x, &p, &mut RngStream::new(3)).unwrap();
        let mags: Vec<f64> = y[100..].iter().map(|v| v.norm()).collect();
        let mean = mags.iter().sum::<f64>() / mags.len() as f64;
        let var = mags.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / mags.len() as f64;
        assert!(var > 0.01, "{var}");
    }
}
