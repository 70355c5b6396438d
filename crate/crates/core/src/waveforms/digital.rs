//! PSK, FSK, MFSK and multi-carrier generators.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::codes;
use super::payload::PayloadSource;
use crate::dsp::{frequency_to_phasor, smooth_steps, StepShape};
use crate::signal::{ModeSpec, SignalClass, SAMPLE_RATE_HZ};

/// Length of the raised-cosine frequency transition between MFSK symbols,
/// as a fraction of the symbol time.
pub const MFSK_RAMP_FRACTION: f64 = 0.6;

/// Bandwidth-time product of the Gaussian frequency smoothing of two-tone
/// FSK (RTTY, NAVTEX).
pub const FSK_GAUSSIAN_BT: f64 = 0.5;

/// Piecewise-constant level track built from durations in (fractional)
/// samples. Consecutive equal levels are merged.
#[derive(Debug, Default)]
pub(crate) struct Timeline {
    pub levels: Vec<f64>,
    pub starts: Vec<usize>,
    t: f64,
}

impl Timeline {
    pub fn push(&mut self, level: f64, duration: f64) {
        let start = self.t.round() as usize;
        self.t += duration;
        if self.levels.last() == Some(&level) {
            return;
        }
        self.levels.push(level);
        self.starts.push(start);
    }

    pub fn len(&self) -> f64 {
        self.t
    }

    /// Drops everything before sample `offset`, re-basing the track at 0.
    pub fn skip(mut self, offset: usize) -> Self {
        let first = self.starts.iter().rposition(|&s| s <= offset).unwrap_or(0);
        self.levels.drain(..first);
        self.starts.drain(..first);
        for s in self.starts.iter_mut() {
            *s = s.saturating_sub(offset);
        }
        self.t -= offset as f64;
        self
    }
}

/// Differentially encoded BPSK with cosine-shaped phase reversals.
///
/// Symbol `d[k]` is a Hann pulse spanning `[k-1, k+1]` symbol periods, so
/// a reversal passes through zero amplitude and a steady symbol stream has a
/// constant envelope.
fn shaped_bpsk(symbols: &[f64], sps: f64, offset: usize, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = (i + offset) as f64 / sps;
            let k = t.floor() as usize;
            let u = t - k as f64;
            let a = symbols.get(k).copied().unwrap_or(0.0);
            let b = symbols.get(k + 1).copied().unwrap_or(0.0);
            let c = (PI * u).cos();
            a * 0.5 * (1.0 + c) + b * 0.5 * (1.0 - c)
        })
        .collect()
}

/// PSK31 / PSK63: varicode text, bit `0` reverses the phase.
pub(crate) fn psk(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let sps = SAMPLE_RATE_HZ / spec.baud_rate;
    let offset = payload.rng().index(sps as usize);
    let nsym = ((n + offset) as f64 / sps).ceil() as usize + 2;

    let mut bits = Vec::with_capacity(nsym + 16);
    while bits.len() < nsym {
        let text = payload.text(64);
        for c in text.chars() {
            if let Some(code) = codes::varicode(c) {
                bits.extend_from_slice(code);
                bits.extend_from_slice(&[false, false]);
            }
        }
    }
    // Start somewhere inside the text rather than on a character boundary.
    let skip = payload.rng().index(bits.len() - nsym + 1);
    let mut level = 1.0;
    let symbols: Vec<f64> = bits[skip..skip + nsym]
        .iter()
        .map(|&b| {
            if !b {
                level = -level;
            }
            level
        })
        .collect();

    let phase = payload.rng().uniform_range(0.0, 2.0 * PI);
    let rot = Complex64::from_polar(1.0, phase);
    shaped_bpsk(&symbols, sps, offset, n)
        .into_iter()
        .map(|a| rot * a)
        .collect()
}

fn fsk_from_timeline(
    tl: Timeline,
    shape: StepShape,
    n: usize,
    offset: usize,
    payload: &mut PayloadSource,
) -> Vec<Complex64> {
    let tl = tl.skip(offset);
    let freq = smooth_steps(&tl.levels, &tl.starts, n, &shape);
    let phase = payload.rng().uniform_range(0.0, 2.0 * PI);
    frequency_to_phasor(&freq, SAMPLE_RATE_HZ, phase)
}

/// Asynchronous radioteletype: start bit, five ITA2 bits, 1.5 stop bits.
pub(crate) fn rtty(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let sps = SAMPLE_RATE_HZ / spec.baud_rate;
    let half_shift = spec.shift_or_bandwidth_hz / 2.0;
    let char_len = 7.5 * sps;
    let offset = payload.rng().index(char_len as usize);
    let needed = (n + offset) as f64 + 2.0 * sps;

    let mut tl = Timeline::default();
    while tl.len() < needed {
        let text = payload.plain_text(32);
        for c in text.chars() {
            let Some(code) = codes::ita2(c) else { continue };
            tl.push(-half_shift, sps);
            for b in code {
                tl.push(if b { half_shift } else { -half_shift }, sps);
            }
            tl.push(half_shift, 1.5 * sps);
        }
    }
    fsk_from_timeline(tl, StepShape::gaussian(FSK_GAUSSIAN_BT, sps), n, offset, payload)
}

/// SITOR-B / Navtex: 7-bit constant-ratio characters at 100 Bd, each sent
/// twice with the repeat interleaved two characters later.
pub(crate) fn navtex(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let sps = SAMPLE_RATE_HZ / spec.baud_rate;
    let half_shift = spec.shift_or_bandwidth_hz / 2.0;
    let char_len = 7.0 * sps;
    let offset = payload.rng().index(char_len as usize);
    let needed = (n + offset) as f64 + 2.0 * sps;
    let chars_needed = (needed / char_len).ceil() as usize / 2 + 2;

    let words: Vec<[bool; 7]> = payload
        .plain_text(chars_needed)
        .chars()
        .filter_map(codes::constant_ratio)
        .collect();
    let idle = codes::constant_ratio_words()[codes::CONSTANT_RATIO_IDLE];

    let mut tl = Timeline::default();
    for (j, dx) in words.iter().enumerate() {
        let rx = if j >= 2 { &words[j - 2] } else { &idle };
        for w in [dx, rx] {
            for &b in w.iter() {
                tl.push(if b { half_shift } else { -half_shift }, sps);
            }
        }
    }
    fsk_from_timeline(tl, StepShape::gaussian(FSK_GAUSSIAN_BT, sps), n, offset, payload)
}

/// Continuous-phase MFSK with tone spacing equal to the baud rate
/// (Olivia, Contestia, MFSK-16/32/64).
pub(crate) fn mfsk(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let sps = SAMPLE_RATE_HZ / spec.baud_rate;
    let m = spec.tone_count as usize;
    let spacing = spec.baud_rate;
    let offset = payload.rng().index(sps as usize);
    let nsym = ((n + offset) as f64 / sps).ceil() as usize + 2;

    let mut tl = Timeline::default();
    for s in payload.symbols(nsym, m) {
        tl.push((s as f64 - (m as f64 - 1.0) / 2.0) * spacing, sps);
    }
    fsk_from_timeline(tl, StepShape::raised_cosine(MFSK_RAMP_FRACTION * sps), n, offset, payload)
}

/// MT63: 64 differentially keyed BPSK subcarriers with cosine-shaped
/// symbols, evenly spread over the nominal bandwidth.
pub(crate) fn multicarrier(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let sps = SAMPLE_RATE_HZ / spec.baud_rate;
    let carriers = spec.tone_count as usize;
    let spacing = spec.tone_spacing_hz().unwrap_or(spec.nominal_bandwidth_hz / carriers as f64);
    let offset = payload.rng().index(sps as usize);
    let nsym = ((n + offset) as f64 / sps).ceil() as usize + 2;

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..carriers {
        let f = (k as f64 - (carriers as f64 - 1.0) / 2.0) * spacing;
        let mut level = 1.0;
        let symbols: Vec<f64> = payload
            .bits(nsym)
            .into_iter()
            .map(|b| {
                if b {
                    level = -level;
                }
                level
            })
            .collect();
        let env = shaped_bpsk(&symbols, sps, offset, n);
        let phase0 = payload.rng().uniform_range(0.0, 2.0 * PI);
        let step = 2.0 * PI * f / SAMPLE_RATE_HZ;
        for (i, (o, a)) in out.iter_mut().zip(env).enumerate() {
            *o += Complex64::from_polar(a, phase0 + step * i as f64);
        }
    }
    out
}

/// Dispatch for the digital families.
pub(crate) fn generate(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    match spec.class {
        SignalClass::Psk31 | SignalClass::Psk63 => psk(spec, n, payload),
        SignalClass::Rtty45_170 | SignalClass::Rtty50_450 | SignalClass::Rtty75_170 => {
            rtty(spec, n, payload)
        }
        SignalClass::Navtex => navtex(spec, n, payload),
        SignalClass::Mt63_500 => multicarrier(spec, n, payload),
        _ => mfsk(spec, n, payload),
    }
}
