//! Voice, AM broadcast, Morse and radiofax generators.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::codes;
use super::digital::Timeline;
use super::payload::PayloadSource;
use crate::dsp::{bin_frequency, fft_inverse, frequency_to_phasor, smooth_steps, StepShape};
use crate::signal::{ModeSpec, ModulationFamily, SAMPLE_RATE_HZ};

/// Audio band of the synthetic voice.
pub const VOICE_BAND_HZ: (f64, f64) = (300.0, 2700.0);
/// Audio band of the AM programme material.
pub const AM_AUDIO_BAND_HZ: (f64, f64) = (300.0, 2500.0);
/// Edge ramp of keyed Morse elements.
pub const MORSE_RAMP_S: f64 = 0.005;
/// Fax scan-line period (120 lines/min).
pub const FAX_LINE_S: f64 = 0.5;
/// Fax black/white deviation.
pub const FAX_DEVIATION_HZ: f64 = 400.0;
const FAX_MEAN_RUN_S: f64 = 0.015;
const FAX_MIN_RUN_S: f64 = 0.004;
const FAX_SYNC_S: f64 = 0.025;
const FAX_SMOOTHING_S: f64 = 0.002;

/// Complex Gaussian noise with a flat spectrum on `[lo, hi]` Hz and nothing
/// elsewhere, synthesized in the frequency domain.
fn band_noise(n: usize, lo: f64, hi: f64, payload: &mut PayloadSource) -> Vec<Complex64> {
    let nfft = n.next_power_of_two();
    let mut spec = vec![Complex64::new(0.0, 0.0); nfft];
    for (k, v) in spec.iter_mut().enumerate() {
        let f = bin_frequency(k, nfft, SAMPLE_RATE_HZ);
        if f >= lo && f <= hi {
            let rng = payload.rng();
            *v = Complex64::new(rng.gaussian(), rng.gaussian());
        }
    }
    fft_inverse(&mut spec);
    spec.truncate(n);
    spec
}

/// Syllable-like amplitude envelope: raised-cosine bursts at 2–6 Hz with
/// random peak levels over a small floor.
fn syllabic_envelope(n: usize, payload: &mut PayloadSource) -> Vec<f64> {
    const FLOOR: f64 = 0.05;
    let rate = payload.rng().uniform_range(2.0, 6.0);
    let syllable = SAMPLE_RATE_HZ / rate;
    let start = payload.rng().uniform_range(0.0, syllable);
    let count = ((n as f64 + start) / syllable).ceil() as usize + 1;
    let peaks: Vec<f64> = (0..count)
        .map(|_| payload.rng().uniform_range(0.3, 1.0))
        .collect();
    (0..n)
        .map(|i| {
            let t = (i as f64 + start) / syllable;
            let k = t.floor() as usize;
            let u = t - k as f64;
            FLOOR + (1.0 - FLOOR) * peaks[k] * (PI * u).sin().powi(2)
        })
        .collect()
}

/// Single-sideband voice: band-limited noise on one side of the
/// suppressed carrier, amplitude-modulated by a syllabic envelope.
pub(crate) fn ssb(spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let (lo, hi) = VOICE_BAND_HZ;
    let (lo, hi) = match spec.family {
        ModulationFamily::SsbLower => (-hi, -lo),
        _ => (lo, hi),
    };
    let mut x = band_noise(n, lo, hi, payload);
    let env = syllabic_envelope(n, payload);
    for (s, e) in x.iter_mut().zip(env) {
        *s *= e;
    }
    x
}

/// Double-sideband AM with carrier at 0 Hz.
pub(crate) fn am(_spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let (lo, hi) = AM_AUDIO_BAND_HZ;
    let band = band_noise(n, lo, hi, payload);
    let env = syllabic_envelope(n, payload);
    let audio: Vec<f64> = band.iter().zip(env).map(|(b, e)| b.re * e).collect();
    let peak = audio.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let depth = payload.rng().uniform_range(0.3, 0.9);
    let phase = Complex64::from_polar(1.0, payload.rng().uniform_range(0.0, 2.0 * PI));
    audio
        .into_iter()
        .map(|a| phase * (1.0 + depth * a / peak.max(f64::MIN_POSITIVE)))
        .collect()
}

/// On-off keyed carrier at 0 Hz sending random words at 10–40 WPM.
///
/// The frame starts with less than two dot units of silence so every frame
/// contains keyed elements.
pub(crate) fn morse(_spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let wpm = payload.rng().uniform_range(10.0, 40.0);
    let unit = 1.2 / wpm * SAMPLE_RATE_HZ;
    let lead_in = payload.rng().uniform_range(0.0, 2.0) * unit;

    let mut tl = Timeline::default();
    tl.push(0.0, lead_in);
    while tl.len() < n as f64 {
        let text = payload.plain_text(16);
        for word in text.split_whitespace() {
            for (ci, c) in word.chars().enumerate() {
                if ci > 0 {
                    tl.push(0.0, 3.0 * unit);
                }
                for (ei, e) in codes::morse(c).unwrap_or(".").chars().enumerate() {
                    if ei > 0 {
                        tl.push(0.0, unit);
                    }
                    tl.push(1.0, if e == '-' { 3.0 * unit } else { unit });
                }
            }
            tl.push(0.0, 7.0 * unit);
        }
    }

    let shape = StepShape::raised_cosine(MORSE_RAMP_S * SAMPLE_RATE_HZ);
    let env = smooth_steps(&tl.levels, &tl.starts, n, &shape);
    let phase = Complex64::from_polar(1.0, payload.rng().uniform_range(0.0, 2.0 * PI));
    env.into_iter().map(|a| phase * a.max(0.0)).collect()
}

/// Radiofax: FM between black (-400 Hz) and white (+400 Hz) with 0.5 s scan
/// lines, each opening with a white sync pulse followed by random
/// black/white runs.
pub(crate) fn fax(_spec: &ModeSpec, n: usize, payload: &mut PayloadSource) -> Vec<Complex64> {
    let line = FAX_LINE_S * SAMPLE_RATE_HZ;
    let offset = payload.rng().index(line as usize);
    let needed = (n + offset) as f64;

    let mut tl = Timeline::default();
    while tl.len() < needed {
        let line_end = tl.len() + line;
        tl.push(FAX_DEVIATION_HZ, FAX_SYNC_S * SAMPLE_RATE_HZ);
        let mut white = false;
        while tl.len() < line_end {
            let u = payload.rng().uniform();
            let run = (FAX_MIN_RUN_S - (FAX_MEAN_RUN_S - FAX_MIN_RUN_S) * (1.0 - u).ln())
                * SAMPLE_RATE_HZ;
            let run = run.min(line_end - tl.len());
            let level = if white { FAX_DEVIATION_HZ } else { -FAX_DEVIATION_HZ };
            tl.push(level, run);
            white = !white;
        }
    }

    let tl = tl.skip(offset);
    let shape = StepShape::raised_cosine(FAX_SMOOTHING_S * SAMPLE_RATE_HZ);
    let freq = smooth_steps(&tl.levels, &tl.starts, n, &shape);
    let phase = payload.rng().uniform_range(0.0, 2.0 * PI);
    frequency_to_phasor(&freq, SAMPLE_RATE_HZ, phase)
}
