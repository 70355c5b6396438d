//! The per-example synthesis chain.
//!
//! Order: clean waveform, fading channel, phase offset, frequency offset,
//! sample-rate offset, noise, RX filter, crop. Each stage works on a
//! slightly longer buffer than the one after it, so no stage sees an edge
//! inside the final frame:
//!
//! ```text
//! waveform        SOURCE_LEN
//! channel         drop CHANNEL_HISTORY samples of delay-line warm-up
//! resample        PRE_NOISE_LEN samples starting RESAMPLE_HALF in
//! noise, filter   PRE_NOISE_LEN
//! crop            FRAME_LEN starting FILTER_MARGIN in
//! ```
//!
//! With an identity plan the frame is `waveform[256..2304]`.

use std::ops::Range;

use num_complex::Complex64;

use super::plan::{plan_channel, ImpairmentPlan};
use crate::error::Result;
use crate::fading::apply_watterson;
use crate::impairments::{
    add_noise_with_power, apply_frequency_offset, apply_phase_offset, apply_rx_filter, resample,
    source_len_for, RESAMPLE_HALF,
};
use crate::metrology::mean_power;
use crate::rng::RngStream;
use crate::signal::{IqFrame, SignalClass, FRAME_LEN};
use crate::waveforms::{generate_waveform, WaveformRequest};

/// Delay-line history dropped after the channel (covers the longest
/// table delay, 7 ms = 42 samples).
pub const CHANNEL_HISTORY: usize = 64;
/// Margin on each side of the frame for the RX filter (at least half its
/// length).
pub const FILTER_MARGIN: usize = 128;
/// Length of the buffer noise and filter operate on.
pub const PRE_NOISE_LEN: usize = FRAME_LEN + 2 * FILTER_MARGIN;
/// Length of the generated clean waveform.
pub const SOURCE_LEN: usize = 2560;

const _: () = assert!(SOURCE_LEN >= CHANNEL_HISTORY + RESAMPLE_HALF + PRE_NOISE_LEN * 101 / 99 + RESAMPLE_HALF + 2);

/// One labeled dataset element.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleRecord {
    pub frame: IqFrame,
    pub label: SignalClass,
    pub plan: ImpairmentPlan,
    pub index: u64,
}

/// Intermediate signals of one example, each cropped to the final frame
/// window.
#[derive(Debug, Clone)]
pub struct ExampleTrace {
    /// Clean waveform at the frame position (before any impairment).
    pub clean: Vec<Complex64>,
    /// After channel, offsets and resampling; the SNR reference.
    pub pre_noise: Vec<Complex64>,
    /// After noise, before the RX filter.
    pub noisy: Vec<Complex64>,
    pub frame: IqFrame,
}

fn frame_window() -> Range<usize> {
    FILTER_MARGIN..FILTER_MARGIN + FRAME_LEN
}

/// Runs the full chain and keeps the intermediate stages.
pub fn trace_example(class: SignalClass, plan: &ImpairmentPlan) -> Result<ExampleTrace> {
    let root = RngStream::new(plan.seed);
    let source = generate_waveform(WaveformRequest::new(
        class.spec(),
        SOURCE_LEN,
        root.child("waveform"),
    ))?;
    let clean_offset = CHANNEL_HISTORY + RESAMPLE_HALF + FILTER_MARGIN;
    let clean = source[clean_offset..clean_offset + FRAME_LEN].to_vec();

    let faded = match plan_channel(plan)? {
        Some(p) => apply_watterson(&source, &p, &mut root.child("channel"))?,
        None => source,
    };
    let x = &faded[CHANNEL_HISTORY..];
    let x = apply_phase_offset(x, plan.phase_rad);
    let x = apply_frequency_offset(&x, plan.freq_offset_hz);
    debug_assert!(x.len() >= source_len_for(plan.fs_offset, PRE_NOISE_LEN));
    let x = resample(&x, plan.fs_offset, RESAMPLE_HALF, PRE_NOISE_LEN)?;

    let window = frame_window();
    let noisy_full = match &plan.noise {
        Some(spec) => {
            let ps = mean_power(&x[window.clone()])?;
            add_noise_with_power(&x, spec, ps, window.clone(), &mut root.child("noise"))?
        }
        None => x.clone(),
    };
    let filtered = apply_rx_filter(&noisy_full, &plan.rx_filter)?;

    Ok(ExampleTrace {
        clean,
        pre_noise: x[window.clone()].to_vec(),
        noisy: noisy_full[window.clone()].to_vec(),
        frame: IqFrame::new(filtered[window].to_vec())?,
    })
}

/// Synthesizes example `index` of class `class` under `plan`. All
/// randomness comes from streams derived from `plan.seed`.
pub fn synthesize_example(class: SignalClass, plan: &ImpairmentPlan, index: u64) -> Result<ExampleRecord> {
    let trace = trace_example(class, plan)?;
    Ok(ExampleRecord {
        frame: trace.frame,
        label: class,
        plan: plan.clone(),
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::impairments::{NoiseSpec, RxFilterSpec};
    use crate::metrology::measure_snr;

    #[test]
    fn identity_plan_crops_the_clean_waveform() {
        for class in SignalClass::ALL {
            let plan = ImpairmentPlan::identity(77);
            let t = trace_example(class, &plan).unwrap();
            assert_eq!(t.frame.samples(), &t.clean[..], "{class}");
            let src = generate_waveform(WaveformRequest::new(
                class.spec(),
                SOURCE_LEN,
                RngStream::new(77).child("waveform"),
            ))
            .unwrap();
            assert_eq!(t.frame.samples(), &src[256..2304]);
        }
    }

    #[test]
    fn labeled_snr_is_measured() {
        let mut plan = ImpairmentPlan::identity(5);
        plan.noise = Some(NoiseSpec::awgn(10.0).unwrap());
        plan.freq_offset_hz = 40.0;
        plan.fs_offset = 0.005;
        let t = trace_example(SignalClass::Olivia8_250, &plan).unwrap();
        let snr = measure_snr(&t.pre_noise, t.frame.samples()).unwrap();
        assert!((snr - 10.0).abs() < 0.5, "{snr}");
    }

    #[test]
    fn fading_varies_the_amplitude() {
        let spread = |plan: &ImpairmentPlan| {
            let t = trace_example(SignalClass::Rtty45_170, plan).unwrap();
            let m: Vec<f64> = t.frame.samples().iter().map(|s| s.norm()).collect();
            let mean = m.iter().sum::<f64>() / m.len() as f64;
            m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m.len() as f64
        };
        let base = spread(&ImpairmentPlan::identity(3));
        let mut faded_total = 0.0;
        for seed in 0..20 {
            let mut plan = ImpairmentPlan::identity(seed);
            plan.channel = "Good".into();
            let rec = synthesize_example(SignalClass::Rtty45_170, &plan, seed).unwrap();
            assert_eq!(rec.plan.channel, "Good");
            faded_total += spread(&plan);
        }
        assert!(faded_total / 20.0 > base, "{base}");
    }

    #[test]
    fn full_chain_is_deterministic_and_finite() {
        let mut plan = ImpairmentPlan::identity(9);
        plan.phase_rad = 1.0;
        plan.freq_offset_hz = -200.0;
        plan.fs_offset = -0.01;
        plan.noise = Some(NoiseSpec::impulsive(3.0, -15.0).unwrap());
        plan.rx_filter = RxFilterSpec::new(-200.0 / 0.99, 900.0).unwrap();
        plan.channel = "High - Disturbed".into();
        for class in SignalClass::ALL {
            let a = synthesize_example(class, &plan, 1).unwrap();
            let b = synthesize_example(class, &plan, 1).unwrap();
            assert_eq!(a, b);
        }
    }
}
