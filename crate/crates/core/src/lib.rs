//! Synthetic shortwave RF dataset generation.
//!
//! The crate synthesizes 20 shortwave signal classes at complex baseband
//! (6 kHz, 2048-sample frames), runs them through a parameterized impairment
//! chain (phase/frequency/sample-rate offsets, AWGN or impulsive noise with a
//! full-band SNR label, receiver bandpass, Watterson two-path fading) and
//! writes labeled, class-balanced datasets. The [`metrology`] module holds
//! independent estimators used to verify each impairment.
//!
//! Everything is deterministic: example `i` of a dataset depends only on the
//! master seed and `i`, so generation parallelizes without changing output.

pub mod dataset;
pub mod dsp;
pub mod error;
pub mod fading;
pub mod impairments;
pub mod metrology;
pub mod rng;
pub mod signal;
pub mod waveforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rng::RngStream;
pub use signal::{
    mode_table, IqFrame, ModeSpec, ModulationFamily, SignalClass, FRAME_LEN, NYQUIST_HZ,
    SAMPLE_RATE_HZ,
};
