//! Clean complex-baseband waveforms for the 20 signal classes.
//!
//! Every generator returns unit-power samples. Digital modes, AM and fax are
//! centered on 0 Hz; the voice sidebands sit above (USB) or below (LSB) a
//! suppressed carrier at 0 Hz. Generators run past the requested length and
//! start at a random symbol phase so frames are not aligned to symbols.

mod analog;
pub mod codes;
mod digital;
pub mod payload;

use num_complex::Complex64;

pub use analog::{AM_AUDIO_BAND_HZ, FAX_DEVIATION_HZ, FAX_LINE_S, MORSE_RAMP_S, VOICE_BAND_HZ};
pub use digital::{FSK_GAUSSIAN_BT, MFSK_RAMP_FRACTION};

use crate::dsp::normalize_power;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::signal::{ModeSpec, ModulationFamily, FRAME_LEN};
use payload::{PayloadKind, PayloadSource};

/// Parameters of one clean waveform.
#[derive(Debug, Clone)]
pub struct WaveformRequest {
    pub spec: ModeSpec,
    pub n_samples: usize,
    pub rng: RngStream,
}

impl WaveformRequest {
    pub fn new(spec: ModeSpec, n_samples: usize, rng: RngStream) -> Self {
        Self {
            spec,
            n_samples,
            rng,
        }
    }
}

fn payload_kind(family: ModulationFamily) -> PayloadKind {
    match family {
        ModulationFamily::Psk | ModulationFamily::Fsk | ModulationFamily::Ook => {
            PayloadKind::RandomText
        }
        ModulationFamily::Mfsk | ModulationFamily::MultiCarrier => PayloadKind::RandomBits,
        ModulationFamily::SsbUpper | ModulationFamily::SsbLower | ModulationFamily::Am => {
            PayloadKind::SyntheticAudio
        }
        ModulationFamily::Fax => PayloadKind::SyntheticImageLines,
    }
}

/// Synthesizes `req.n_samples` unit-power samples of `req.spec`'s mode.
pub fn generate_waveform(req: WaveformRequest) -> Result<Vec<Complex64>> {
    let WaveformRequest {
        spec,
        n_samples: n,
        rng,
    } = req;
    if n < FRAME_LEN {
        return Err(Error::TooShort {
            needed: FRAME_LEN,
            got: n,
        });
    }
    if spec != spec.class.spec() {
        return Err(Error::UnknownClass(format!(
            "{} (spec does not match the mode table)",
            spec.class
        )));
    }

    let mut payload = PayloadSource::new(payload_kind(spec.family), rng);
    let mut x = match spec.family {
        ModulationFamily::Psk
        | ModulationFamily::Fsk
        | ModulationFamily::Mfsk
        | ModulationFamily::MultiCarrier => digital::generate(&spec, n, &mut payload),
        ModulationFamily::SsbUpper | ModulationFamily::SsbLower => {
            analog::ssb(&spec, n, &mut payload)
        }
        ModulationFamily::Am => analog::am(&spec, n, &mut payload),
        ModulationFamily::Ook => analog::morse(&spec, n, &mut payload),
        ModulationFamily::Fax => analog::fax(&spec, n, &mut payload),
    };
    debug_assert_eq!(x.len(), n);
    normalize_power(&mut x);
    Ok(x)
}

/// Occupied bandwidth used as the lower bound of the RX filter.
///
/// PSK: twice the baud rate. FSK: shift plus baud. MFSK: tones times
/// spacing. MT63: 500 Hz. Voice: 2700 Hz. AM: twice the 2.5 kHz audio
/// cutoff. Morse: 200 Hz. Fax: 800 Hz shift plus the keying sidebands.
pub fn nominal_bandwidth(spec: &ModeSpec) -> f64 {
    spec.nominal_bandwidth_hz
}
