//! Core domain types: frames, signal classes and their mode descriptions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex baseband sample rate of every frame.
pub const SAMPLE_RATE_HZ: f64 = 6000.0;
/// Half the sample rate; the complex band spans `[-NYQUIST_HZ, NYQUIST_HZ)`.
pub const NYQUIST_HZ: f64 = SAMPLE_RATE_HZ / 2.0;
/// Samples per frame.
pub const FRAME_LEN: usize = 2048;

/// A fixed-length window of complex baseband samples at [`SAMPLE_RATE_HZ`].
#[derive(Debug, Clone, PartialEq)]
pub struct IqFrame {
    samples: Vec<Complex64>,
}

impl IqFrame {
    /// Wraps `samples`, checking the length and that every component is finite.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != FRAME_LEN {
            return Err(Error::FrameLength {
                expected: FRAME_LEN,
                got: samples.len(),
            });
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { samples })
    }

    /// Copies a `FRAME_LEN` window starting at `start`.
    pub fn from_window(samples: &[Complex64], start: usize) -> Result<Self> {
        let end = start + FRAME_LEN;
        if samples.len() < end {
            return Err(Error::TooShort {
                needed: end,
                got: samples.len(),
            });
        }
        Self::new(samples[start..end].to_vec())
    }

    /// Builds a frame from interleaved single-precision I/Q values.
    pub fn from_interleaved_f32(iq: &[f32]) -> Result<Self> {
        if iq.len() != 2 * FRAME_LEN {
            return Err(Error::FrameLength {
                expected: FRAME_LEN,
                got: iq.len() / 2,
            });
        }
        let samples = iq
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0] as f64, p[1] as f64))
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        SAMPLE_RATE_HZ
    }

    pub fn duration_s(&self) -> f64 {
        FRAME_LEN as f64 / SAMPLE_RATE_HZ
    }

    /// Little-endian `f32` interleaved I,Q bytes (the `.iqb` payload layout).
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(FRAME_LEN * 8);
        for s in &self.samples {
            out.extend_from_slice(&(s.re as f32).to_le_bytes());
            out.extend_from_slice(&(s.im as f32).to_le_bytes());
        }
        out
    }
}

/// The 20 signal classes, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignalClass {
    Psk31,
    Psk63,
    Rtty45_170,
    Rtty50_450,
    Rtty75_170,
    Navtex,
    Olivia4_500,
    Olivia8_250,
    Olivia16_500,
    Olivia32_1000,
    Contestia16_250,
    Mfsk16,
    Mfsk32,
    Mfsk64,
    Mt63_500,
    UsbVoice,
    LsbVoice,
    AmBroadcast,
    Morse,
    RadioFax,
}

impl SignalClass {
    pub const COUNT: usize = 20;

    pub const ALL: [SignalClass; 20] = [
        SignalClass::Psk31,
        SignalClass::Psk63,
        SignalClass::Rtty45_170,
        SignalClass::Rtty50_450,
        SignalClass::Rtty75_170,
        SignalClass::Navtex,
        SignalClass::Olivia4_500,
        SignalClass::Olivia8_250,
        SignalClass::Olivia16_500,
        SignalClass::Olivia32_1000,
        SignalClass::Contestia16_250,
        SignalClass::Mfsk16,
        SignalClass::Mfsk32,
        SignalClass::Mfsk64,
        SignalClass::Mt63_500,
        SignalClass::UsbVoice,
        SignalClass::LsbVoice,
        SignalClass::AmBroadcast,
        SignalClass::Morse,
        SignalClass::RadioFax,
    ];

    /// Position in [`SignalClass::ALL`]; used as the integer label.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// The mode name as written in the class table.
    pub fn name(self) -> &'static str {
        match self {
            SignalClass::Psk31 => "PSK31",
            SignalClass::Psk63 => "PSK63",
            SignalClass::Rtty45_170 => "RTTY 45/170",
            SignalClass::Rtty50_450 => "RTTY 50/450",
            SignalClass::Rtty75_170 => "RTTY 75/170",
            SignalClass::Navtex => "Navtex / Sitor-B",
            SignalClass::Olivia4_500 => "Olivia 4/500",
            SignalClass::Olivia8_250 => "Olivia 8/250",
            SignalClass::Olivia16_500 => "Olivia 16/500",
            SignalClass::Olivia32_1000 => "Olivia 32/1000",
            SignalClass::Contestia16_250 => "Contestia 16/250",
            SignalClass::Mfsk16 => "MFSK-16",
            SignalClass::Mfsk32 => "MFSK-32",
            SignalClass::Mfsk64 => "MFSK-64",
            SignalClass::Mt63_500 => "MT63 / 500",
            SignalClass::UsbVoice => "USB (voice)",
            SignalClass::LsbVoice => "LSB (voice)",
            SignalClass::AmBroadcast => "AM broadcast",
            SignalClass::Morse => "Morse Code",
            SignalClass::RadioFax => "HF / Radio Fax",
        }
    }

    pub fn spec(self) -> ModeSpec {
        ModeSpec::for_class(self)
    }
}

impl fmt::Display for SignalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(wanted))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

/// Modulation family of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModulationFamily {
    Psk,
    Fsk,
    Mfsk,
    MultiCarrier,
    SsbUpper,
    SsbLower,
    Am,
    Ook,
    Fax,
}

/// Static description of one signal class.
///
/// `shift_or_bandwidth_hz` holds the tone shift for FSK and fax, and the
/// occupied bandwidth for everything else. MFSK tone spacing equals the baud
/// rate for every MFSK mode in the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub class: SignalClass,
    pub family: ModulationFamily,
    /// Symbols per second; 0 for analog and variable-rate modes.
    pub baud_rate: f64,
    /// Number of tones (MFSK) or subcarriers (multi-carrier); 1 otherwise.
    pub tone_count: u32,
    pub shift_or_bandwidth_hz: f64,
    pub nominal_bandwidth_hz: f64,
}

impl ModeSpec {
    fn for_class(class: SignalClass) -> Self {
        use ModulationFamily as F;
        use SignalClass as C;

        let psk = |baud: f64| (F::Psk, baud, 1, 2.0 * baud, 2.0 * baud);
        let fsk = |baud: f64, shift: f64| (F::Fsk, baud, 1, shift, shift + baud);
        let mfsk = |tones: u32, baud: f64| {
            let bw = tones as f64 * baud;
            (F::Mfsk, baud, tones, bw, bw)
        };

        let (family, baud_rate, tone_count, shift_or_bandwidth_hz, nominal_bandwidth_hz) =
            match class {
                C::Psk31 => psk(31.25),
                C::Psk63 => psk(62.5),
                C::Rtty45_170 => fsk(1000.0 / 22.0, 170.0),
                C::Rtty50_450 => fsk(50.0, 450.0),
                C::Rtty75_170 => fsk(75.0, 170.0),
                C::Navtex => fsk(100.0, 170.0),
                C::Olivia4_500 => mfsk(4, 125.0),
                C::Olivia8_250 => mfsk(8, 31.25),
                C::Olivia16_500 => mfsk(16, 31.25),
                C::Olivia32_1000 => mfsk(32, 31.25),
                C::Contestia16_250 => mfsk(16, 15.625),
                C::Mfsk16 => mfsk(16, 15.625),
                C::Mfsk32 => mfsk(16, 31.25),
                C::Mfsk64 => mfsk(16, 62.5),
                C::Mt63_500 => (F::MultiCarrier, 5.0, 64, 500.0, 500.0),
                C::UsbVoice => (F::SsbUpper, 0.0, 1, 2700.0, 2700.0),
                C::LsbVoice => (F::SsbLower, 0.0, 1, 2700.0, 2700.0),
                C::AmBroadcast => (F::Am, 0.0, 1, 5000.0, 5000.0),
                C::Morse => (F::Ook, 0.0, 1, 200.0, 200.0),
                C::RadioFax => (F::Fax, 0.0, 1, 800.0, 1100.0),
            };

        ModeSpec {
            class,
            family,
            baud_rate,
            tone_count,
            shift_or_bandwidth_hz,
            nominal_bandwidth_hz,
        }
    }

    /// Spacing between adjacent tones or subcarriers, if the mode has several.
    pub fn tone_spacing_hz(&self) -> Option<f64> {
        match self.family {
            ModulationFamily::Mfsk => Some(self.baud_rate),
            ModulationFamily::MultiCarrier => {
                Some(self.shift_or_bandwidth_hz / self.tone_count as f64)
            }
            _ => None,
        }
    }

    /// Center of the occupied band relative to the 0 Hz reference.
    ///
    /// Digital modes, AM and fax sit on 0 Hz; the voice sidebands occupy
    /// `(0, 2700]` and `[-2700, 0)` around a suppressed carrier at 0 Hz.
    pub fn center_hz(&self) -> f64 {
        match self.family {
            ModulationFamily::SsbUpper => self.nominal_bandwidth_hz / 2.0,
            ModulationFamily::SsbLower => -self.nominal_bandwidth_hz / 2.0,
            _ => 0.0,
        }
    }
}

/// All 20 mode descriptions in table order.
pub fn mode_table() -> Vec<ModeSpec> {
    SignalClass::ALL.iter().map(|c| c.spec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn table_has_twenty_distinct_classes_in_order() {
        let table = mode_table();
        assert_eq!(table.len(), 20);
        let set: HashSet<_> = table.iter().map(|m| m.class).collect();
        assert_eq!(set.len(), 20);
        for (i, m) in table.iter().enumerate() {
            assert_eq!(m.class.index(), i);
        }
    }

    #[test]
    fn first_entry_is_psk31() {
        let m = mode_table()[0];
        assert_eq!(m.class, SignalClass::Psk31);
        assert_eq!(m.family, ModulationFamily::Psk);
        assert_eq!(m.baud_rate, 31.25);
    }

    #[test]
    fn olivia_32_1000() {
        let m = SignalClass::Olivia32_1000.spec();
        assert_eq!(m.family, ModulationFamily::Mfsk);
        assert_eq!(m.tone_count, 32);
        assert_eq!(m.baud_rate, 31.25);
        assert_eq!(m.nominal_bandwidth_hz, 1000.0);
    }

    #[test]
    fn rounded_table_baud_rates_map_to_exact_values() {
        // Table value, exact value.
        let cases = [
            (SignalClass::Psk31, 31.0, 31.25),
            (SignalClass::Psk63, 63.0, 62.5),
            (SignalClass::Rtty45_170, 45.0, 45.4545),
            (SignalClass::Rtty50_450, 50.0, 50.0),
            (SignalClass::Rtty75_170, 75.0, 75.0),
            (SignalClass::Navtex, 100.0, 100.0),
            (SignalClass::Olivia4_500, 125.0, 125.0),
            (SignalClass::Olivia8_250, 31.0, 31.25),
            (SignalClass::Olivia16_500, 31.0, 31.25),
            (SignalClass::Olivia32_1000, 31.0, 31.25),
            (SignalClass::Contestia16_250, 16.0, 15.625),
            (SignalClass::Mfsk16, 16.0, 15.625),
            (SignalClass::Mfsk32, 31.0, 31.25),
            (SignalClass::Mfsk64, 63.0, 62.5),
            (SignalClass::Mt63_500, 5.0, 5.0),
        ];
        for (class, table, exact) in cases {
            let baud = class.spec().baud_rate;
            assert!((baud - exact).abs() < 1e-3, "{class}: {baud}");
            assert!((baud - table).abs() <= 1.0, "{class}: {baud} vs {table}");
        }
    }

    #[test]
    fn families_and_shifts_follow_the_table() {
        use ModulationFamily::*;
        let fam: Vec<_> = mode_table().iter().map(|m| m.family).collect();
        assert_eq!(
            fam,
            vec![
                Psk, Psk, Fsk, Fsk, Fsk, Fsk, Mfsk, Mfsk, Mfsk, Mfsk, Mfsk, Mfsk, Mfsk, Mfsk,
                MultiCarrier, SsbUpper, SsbLower, Am, Ook, Fax
            ]
        );
        assert_eq!(SignalClass::Rtty45_170.spec().shift_or_bandwidth_hz, 170.0);
        assert_eq!(SignalClass::Rtty50_450.spec().shift_or_bandwidth_hz, 450.0);
        assert_eq!(SignalClass::Rtty75_170.spec().shift_or_bandwidth_hz, 170.0);
        assert_eq!(SignalClass::Navtex.spec().shift_or_bandwidth_hz, 170.0);
        let tones: Vec<_> = [
            SignalClass::Olivia4_500,
            SignalClass::Olivia8_250,
            SignalClass::Olivia16_500,
            SignalClass::Olivia32_1000,
            SignalClass::Contestia16_250,
            SignalClass::Mfsk16,
            SignalClass::Mfsk32,
            SignalClass::Mfsk64,
        ]
        .iter()
        .map(|c| c.spec().tone_count)
        .collect();
        assert_eq!(tones, vec![4, 8, 16, 32, 16, 16, 16, 16]);
    }

    #[test]
    fn mfsk_tone_grid_spans_nominal_bandwidth() {
        for m in mode_table() {
            assert!(m.nominal_bandwidth_hz > 0.0 && m.nominal_bandwidth_hz <= SAMPLE_RATE_HZ);
            if m.family == ModulationFamily::Mfsk {
                let spacing = m.tone_spacing_hz().unwrap();
                assert_eq!(spacing, m.baud_rate);
                assert!((m.tone_count as f64 * spacing - m.nominal_bandwidth_hz).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn class_names_round_trip() {
        for c in SignalClass::ALL {
            assert_eq!(c.name().parse::<SignalClass>().unwrap(), c);
            assert_eq!(SignalClass::from_index(c.index()), Some(c));
        }
        assert!("QPSK250".parse::<SignalClass>().is_err());
    }

    #[test]
    fn frame_invariants() {
        let frame = IqFrame::new(vec![Complex64::new(0.0, 0.0); FRAME_LEN]).unwrap();
        assert_eq!(frame.len(), 2048);
        assert!((frame.duration_s() - 0.3413).abs() < 1e-3);
        assert!(matches!(
            IqFrame::new(vec![Complex64::new(0.0, 0.0); 2047]),
            Err(Error::FrameLength { .. })
        ));
        let mut bad = vec![Complex64::new(0.0, 0.0); FRAME_LEN];
        bad[7].im = f64::NAN;
        assert!(matches!(IqFrame::new(bad), Err(Error::NonFinite)));
    }

    #[test]
    fn le_bytes_layout() {
        let mut s = vec![Complex64::new(0.0, 0.0); FRAME_LEN];
        s[0] = Complex64::new(1.5, -2.0);
        let bytes = IqFrame::new(s).unwrap().to_le_bytes();
        assert_eq!(bytes.len(), FRAME_LEN * 8);
        assert_eq!(&bytes[0..4], &1.5f32.to_le_bytes());
        assert_eq!(&bytes[4..8], &(-2.0f32).to_le_bytes());
    }
}
