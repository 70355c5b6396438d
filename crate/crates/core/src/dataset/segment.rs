use std::path::Path;

use num_complex::Complex64;

use super::io::{DatasetWriter, ManifestHeader, ManifestRow};
use crate::error::{Error, Result};
use crate::signal::{IqFrame, FRAME_LEN};

/// Split name used for segmented recordings.
pub const SEGMENT_SPLIT: &str = "segments";

/// Cuts a 6 kHz recording into consecutive frames `hop` samples apart.
/// The tail that does not fill a frame is dropped; samples are not altered.
pub fn segment_recording(samples: &[Complex64], hop: usize) -> Result<Vec<IqFrame>> {
    if hop == 0 {
        return Err(Error::InvalidParameter("hop must be positive".into()));
    }
    if samples.len() < FRAME_LEN {
        return Err(Error::TooShort {
            needed: FRAME_LEN,
            got: samples.len(),
        });
    }
    let count = (samples.len() - FRAME_LEN) / hop + 1;
    (0..count)
        .map(|k| IqFrame::from_window(samples, k * hop))
        .collect()
}

/// Parses little-endian `f32` interleaved I,Q bytes.
pub fn parse_raw_iq(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::InvalidParameter(format!(
            "raw IQ length {} is not a whole number of complex f32 samples",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect())
}

/// Segments a recording and writes the frames as an unlabeled split.
/// Returns the number of frames.
pub fn write_segments(samples: &[Complex64], hop: usize, out_dir: &Path, source: &str) -> Result<u64> {
    let frames = segment_recording(samples, hop)?;
    let n = frames.len() as u64;
    let header = ManifestHeader::new(source, 0, 0, 0, SEGMENT_SPLIT, n);
    let mut w = DatasetWriter::create(out_dir, &header)?;
    for (k, f) in frames.iter().enumerate() {
        w.write(f, &ManifestRow::unlabeled(k as u64, (k * hop) as u64))?;
    }
    w.finish()
}
