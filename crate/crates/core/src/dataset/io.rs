//! The on-disk dataset format.
//!
//! A split is a pair of files: `<split>.iqb` holds the frames as
//! little-endian `f32` interleaved I,Q, 2048 complex samples per example in
//! index order; `<split>.jsonl` holds one header object followed by one row
//! per example.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::plan::ImpairmentPlan;
use super::synth::ExampleRecord;
use crate::error::{Error, Result};
use crate::impairments::{NoiseKind, NoiseSpec, RxFilterSpec};
use crate::signal::{IqFrame, SignalClass, FRAME_LEN, SAMPLE_RATE_HZ};

pub const FORMAT_VERSION: u32 = 1;
/// Bytes per stored frame.
pub const FRAME_BYTES: u64 = (FRAME_LEN * 2 * 4) as u64;
/// Class name written for unlabeled (segmented) frames.
pub const UNKNOWN_CLASS: &str = "unknown";

/// First line of a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub format_version: u32,
    pub recipe: String,
    pub master_seed: u64,
    pub n_train: u64,
    pub n_val: u64,
    pub sample_rate_hz: u32,
    pub frame_len: usize,
    /// Which split this file holds (`train`, `val` or `segments`).
    pub split: String,
    /// Number of rows that follow.
    pub n_examples: u64,
}

impl ManifestHeader {
    pub fn new(recipe: &str, master_seed: u64, n_train: u64, n_val: u64, split: &str, n_examples: u64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            recipe: recipe.to_string(),
            master_seed,
            n_train,
            n_val,
            sample_rate_hz: SAMPLE_RATE_HZ as u32,
            frame_len: FRAME_LEN,
            split: split.to_string(),
            n_examples,
        }
    }
}

/// Impairment columns of a manifest row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFields {
    pub snr_db: Option<f64>,
    /// `none`, `awgn` or `impulsive`.
    pub noise_kind: String,
    pub impulse_exponent: Option<f64>,
    pub freq_offset_hz: f64,
    pub phase_rad: f64,
    pub fs_offset: f64,
    pub rx_filter_bw_hz: f64,
    pub rx_filter_center_hz: f64,
    pub channel: String,
    pub seed: u64,
}

impl PlanFields {
    pub fn from_plan(plan: &ImpairmentPlan) -> Self {
        Self {
            snr_db: plan.noise.map(|n| n.snr_db),
            noise_kind: plan.noise.map_or("none", |n| n.kind.name()).to_string(),
            impulse_exponent: plan.noise.and_then(|n| n.kind.exponent()),
            freq_offset_hz: plan.freq_offset_hz,
            phase_rad: plan.phase_rad,
            fs_offset: plan.fs_offset,
            rx_filter_bw_hz: plan.rx_filter.bandwidth_hz,
            rx_filter_center_hz: plan.rx_filter.center_hz,
            channel: plan.channel.clone(),
            seed: plan.seed,
        }
    }

    pub fn to_plan(&self) -> Result<ImpairmentPlan> {
        let noise = match (self.noise_kind.as_str(), self.snr_db, self.impulse_exponent) {
            ("none", None, None) => None,
            ("awgn", Some(snr_db), None) => Some(NoiseSpec {
                kind: NoiseKind::Awgn,
                snr_db,
            }),
            ("impulsive", Some(snr_db), Some(exponent)) => Some(NoiseSpec {
                kind: NoiseKind::Impulsive { exponent },
                snr_db,
            }),
            _ => {
                return Err(Error::Integrity(format!(
                    "inconsistent noise fields: {} / {:?} / {:?}",
                    self.noise_kind, self.snr_db, self.impulse_exponent
                )))
            }
        };
        Ok(ImpairmentPlan {
            phase_rad: self.phase_rad,
            freq_offset_hz: self.freq_offset_hz,
            fs_offset: self.fs_offset,
            noise,
            rx_filter: RxFilterSpec {
                center_hz: self.rx_filter_center_hz,
                bandwidth_hz: self.rx_filter_bw_hz,
            },
            channel: self.channel.clone(),
            seed: self.seed,
        })
    }
}

/// One manifest row. Synthetic examples carry the full plan; segmented
/// recordings carry the source offset instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub index: u64,
    pub class: String,
    pub label: Option<usize>,
    #[serde(flatten)]
    pub plan: Option<PlanFields>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_offset: Option<u64>,
}

impl ManifestRow {
    pub fn from_record(rec: &ExampleRecord) -> Self {
        Self {
            index: rec.index,
            class: rec.label.name().to_string(),
            label: Some(rec.label.index()),
            plan: Some(PlanFields::from_plan(&rec.plan)),
            source_offset: None,
        }
    }

    pub fn unlabeled(index: u64, source_offset: u64) -> Self {
        Self {
            index,
            class: UNKNOWN_CLASS.to_string(),
            label: None,
            plan: None,
            source_offset: Some(source_offset),
        }
    }

    /// The row's class, or `None` for unlabeled rows.
    pub fn signal_class(&self) -> Result<Option<SignalClass>> {
        if self.class == UNKNOWN_CLASS {
            return Ok(None);
        }
        let c: SignalClass = self.class.parse()?;
        if self.label.is_some_and(|l| l != c.index()) {
            return Err(Error::Integrity(format!(
                "row {}: label {:?} does not match class {}",
                self.index, self.label, self.class
            )));
        }
        Ok(Some(c))
    }
}

/// Paths of a split's payload and manifest inside `dir`.
pub fn split_paths(dir: &Path, split: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{split}.iqb")), dir.join(format!("{split}.jsonl")))
}

/// Streams frames and rows of one split to disk.
pub struct DatasetWriter {
    iqb: BufWriter<File>,
    jsonl: BufWriter<File>,
    written: u64,
    expected: u64,
}

impl DatasetWriter {
    pub fn create(dir: &Path, header: &ManifestHeader) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let (iqb, jsonl) = split_paths(dir, &header.split);
        let mut w = Self {
            iqb: BufWriter::with_capacity(1 << 20, File::create(iqb)?),
            jsonl: BufWriter::with_capacity(1 << 16, File::create(jsonl)?),
            written: 0,
            expected: header.n_examples,
        };
        serde_json::to_writer(&mut w.jsonl, header)?;
        w.jsonl.write_all(b"\n")?;
        Ok(w)
    }

    pub fn write(&mut self, frame: &IqFrame, row: &ManifestRow) -> Result<()> {
        if row.index != self.written {
            return Err(Error::Integrity(format!(
                "rows out of order: got {}, expected {}",
                row.index, self.written
            )));
        }
        self.iqb.write_all(&frame.to_le_bytes())?;
        serde_json::to_writer(&mut self.jsonl, row)?;
        self.jsonl.write_all(b"\n")?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<u64> {
        if self.written != self.expected {
            return Err(Error::Integrity(format!(
                "wrote {} examples, header promises {}",
                self.written, self.expected
            )));
        }
        self.iqb.flush()?;
        self.jsonl.flush()?;
        Ok(self.written)
    }
}

/// Reads a manifest: header plus all rows.
pub fn read_manifest(path: &Path) -> Result<(ManifestHeader, Vec<ManifestRow>)> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Integrity(format!("{}: empty manifest", path.display())))??;
    let header: ManifestHeader = serde_json::from_str(&first)
        .map_err(|e| Error::Integrity(format!("{}: bad header: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: ManifestRow = serde_json::from_str(&line)
            .map_err(|e| Error::Integrity(format!("{}:{}: {e}", path.display(), n + 2)))?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reads frame `index` from a payload file.
pub fn read_frame(iqb: &Path, index: u64) -> Result<IqFrame> {
    let mut f = File::open(iqb)?;
    let len = f.metadata()?.len();
    let start = index * FRAME_BYTES;
    if start + FRAME_BYTES > len {
        return Err(Error::Integrity(format!(
            "{}: frame {index} beyond end of payload ({len} bytes)",
            iqb.display()
        )));
    }
    f.seek(SeekFrom::Start(start))?;
    let mut buf = vec![0u8; FRAME_BYTES as usize];
    f.read_exact(&mut buf)?;
    frame_from_le_bytes(&buf)
}

pub fn frame_from_le_bytes(bytes: &[u8]) -> Result<IqFrame> {
    let floats: Vec<f32> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    IqFrame::from_interleaved_f32(&floats)
}

/// Result of [`check_integrity`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrityReport {
    pub header: ManifestHeader,
    pub rows: Vec<ManifestRow>,
    pub payload_bytes: u64,
}

/// Verifies that a split's header, rows and payload agree: format version,
/// frame geometry, row count, sequential indices, known classes, payload
/// size and finite samples.
pub fn check_integrity(dir: &Path, split: &str) -> Result<IntegrityReport> {
    let (iqb, jsonl) = split_paths(dir, split);
    let (header, rows) = read_manifest(&jsonl)?;
    let fail = |m: String| Err(Error::Integrity(format!("{split}: {m}")));
    if header.format_version != FORMAT_VERSION {
        return fail(format!("unsupported format version {}", header.format_version));
    }
    if header.frame_len != FRAME_LEN || header.sample_rate_hz != SAMPLE_RATE_HZ as u32 {
        return fail(format!(
            "frame geometry {} @ {} Hz",
            header.frame_len, header.sample_rate_hz
        ));
    }
    if rows.len() as u64 != header.n_examples {
        return fail(format!("{} rows, header says {}", rows.len(), header.n_examples));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.index != i as u64 {
            return fail(format!("row {i} has index {}", r.index));
        }
        r.signal_class()?;
        if let Some(p) = &r.plan {
            p.to_plan()?;
        }
    }
    let payload_bytes = std::fs::metadata(&iqb)?.len();
    if payload_bytes != rows.len() as u64 * FRAME_BYTES {
        return fail(format!(
            "payload holds {payload_bytes} bytes, {} rows need {}",
            rows.len(),
            rows.len() as u64 * FRAME_BYTES
        ));
    }
    let mut reader = BufReader::with_capacity(1 << 20, File::open(&iqb)?);
    let mut buf = vec![0u8; FRAME_BYTES as usize];
    for k in 0..rows.len() {
        reader.read_exact(&mut buf)?;
        let finite = buf
            .chunks_exact(4)
            .all(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]).is_finite());
        if !finite {
            return fail(format!("non-finite sample in frame {k}"));
        }
    }
    Ok(IntegrityReport {
        header,
        rows,
        payload_bytes,
    })
}
