use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use hfsynth::dataset::io::{check_integrity, split_paths, IntegrityReport, ManifestRow, PlanFields};
use hfsynth::dataset::SEGMENT_SPLIT;
use hfsynth::{Error, SignalClass, SAMPLE_RATE_HZ};

use crate::{display_list, CmdResult, Failure};

/// Width of the SNR histogram bins in dB.
pub const SNR_BIN_DB: f64 = 5.0;

const SPLITS: [&str; 3] = ["train", "val", SEGMENT_SPLIT];

pub fn run(dir: &Path, split: Option<&str>, plot_data: Option<&Path>) -> CmdResult {
    let splits: Vec<&str> = match split {
        Some(s) => vec![s],
        None => SPLITS
            .into_iter()
            .filter(|s| split_paths(dir, s).1.exists())
            .collect(),
    };
    if splits.is_empty() {
        return Err(Failure::Io(format!("no dataset splits found in {}", dir.display())));
    }
    let mut snr_total: BTreeMap<i64, u64> = BTreeMap::new();
    let mut failed = Vec::new();
    for s in splits {
        match check_integrity(dir, s) {
            Ok(report) => {
                print!("{}", summarize(s, &report));
                for (bin, n) in snr_histogram(&report.rows) {
                    *snr_total.entry(bin).or_default() += n;
                }
            }
            Err(Error::Io(e)) => return Err(Failure::Io(format!("{s}: {e}"))),
            Err(e) => {
                println!("== {s}\nintegrity: FAILED ({e})\n");
                failed.push(s);
            }
        }
    }
    if let Some(path) = plot_data {
        let mut csv = String::from("snr_bin,count\n");
        for (bin, n) in &snr_total {
            let _ = writeln!(csv, "{},{n}", *bin as f64 * SNR_BIN_DB);
        }
        std::fs::write(path, csv)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("integrity check failed for {}", failed.join(", "))))
    }
}

/// Lower edge of each occupied SNR bin, in units of [`SNR_BIN_DB`].
fn snr_histogram(rows: &[ManifestRow]) -> BTreeMap<i64, u64> {
    let mut h = BTreeMap::new();
    for snr in rows.iter().filter_map(|r| r.plan.as_ref()?.snr_db) {
        *h.entry((snr / SNR_BIN_DB).floor() as i64).or_default() += 1;
    }
    h
}

/// Impairments that are active in at least one row, named as in
/// `Recipe::enabled`.
pub fn observed_impairments(rows: &[ManifestRow]) -> Vec<&'static str> {
    let plans: Vec<&PlanFields> = rows.iter().filter_map(|r| r.plan.as_ref()).collect();
    let any = |f: &dyn Fn(&PlanFields) -> bool| plans.iter().any(|p| f(p));
    let mut v = Vec::new();
    if any(&|p| p.freq_offset_hz != 0.0) {
        v.push("frequency offset");
    }
    if any(&|p| p.phase_rad != 0.0) {
        v.push("phase offset");
    }
    if any(&|p| p.fs_offset != 0.0) {
        v.push("fs offset");
    }
    if any(&|p| p.noise_kind == "impulsive") {
        v.push("awgn/impulsive noise");
    } else if any(&|p| p.noise_kind == "awgn") {
        v.push("awgn");
    }
    if any(&|p| p.rx_filter_bw_hz < SAMPLE_RATE_HZ || p.rx_filter_center_hz != 0.0) {
        v.push("rx filter");
    }
    if any(&|p| p.channel != "none") {
        v.push("fading");
    }
    v
}

fn summarize(split: &str, report: &IntegrityReport) -> String {
    let h = &report.header;
    let rows = &report.rows;
    let mut out = String::new();
    let _ = writeln!(out, "== {split}");
    let _ = writeln!(
        out,
        "recipe: {}  seed: {}  examples: {}  format: {}",
        h.recipe, h.master_seed, h.n_examples, h.format_version
    );
    let _ = writeln!(out, "integrity: OK ({} payload bytes)", report.payload_bytes);

    let mut classes: BTreeMap<String, u64> = BTreeMap::new();
    for r in rows {
        *classes.entry(r.class.clone()).or_default() += 1;
    }
    let _ = writeln!(out, "classes:");
    let ordered = SignalClass::ALL
        .iter()
        .map(|c| c.name().to_string())
        .chain(classes.keys().filter(|k| k.parse::<SignalClass>().is_err()).cloned())
        .collect::<Vec<_>>();
    for name in ordered {
        if let Some(n) = classes.get(&name) {
            let _ = writeln!(out, "  {name:<20} {n}");
        }
    }

    let plans: Vec<&PlanFields> = rows.iter().filter_map(|r| r.plan.as_ref()).collect();
    if plans.is_empty() {
        let _ = writeln!(out);
        return out;
    }
    let _ = writeln!(out, "impairments: {}", display_list(&observed_impairments(rows)));

    let _ = writeln!(out, "snr_db ({SNR_BIN_DB} dB bins):");
    for (bin, n) in snr_histogram(rows) {
        let lo = bin as f64 * SNR_BIN_DB;
        let _ = writeln!(out, "  [{lo:>4}, {:>4})  {n}", lo + SNR_BIN_DB);
    }
    let no_noise = plans.iter().filter(|p| p.snr_db.is_none()).count();
    if no_noise > 0 {
        let _ = writeln!(out, "  no noise    {no_noise}");
    }

    let mut kinds: BTreeMap<String, u64> = BTreeMap::new();
    for p in &plans {
        let k = match p.impulse_exponent {
            Some(x) => format!("{} x={x}", p.noise_kind),
            None => p.noise_kind.clone(),
        };
        *kinds.entry(k).or_default() += 1;
    }
    let _ = writeln!(out, "noise: {}", counts(&kinds));
    let mut channels: BTreeMap<String, u64> = BTreeMap::new();
    for p in &plans {
        *channels.entry(p.channel.clone()).or_default() += 1;
    }
    let _ = writeln!(out, "channel: {}", counts(&channels));

    let fields: [(&str, fn(&PlanFields) -> f64); 5] = [
        ("freq_offset_hz", |p| p.freq_offset_hz),
        ("phase_rad", |p| p.phase_rad),
        ("fs_offset", |p| p.fs_offset),
        ("rx_filter_bw_hz", |p| p.rx_filter_bw_hz),
        ("rx_filter_center_hz", |p| p.rx_filter_center_hz),
    ];
    for (name, get) in fields {
        let v: Vec<f64> = plans.iter().map(|p| get(p)).collect();
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let _ = writeln!(out, "{name:<20} min {min:>10.4}  max {max:>10.4}  mean {mean:>10.4}");
    }
    let _ = writeln!(out);
    out
}

fn counts(m: &BTreeMap<String, u64>) -> String {
    m.iter().map(|(k, n)| format!("{k}={n}")).collect::<Vec<_>>().join(" ")
}
