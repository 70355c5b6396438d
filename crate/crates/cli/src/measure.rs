use std::path::Path;

use hfsynth::dataset::io::{read_frame, read_manifest, split_paths};
use hfsynth::dataset::trace_example;
use hfsynth::metrology::{estimate_tone_frequency, mean_power, measure_snr, occupied_bandwidth};
use hfsynth::{Complex64, Error};

use crate::{CmdResult, Failure};

pub fn from_file(path: &Path) -> CmdResult {
    let samples = hfsynth::dataset::parse_raw_iq(&std::fs::read(path)?)?;
    if samples.is_empty() {
        return Err(Failure::Invalid(format!("{} holds no samples", path.display())));
    }
    println!("source: {} ({} samples)", path.display(), samples.len());
    report_signal(&samples);
    Ok(())
}

pub fn from_dataset(dir: &Path, split: &str, index: u64) -> CmdResult {
    let (iqb, jsonl) = split_paths(dir, split);
    let (_, rows) = read_manifest(&jsonl)?;
    let row = rows.get(index as usize).ok_or_else(|| {
        Failure::Usage(format!("{split} has {} examples, index {index} is out of range", rows.len()))
    })?;
    let frame = read_frame(&iqb, index)?;
    println!("source: {} {split}[{index}] class {}", dir.display(), row.class);
    report_signal(frame.samples());

    let (Some(fields), Some(class)) = (&row.plan, row.signal_class()?) else {
        println!("snr: no label");
        return Ok(());
    };
    let plan = fields.to_plan()?;
    let label = plan.noise.map(|n| n.snr_db);
    let trace = trace_example(class, &plan)?;
    let exact = trace.frame.to_le_bytes() == frame.to_le_bytes();
    println!(
        "reference: regenerated from seed {} ({})",
        plan.seed,
        if exact { "bit-exact" } else { "MISMATCH with stored frame" }
    );
    match label {
        Some(l) => println!("snr labeled: {l:.2} dB"),
        None => println!("snr labeled: none (noise-free)"),
    }
    let measured = measure_snr(&trace.pre_noise, &trace.noisy)?;
    println!("snr measured: {}", fmt_db(measured));
    if exact {
        Ok(())
    } else {
        Err(Failure::Invalid("stored frame does not match its regenerated plan".into()))
    }
}

fn report_signal(x: &[Complex64]) {
    let p = mean_power(x).unwrap_or(0.0);
    println!("power: {p:.6} ({})", fmt_db(10.0 * p.log10()));
    if p == 0.0 {
        println!("occupied bandwidth (99%): n/a");
        println!("dominant tone: none");
        return;
    }
    match occupied_bandwidth(x, 0.99) {
        Ok(bw) => println!("occupied bandwidth (99%): {bw:.1} Hz"),
        Err(e) => println!("occupied bandwidth (99%): n/a ({e})"),
    }
    match estimate_tone_frequency(x) {
        Ok(f) => println!("dominant tone: {f:.2} Hz"),
        Err(Error::NoDominantTone) => println!("dominant tone: none"),
        Err(e) => println!("dominant tone: n/a ({e})"),
    }
}

fn fmt_db(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.2} dB")
    } else if v > 0.0 {
        "inf dB".into()
    } else {
        "-inf dB".into()
    }
}
