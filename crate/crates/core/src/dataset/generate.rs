use std::path::Path;

use rayon::prelude::*;

use super::io::{DatasetWriter, ManifestHeader, ManifestRow};
use super::plan::sample_impairment_plan;
use super::recipe::Recipe;
use super::synth::{synthesize_example, ExampleRecord};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::signal::SignalClass;

/// Examples synthesized per parallel batch before they are written.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
        }
    }
}

/// Summary of a generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub recipe: String,
    pub master_seed: u64,
    pub n_train: u64,
    pub n_val: u64,
    pub format_version: u32,
    pub train: Vec<ManifestRow>,
    pub val: Vec<ManifestRow>,
}

/// Class of example `index`: round-robin over the 20 classes.
pub fn class_for_index(index: u64) -> SignalClass {
    SignalClass::ALL[(index % SignalClass::COUNT as u64) as usize]
}

/// Random stream of one example. Training and validation use disjoint
/// seed domains.
pub fn example_stream(master_seed: u64, split: Split, index: u64) -> RngStream {
    RngStream::new(master_seed).child(split.name()).derive(index)
}

/// Rebuilds example `index` of a split from the master seed alone.
pub fn regenerate_example(recipe: &Recipe, master_seed: u64, split: Split, index: u64) -> Result<ExampleRecord> {
    let class = class_for_index(index);
    let plan = sample_impairment_plan(recipe, class, &example_stream(master_seed, split, index));
    debug_assert!(plan.check(recipe, class).is_ok());
    synthesize_example(class, &plan, index)
}

fn write_split(
    recipe: &Recipe,
    master_seed: u64,
    split: Split,
    header: &ManifestHeader,
    out_dir: &Path,
    pool: &rayon::ThreadPool,
) -> Result<Vec<ManifestRow>> {
    let mut writer = DatasetWriter::create(out_dir, header)?;
    let n = header.n_examples;
    let mut rows = Vec::with_capacity(n as usize);
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let batch: Vec<Result<ExampleRecord>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| {
                    let rec = regenerate_example(recipe, master_seed, split, i)?;
                    rec.plan.check(recipe, rec.label)?;
                    Ok(rec)
                })
                .collect()
        });
        for rec in batch {
            let rec = rec?;
            let row = ManifestRow::from_record(&rec);
            writer.write(&rec.frame, &row)?;
            rows.push(row);
        }
        start = end;
    }
    writer.finish()?;
    Ok(rows)
}

/// Generates the train and validation splits of `recipe` into `out_dir`
/// using `parallelism` worker threads. The output is byte-identical for
/// any degree of parallelism.
pub fn generate_dataset(
    recipe: &Recipe,
    n_train: u64,
    n_val: u64,
    master_seed: u64,
    out_dir: &Path,
    parallelism: usize,
) -> Result<DatasetManifest> {
    recipe.validate()?;
    if n_train == 0 && n_val == 0 {
        return Err(Error::InvalidParameter("nothing to generate".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;

    let mut splits = Vec::new();
    for (split, count) in [(Split::Train, n_train), (Split::Val, n_val)] {
        let header = ManifestHeader::new(&recipe.name, master_seed, n_train, n_val, split.name(), count);
        splits.push(write_split(recipe, master_seed, split, &header, out_dir, &pool)?);
    }
    let val = splits.pop().unwrap_or_default();
    let train = splits.pop().unwrap_or_default();
    Ok(DatasetManifest {
        recipe: recipe.name.clone(),
        master_seed,
        n_train,
        n_val,
        format_version: super::io::FORMAT_VERSION,
        train,
        val,
    })
}
