//! Recipes, per-example impairment plans, the synthesis chain, dataset
//! files and recording segmentation.

mod generate;
pub mod io;
mod plan;
mod recipe;
mod segment;
mod synth;

pub use generate::{
    class_for_index, example_stream, generate_dataset, regenerate_example, DatasetManifest, Split,
};
pub use plan::{plan_channel, sample_impairment_plan, ImpairmentPlan};
pub use recipe::{find_recipe, recipe_table, NoiseRecipe, Recipe};
pub use segment::{parse_raw_iq, segment_recording, write_segments, SEGMENT_SPLIT};
pub use synth::{
    synthesize_example, trace_example, ExampleRecord, ExampleTrace, CHANNEL_HISTORY,
    FILTER_MARGIN, PRE_NOISE_LEN, SOURCE_LEN,
};
