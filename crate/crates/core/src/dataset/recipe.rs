use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::ChannelSetName;
use crate::impairments::MAX_FREQ_OFFSET_HZ;
use crate::signal::NYQUIST_HZ;

/// Noise settings of a recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseRecipe {
    /// When set, each example picks AWGN or one of the impulsive exponents
    /// with equal probability; otherwise AWGN only.
    #[serde(default)]
    pub impulsive: bool,
    pub snr_min_db: f64,
    pub snr_max_db: f64,
}

/// Which impairments a dataset applies and their ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub name: String,
    /// Tuning offsets are drawn uniformly from `±max`.
    #[serde(default)]
    pub freq_offset_max_hz: Option<f64>,
    #[serde(default)]
    pub phase_offset: bool,
    #[serde(default)]
    pub fs_offset: bool,
    #[serde(default)]
    pub noise: Option<NoiseRecipe>,
    #[serde(default)]
    pub rx_filter: bool,
    #[serde(default)]
    pub fading: Option<ChannelSetName>,
}

impl Recipe {
    /// Command-line name: lower case, words joined by `-`.
    pub fn slug(&self) -> String {
        slugify(&self.name)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(format!("recipe `{}`: {m}", self.name)));
        if self.name.trim().is_empty() {
            return bad("empty name".into());
        }
        if let Some(f) = self.freq_offset_max_hz {
            if !(f.is_finite() && (0.0..=NYQUIST_HZ).contains(&f)) {
                return bad(format!("frequency offset ±{f} Hz"));
            }
        }
        if let Some(n) = &self.noise {
            if !(n.snr_min_db.is_finite() && n.snr_max_db.is_finite() && n.snr_min_db <= n.snr_max_db) {
                return bad(format!("SNR range [{}, {}] dB", n.snr_min_db, n.snr_max_db));
            }
        }
        Ok(())
    }

    /// Parses and validates a custom recipe from JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: Recipe = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }

    /// Names of the enabled impairments, for reports.
    pub fn enabled(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.freq_offset_max_hz.is_some() {
            v.push("frequency offset");
        }
        if self.phase_offset {
            v.push("phase offset");
        }
        if self.fs_offset {
            v.push("fs offset");
        }
        if let Some(n) = &self.noise {
            v.push(if n.impulsive { "awgn/impulsive noise" } else { "awgn" });
        }
        if self.rx_filter {
            v.push("rx filter");
        }
        if self.fading.is_some() {
            v.push("fading");
        }
        v
    }
}

fn slugify(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    out.trim_end_matches('-').to_string()
}

/// The 11 training recipes, each adding one impairment to the previous one.
pub fn recipe_table() -> Vec<Recipe> {
    let mut table = Vec::with_capacity(11);
    let mut r = Recipe {
        name: "No Augmentation".into(),
        freq_offset_max_hz: None,
        phase_offset: false,
        fs_offset: false,
        noise: None,
        rx_filter: false,
        fading: None,
    };
    table.push(r.clone());

    let mut step = |name: &str, f: &dyn Fn(&mut Recipe)| {
        r.name = name.into();
        f(&mut r);
        table.push(r.clone());
    };
    step("Frequency Offset", &|r| r.freq_offset_max_hz = Some(MAX_FREQ_OFFSET_HZ));
    step("Phase Offset", &|r| r.phase_offset = true);
    step("fs Offset", &|r| r.fs_offset = true);
    step("AWGN, high SNR", &|r| {
        r.noise = Some(NoiseRecipe {
            impulsive: false,
            snr_min_db: 5.0,
            snr_max_db: 25.0,
        })
    });
    step("AWGN, full SNR", &|r| {
        r.noise = Some(NoiseRecipe {
            impulsive: false,
            snr_min_db: -15.0,
            snr_max_db: 25.0,
        })
    });
    step("Impulsive Noise", &|r| {
        if let Some(n) = r.noise.as_mut() {
            n.impulsive = true;
        }
    });
    step("RX Filter", &|r| r.rx_filter = true);
    step("CCIR Fading", &|r| r.fading = Some(ChannelSetName::Ccir520));
    step("ITU Fading", &|r| r.fading = Some(ChannelSetName::Itu1487));
    step("Extended Fading", &|r| r.fading = Some(ChannelSetName::Extended));
    table
}

/// Finds a recipe by display name or slug, ignoring case.
pub fn find_recipe(name: &str) -> Result<Recipe> {
    let key = slugify(name);
    recipe_table()
        .into_iter()
        .find(|r| r.slug() == key)
        .ok_or_else(|| Error::UnknownRecipe(name.to_string()))
}
