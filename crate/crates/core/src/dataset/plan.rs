use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::recipe::Recipe;
use crate::error::{Error, Result};
use crate::fading::{channel_set, find_channel, NO_CHANNEL};
use crate::impairments::{NoiseKind, NoiseSpec, RxFilterSpec, FS_OFFSETS, IMPULSE_EXPONENTS};
use crate::rng::RngStream;
use crate::signal::{SignalClass, NYQUIST_HZ, SAMPLE_RATE_HZ};
use crate::waveforms::nominal_bandwidth;

/// Every randomly drawn value applied to one example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpairmentPlan {
    pub phase_rad: f64,
    pub freq_offset_hz: f64,
    pub fs_offset: f64,
    pub noise: Option<NoiseSpec>,
    /// Full band when the filter is disabled.
    pub rx_filter: RxFilterSpec,
    /// Channel name, or `"none"`.
    pub channel: String,
    /// Seed of the example's random stream.
    pub seed: u64,
}

impl ImpairmentPlan {
    /// No impairment at all.
    pub fn identity(seed: u64) -> Self {
        Self {
            phase_rad: 0.0,
            freq_offset_hz: 0.0,
            fs_offset: 0.0,
            noise: None,
            rx_filter: RxFilterSpec::full_band(),
            channel: NO_CHANNEL.to_string(),
            seed,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.seed)
    }

    /// Checks every field against the recipe's enabled ranges; disabled
    /// impairments must hold their identity value.
    pub fn check(&self, recipe: &Recipe, class: SignalClass) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidParameter(format!("plan outside recipe `{}`: {m}", recipe.name)));

        match recipe.freq_offset_max_hz {
            Some(max) if self.freq_offset_hz.abs() <= max => {}
            None if self.freq_offset_hz == 0.0 => {}
            _ => return fail(format!("frequency offset {}", self.freq_offset_hz)),
        }
        let phase_ok = if recipe.phase_offset {
            (0.0..2.0 * PI).contains(&self.phase_rad)
        } else {
            self.phase_rad == 0.0
        };
        if !phase_ok {
            return fail(format!("phase {}", self.phase_rad));
        }
        let fs_ok = if recipe.fs_offset {
            FS_OFFSETS.contains(&self.fs_offset)
        } else {
            self.fs_offset == 0.0
        };
        if !fs_ok {
            return fail(format!("fs offset {}", self.fs_offset));
        }
        match (&recipe.noise, &self.noise) {
            (None, None) => {}
            (Some(r), Some(n)) => {
                if !(r.snr_min_db..=r.snr_max_db).contains(&n.snr_db) {
                    return fail(format!("SNR {}", n.snr_db));
                }
                match n.kind {
                    NoiseKind::Awgn => {}
                    NoiseKind::Impulsive { exponent } if r.impulsive && IMPULSE_EXPONENTS.contains(&exponent) => {}
                    k => return fail(format!("noise kind {k:?}")),
                }
            }
            (_, n) => return fail(format!("noise {n:?}")),
        }
        if recipe.rx_filter {
            self.rx_filter.validate()?;
            let bw = self.rx_filter.bandwidth_hz;
            if bw < nominal_bandwidth(&class.spec()) || bw > SAMPLE_RATE_HZ {
                return fail(format!("filter bandwidth {bw}"));
            }
        } else if self.rx_filter != RxFilterSpec::full_band() {
            return fail("filter enabled".into());
        }
        match recipe.fading {
            None if self.channel == NO_CHANNEL => {}
            Some(set) if self.channel == NO_CHANNEL || channel_set(set).get(&self.channel).is_some() => {}
            _ => return fail(format!("channel {}", self.channel)),
        }
        Ok(())
    }
}

/// Draws a plan for one example. Each impairment uses its own child stream
/// of `rng`, so enabling one impairment never changes another's value.
pub fn sample_impairment_plan(recipe: &Recipe, class: SignalClass, rng: &RngStream) -> ImpairmentPlan {
    let mut plan = ImpairmentPlan::identity(rng.seed());
    if let Some(max) = recipe.freq_offset_max_hz {
        plan.freq_offset_hz = rng.child("freq_offset").uniform_range(-max, max);
    }
    if recipe.phase_offset {
        plan.phase_rad = rng.child("phase").uniform_range(0.0, 2.0 * PI);
    }
    if recipe.fs_offset {
        let mut r = rng.child("fs_offset");
        plan.fs_offset = FS_OFFSETS[r.index(FS_OFFSETS.len())];
    }
    if let Some(n) = &recipe.noise {
        let mut r = rng.child("snr");
        let snr_db = r.uniform_range(n.snr_min_db, n.snr_max_db);
        let kind = if n.impulsive {
            match r.index(1 + IMPULSE_EXPONENTS.len()) {
                0 => NoiseKind::Awgn,
                k => NoiseKind::Impulsive {
                    exponent: IMPULSE_EXPONENTS[k - 1],
                },
            }
        } else {
            NoiseKind::Awgn
        };
        plan.noise = Some(NoiseSpec { kind, snr_db });
    }
    if recipe.rx_filter {
        let spec = class.spec();
        let mut r = rng.child("rx_filter");
        let bw = r.uniform_range(nominal_bandwidth(&spec), SAMPLE_RATE_HZ);
        let center = (spec.center_hz() + plan.freq_offset_hz) / (1.0 + plan.fs_offset);
        let limit = NYQUIST_HZ - bw / 2.0;
        plan.rx_filter = RxFilterSpec {
            center_hz: center.clamp(-limit, limit),
            bandwidth_hz: bw,
        };
    }
    if let Some(set) = recipe.fading {
        let set = channel_set(set);
        let pick = rng.child("channel").index(set.choices());
        if let Some(c) = set.channels.get(pick) {
            plan.channel = c.name.clone();
        }
    }
    plan
}

/// Resolves the plan's channel to parameters (`None` for no channel).
pub fn plan_channel(plan: &ImpairmentPlan) -> Result<Option<crate::fading::WattersonParams>> {
    find_channel(&plan.channel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::recipe::{find_recipe, recipe_table};

    #[test]
    fn no_augmentation_gives_identity() {
        let r = find_recipe("no-augmentation").unwrap();
        for i in 0..20 {
            let p = sample_impairment_plan(&r, SignalClass::ALL[i], &RngStream::new(i as u64));
            assert!(p.is_identity());
            assert_eq!(p.seed, i as u64);
        }
    }

    #[test]
    fn plans_stay_in_bounds() {
        for recipe in recipe_table() {
            for i in 0..400u64 {
                let class = SignalClass::ALL[i as usize % 20];
                let p = sample_impairment_plan(&recipe, class, &RngStream::new(1000 + i));
                p.check(&recipe, class).unwrap();
            }
        }
    }

    #[test]
    fn fs_offsets_are_uniform() {
        let r = find_recipe("fs Offset").unwrap();
        let mut counts = [0usize; 5];
        let n = 100_000;
        for i in 0..n {
            let p = sample_impairment_plan(&r, SignalClass::Psk31, &RngStream::new(i));
            counts[FS_OFFSETS.iter().position(|v| *v == p.fs_offset).unwrap()] += 1;
        }
        let e = n as f64 / 5.0;
        let chi2: f64 = counts.iter().map(|c| (*c as f64 - e).powi(2) / e).sum();
        // chi-square, 4 degrees of freedom, alpha = 0.01
        assert!(chi2 < 13.277, "{counts:?} chi2 {chi2}");
    }

    #[test]
    fn impulsive_recipe_draws_both_kinds() {
        let r = find_recipe("Impulsive Noise").unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0..200 {
            let p = sample_impairment_plan(&r, SignalClass::Psk31, &RngStream::new(i));
            let n = p.noise.unwrap();
            seen.insert(format!("{:?}", n.kind));
        }
        assert_eq!(seen.len(), 4, "{seen:?}");
    }

    #[test]
    fn disabled_fields_fail_the_check() {
        let r = find_recipe("no-augmentation").unwrap();
        let mut p = ImpairmentPlan::identity(0);
        p.freq_offset_hz = 3.0;
        assert!(p.check(&r, SignalClass::Psk31).is_err());
        let mut p = ImpairmentPlan::identity(0);
        p.channel = "Good".into();
        assert!(p.check(&r, SignalClass::Psk31).is_err());
    }
}
