//! Monte-Carlo size calibration: run the battery over many seeded
//! standard-normal samples and tally how often each test rejects at its
//! nominal level.
//!
//! Replicates are embarrassingly parallel; each one derives its generator
//! from (seed, replicate index) so the tally is identical whether the sweep
//! runs on one thread or many.

use std::collections::BTreeMap;

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::normality::{run_battery, BatteryConfig, TestKind};
use crate::sample::Sample;

/// Sweep parameters.
#[derive(Debug, Clone, Copy)]
pub struct CalibrationConfig {
    /// Observations per replicate.
    pub n: usize,
    pub replicates: usize,
    pub battery: BatteryConfig,
    pub seed: u64,
}

/// Tally of rejections (and per-test failures) over the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionRates {
    pub replicates: usize,
    pub rejections: BTreeMap<TestKind, usize>,
    pub errors: BTreeMap<TestKind, usize>,
}

impl RejectionRates {
    /// Fraction of replicates on which `kind` rejected.
    pub fn rate(&self, kind: TestKind) -> f64 {
        *self.rejections.get(&kind).unwrap_or(&0) as f64 / self.replicates as f64
    }
}

/// Runs the sweep. The model is refit to every replicate (plug-in mode),
/// matching how the battery screens real data.
pub fn rejection_rates(config: &CalibrationConfig) -> Result<RejectionRates, Error> {
    if config.n < 5 || config.replicates == 0 {
        return Err(Error::domain("calibration needs n >= 5 and replicates >= 1"));
    }
    let tallies = run_replicates(config)?;
    let mut rejections = BTreeMap::new();
    let mut errors = BTreeMap::new();
    for replicate in tallies {
        for (kind, rejected) in replicate {
            match rejected {
                Some(true) => *rejections.entry(kind).or_insert(0) += 1,
                Some(false) => {}
                None => *errors.entry(kind).or_insert(0) += 1,
            }
        }
    }
    Ok(RejectionRates {
        replicates: config.replicates,
        rejections,
        errors,
    })
}

type ReplicateTally = Vec<(TestKind, Option<bool>)>;

fn one_replicate(config: &CalibrationConfig, index: usize) -> Result<ReplicateTally, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let values: Vec<f64> = StandardNormal
        .sample_iter(&mut rng)
        .take(config.n)
        .collect();
    let sample = Sample::new(&values, format!("replicate-{index}"))?;
    let model = sample.fit_normal()?;
    let battery = BatteryConfig {
        external_model: false,
        ..config.battery
    };
    let outcomes = run_battery(&sample, &model, &battery)?;
    Ok(outcomes
        .into_iter()
        .map(|o| {
            let flag = o
                .result
                .as_ref()
                .ok()
                .map(|r| r.reject && !r.self_referential);
            (o.kind, flag)
        })
        .collect())
}

#[cfg(feature = "parallel")]
fn run_replicates(config: &CalibrationConfig) -> Result<Vec<ReplicateTally>, Error> {
    use rayon::prelude::*;
    (0..config.replicates)
        .into_par_iter()
        .map(|i| one_replicate(config, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_replicates(config: &CalibrationConfig) -> Result<Vec<ReplicateTally>, Error> {
    (0..config.replicates)
        .map(|i| one_replicate(config, i))
        .collect()
}
