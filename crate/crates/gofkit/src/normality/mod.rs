//! Departure statistics against a fitted normal model, each returning a
//! uniform [`TestResult`], plus the battery runner that evaluates them as a
//! set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::binning::{build_classes, BinningRule};
use crate::error::Error;
use crate::sample::{FittedNormal, Sample};

pub mod anderson_darling;
pub mod chi_squared;
pub mod cramer_von_mises;
pub mod jarque_bera;
pub mod kolmogorov;
pub mod shapiro_wilk;
pub mod zscores;

pub use anderson_darling::anderson_darling;
pub use chi_squared::chi_squared_test;
pub use cramer_von_mises::cramer_von_mises;
pub use jarque_bera::jarque_bera;
pub use kolmogorov::{
    ks_p_value, ks_p_value_finite_n, ks_statistics, kuiper_p_value, KsDecomposition,
};
pub use shapiro_wilk::wilks_shapiro;
pub use zscores::{z_statistic, ZStatistic};

/// Identifies one statistic in the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    ChiSquared,
    KsDminus,
    KsDplus,
    KsD,
    KuiperV,
    AndersonDarling,
    WilksShapiro,
    CramerVonMises,
    JarqueBera,
    ZMean,
    ZVariance,
    ZStdDev,
    ZSkewness,
    ZKurtosis,
}

impl TestKind {
    /// Human-readable name used in the text report.
    pub fn display_name(&self) -> &'static str {
        match self {
            TestKind::ChiSquared => "Chi-Squared",
            TestKind::KsDminus => "Kolmogorov-Smirnov D-",
            TestKind::KsDplus => "Kolmogorov-Smirnov D+",
            TestKind::KsD => "Kolmogorov-Smirnov",
            TestKind::KuiperV => "Kuiper",
            TestKind::AndersonDarling => "Anderson-Darling",
            TestKind::WilksShapiro => "Wilks-Shapiro",
            TestKind::CramerVonMises => "Cramer-von Mises",
            TestKind::JarqueBera => "Jarque-Bera",
            TestKind::ZMean => "Z Mean",
            TestKind::ZVariance => "Z Variance",
            TestKind::ZStdDev => "Z St.Dev",
            TestKind::ZSkewness => "Z Skewness",
            TestKind::ZKurtosis => "Z Kurtosis",
        }
    }
}

/// One p-value with the tag of the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub method: String,
    pub p: f64,
}

impl PValue {
    pub fn new(method: &str, p: f64) -> Self {
        PValue {
            method: method.to_string(),
            p: p.clamp(0.0, 1.0),
        }
    }
}

/// Outcome of a single test: statistic, p-value(s), and the decision at the
/// significance level the battery ran with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: TestKind,
    pub statistic: f64,
    /// Primary p-value first; alternates follow with their method tags.
    pub p_values: Vec<PValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<usize>,
    pub alpha: f64,
    pub reject: bool,
    /// True when the statistic compares the sample against parameters that
    /// were estimated from the same sample, so the comparison is circular.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub self_referential: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, f64>,
}

impl TestResult {
    pub fn new(
        kind: TestKind,
        statistic: f64,
        p_values: Vec<PValue>,
        df: Option<usize>,
        alpha: f64,
    ) -> Self {
        let reject = p_values.first().map(|p| p.p < alpha).unwrap_or(false);
        TestResult {
            kind,
            statistic,
            p_values,
            df,
            alpha,
            reject,
            self_referential: false,
            metadata: BTreeMap::new(),
        }
    }

    /// The p-value decisions are made on.
    pub fn primary_p(&self) -> f64 {
        self.p_values.first().map(|p| p.p).unwrap_or(f64::NAN)
    }
}

/// Battery slot: a test either produced a result or failed on its own
/// without aborting the rest of the battery.
#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub kind: TestKind,
    pub result: Result<TestResult, Error>,
}

/// Battery configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryConfig {
    pub alpha: f64,
    pub rule: BinningRule,
    /// Adds Kuiper, Cramer-von Mises, the one-sided KS statistics, and the
    /// location/scale z tests to the default seven-test battery.
    pub extended: bool,
    /// True when mu/sigma were supplied externally rather than fitted from
    /// the sample; controls the self-referential flag on the location/scale
    /// z tests.
    pub external_model: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            alpha: 0.05,
            rule: BinningRule::DataplotWidth,
            extended: false,
            external_model: false,
        }
    }
}

/// The seven-test battery in report row order.
pub const DEFAULT_BATTERY: [TestKind; 7] = [
    TestKind::KsD,
    TestKind::AndersonDarling,
    TestKind::ChiSquared,
    TestKind::WilksShapiro,
    TestKind::ZSkewness,
    TestKind::ZKurtosis,
    TestKind::JarqueBera,
];

/// Tests added by `extended`.
pub const EXTENDED_TESTS: [TestKind; 7] = [
    TestKind::KuiperV,
    TestKind::CramerVonMises,
    TestKind::KsDminus,
    TestKind::KsDplus,
    TestKind::ZMean,
    TestKind::ZVariance,
    TestKind::ZStdDev,
];

/// Runs the battery against `model`. Individual test failures land in their
/// slot; only invalid top-level input aborts.
pub fn run_battery(
    sample: &Sample,
    model: &FittedNormal,
    config: &BatteryConfig,
) -> Result<Vec<TestOutcome>, Error> {
    if !(config.alpha > 0.0 && config.alpha <= 0.5) {
        return Err(Error::domain(format!(
            "alpha must be in (0, 0.5], got {}",
            config.alpha
        )));
    }
    let mut kinds: Vec<TestKind> = DEFAULT_BATTERY.to_vec();
    if config.extended {
        kinds.extend_from_slice(&EXTENDED_TESTS);
    }
    let mut outcomes = evaluate_kinds(&kinds, sample, model, config);
    if !config.external_model {
        for outcome in &mut outcomes {
            if matches!(
                outcome.kind,
                TestKind::ZMean | TestKind::ZVariance | TestKind::ZStdDev
            ) {
                if let Ok(r) = &mut outcome.result {
                    r.self_referential = true;
                }
            }
        }
    }
    Ok(outcomes)
}

#[cfg(feature = "parallel")]
fn evaluate_kinds(
    kinds: &[TestKind],
    sample: &Sample,
    model: &FittedNormal,
    config: &BatteryConfig,
) -> Vec<TestOutcome> {
    use rayon::prelude::*;
    kinds
        .par_iter()
        .map(|&kind| TestOutcome {
            kind,
            result: evaluate_one(kind, sample, model, config),
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_kinds(
    kinds: &[TestKind],
    sample: &Sample,
    model: &FittedNormal,
    config: &BatteryConfig,
) -> Vec<TestOutcome> {
    kinds
        .iter()
        .map(|&kind| TestOutcome {
            kind,
            result: evaluate_one(kind, sample, model, config),
        })
        .collect()
}

fn evaluate_one(
    kind: TestKind,
    sample: &Sample,
    model: &FittedNormal,
    config: &BatteryConfig,
) -> Result<TestResult, Error> {
    let alpha = config.alpha;
    match kind {
        TestKind::ChiSquared => {
            let fc = build_classes(sample, model, config.rule)?;
            chi_squared_test(&fc, 2, alpha)
        }
        TestKind::KsD | TestKind::KsDminus | TestKind::KsDplus | TestKind::KuiperV => {
            let ks = ks_statistics(sample, model);
            let n = sample.n();
            Ok(match kind {
                TestKind::KsD => ks.d_result(n, alpha),
                TestKind::KsDminus => ks.one_sided_result(TestKind::KsDminus, n, alpha),
                TestKind::KsDplus => ks.one_sided_result(TestKind::KsDplus, n, alpha),
                _ => ks.kuiper_result(n, alpha),
            })
        }
        TestKind::AndersonDarling => anderson_darling(sample, model, alpha),
        TestKind::WilksShapiro => wilks_shapiro(sample, alpha),
        TestKind::CramerVonMises => cramer_von_mises(sample, model, alpha),
        TestKind::JarqueBera => jarque_bera(sample, alpha),
        TestKind::ZMean
        | TestKind::ZVariance
        | TestKind::ZStdDev
        | TestKind::ZSkewness
        | TestKind::ZKurtosis => z_statistic(kind.try_into()?, sample, model, alpha),
    }
}

/// Kinds whose null hypothesis was rejected, ignoring failed slots and
/// self-referential comparisons.
pub fn rejected_tests(outcomes: &[TestOutcome]) -> Vec<TestKind> {
    outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .filter(|r| r.reject && !r.self_referential)
        .map(|r| r.kind)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near_normal() -> Sample {
        let values: Vec<f64> = (1..=40)
            .map(|i| {
                let p = (i as f64 - 0.375) / 40.25;
                // rough normal scores through the logistic approximation
                (p / (1.0 - p)).ln() / 1.702
            })
            .collect();
        Sample::new(&values, "near-normal").unwrap()
    }

    #[test]
    fn battery_runs_default_seven_in_order() {
        let s = near_normal();
        let model = s.fit_normal().unwrap();
        let out = run_battery(&s, &model, &BatteryConfig::default()).unwrap();
        let kinds: Vec<TestKind> = out.iter().map(|o| o.kind).collect();
        assert_eq!(kinds, DEFAULT_BATTERY.to_vec());
        for o in &out {
            let r = o.result.as_ref().unwrap_or_else(|e| panic!("{:?}: {e}", o.kind));
            for p in &r.p_values {
                assert!((0.0..=1.0).contains(&p.p), "{:?} {}", o.kind, p.p);
            }
        }
        assert!(rejected_tests(&out).is_empty());
    }

    #[test]
    fn extended_battery_marks_self_referential() {
        let s = near_normal();
        let model = s.fit_normal().unwrap();
        let cfg = BatteryConfig {
            extended: true,
            ..Default::default()
        };
        let out = run_battery(&s, &model, &cfg).unwrap();
        assert_eq!(out.len(), 14);
        let zmean = out
            .iter()
            .find(|o| o.kind == TestKind::ZMean)
            .unwrap()
            .result
            .as_ref()
            .unwrap();
        assert!(zmean.self_referential);
        assert!(zmean.statistic.abs() < 1e-12);

        let ext_cfg = BatteryConfig {
            extended: true,
            external_model: true,
            ..Default::default()
        };
        let model = FittedNormal::new(0.5, 2.0).unwrap();
        let out = run_battery(&s, &model, &ext_cfg).unwrap();
        let zmean = out
            .iter()
            .find(|o| o.kind == TestKind::ZMean)
            .unwrap()
            .result
            .as_ref()
            .unwrap();
        assert!(!zmean.self_referential);
    }

    #[test]
    fn battery_rejects_bad_alpha() {
        let s = near_normal();
        let model = s.fit_normal().unwrap();
        for alpha in [0.0, -0.1, 0.51, f64::NAN] {
            let cfg = BatteryConfig {
                alpha,
                ..Default::default()
            };
            assert!(run_battery(&s, &model, &cfg).is_err(), "alpha={alpha}");
        }
    }

    #[test]
    fn single_test_failure_stays_in_slot() {
        // n = 4 is too small for Wilks-Shapiro's sibling z tests to fail,
        // but small enough that chi-squared binning collapses
        let s = Sample::new(&[1.0, 2.0, 3.0, 4.0], "tiny").unwrap();
        let model = s.fit_normal().unwrap();
        let out = run_battery(&s, &model, &BatteryConfig::default()).unwrap();
        assert_eq!(out.len(), 7);
        let cs = out.iter().find(|o| o.kind == TestKind::ChiSquared).unwrap();
        assert!(cs.result.is_err());
        let ks = out.iter().find(|o| o.kind == TestKind::KsD).unwrap();
        assert!(ks.result.is_ok());
    }
}
