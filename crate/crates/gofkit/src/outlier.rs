//! Grubbs extreme-deviation outlier tests and the iterative
//! detect-remove-retest screening loop.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::normality::{run_battery, BatteryConfig, TestOutcome};
use crate::sample::Sample;
use crate::special::{student_t_tail, TailKind};

/// Which extreme the test inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrubbsVariant {
    Min,
    Max,
    TwoSided,
}

/// Result of one Grubbs test.
///
/// `p` comes from the linear t-transform G √(n(n-2))/(n-1); `p_exact` from
/// the algebraic inversion of the critical-value relation,
/// t² = n(n-2)G² / ((n-1)² - nG²). The transform is a large-n shortcut; the
/// two diverge quickly once G is a few sample deviations out, with
/// `p_exact` always the smaller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrubbsResult {
    pub variant: GrubbsVariant,
    /// Largest deviation from the mean in units of the sample standard
    /// deviation, per the variant.
    pub g: f64,
    /// Primary p-value (linear transform).
    pub p: f64,
    /// Exact-inversion p-value; 0 when (n-1)² <= nG².
    pub p_exact: f64,
    pub suspect_value: f64,
    /// Index of the suspect in sorted order.
    pub suspect_index: usize,
}

/// Grubbs statistic for `variant` with both p-values.
pub fn grubbs(sample: &Sample, variant: GrubbsVariant) -> Result<GrubbsResult, Error> {
    let n = sample.n();
    if n < 4 {
        return Err(Error::TooFewObservations { min: 4, got: n });
    }
    let m = sample.moments()?;
    let g_min = (m.mean - sample.min()) / m.s;
    let g_max = (sample.max() - m.mean) / m.s;
    // two-sided ties break toward the maximum
    let (g, suspect_index) = match variant {
        GrubbsVariant::Min => (g_min, 0),
        GrubbsVariant::Max => (g_max, n - 1),
        GrubbsVariant::TwoSided => {
            if g_max >= g_min {
                (g_max, n - 1)
            } else {
                (g_min, 0)
            }
        }
    };
    let nf = n as f64;
    let df = n - 2;
    let t_linear = g * (nf * (nf - 2.0)).sqrt() / (nf - 1.0);
    let p = match variant {
        GrubbsVariant::TwoSided => nf * student_t_tail(t_linear, df, TailKind::TwoSided)?,
        _ => 2.0 * nf * student_t_tail(t_linear, df, TailKind::Upper)?,
    }
    .clamp(0.0, 1.0);

    let denom = (nf - 1.0) * (nf - 1.0) - nf * g * g;
    let p_exact = if denom <= 0.0 {
        0.0
    } else {
        let t_exact = (nf * (nf - 2.0) * g * g / denom).sqrt();
        match variant {
            GrubbsVariant::TwoSided => nf * student_t_tail(t_exact, df, TailKind::TwoSided)?,
            _ => 2.0 * nf * student_t_tail(t_exact, df, TailKind::Upper)?,
        }
        .clamp(0.0, 1.0)
    };

    Ok(GrubbsResult {
        variant,
        g,
        p,
        p_exact,
        suspect_value: sample.values()[suspect_index],
        suspect_index,
    })
}

/// Why the screening loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    NoOutlier,
    MaxIterations,
    TooFewPoints,
}

/// One removal round: the Grubbs result that flagged the suspect and the
/// battery re-run on the reduced sample with a refitted model.
#[derive(Debug, Clone)]
pub struct ScreeningIteration {
    pub removed_value: Option<f64>,
    pub grubbs: GrubbsResult,
    pub battery: Vec<TestOutcome>,
}

/// Full history of the iterative screen.
#[derive(Debug, Clone)]
pub struct ScreeningHistory {
    pub iterations: Vec<ScreeningIteration>,
    pub final_sample: Sample,
    /// The non-rejecting Grubbs check that ended the loop, when one ran.
    pub final_grubbs: Option<GrubbsResult>,
    pub stop_reason: StopReason,
}

/// Iterative screen: two-sided Grubbs, remove the single suspect while
/// p < alpha, refit, re-run the battery; stops at no outlier, n < 4, or
/// `max_iter` removals.
pub fn screen(
    sample: &Sample,
    config: &BatteryConfig,
    max_iter: usize,
) -> Result<ScreeningHistory, Error> {
    if max_iter < 1 {
        return Err(Error::domain("max_iter must be at least 1"));
    }
    let mut current = sample.clone();
    let mut iterations: Vec<ScreeningIteration> = Vec::new();
    let refit_config = BatteryConfig {
        external_model: false,
        ..*config
    };
    loop {
        if current.n() < 4 {
            return Ok(ScreeningHistory {
                iterations,
                final_sample: current,
                final_grubbs: None,
                stop_reason: StopReason::TooFewPoints,
            });
        }
        let check = grubbs(&current, GrubbsVariant::TwoSided)?;
        if check.p >= config.alpha {
            return Ok(ScreeningHistory {
                iterations,
                final_sample: current,
                final_grubbs: Some(check),
                stop_reason: StopReason::NoOutlier,
            });
        }
        if iterations.len() >= max_iter {
            return Ok(ScreeningHistory {
                iterations,
                final_sample: current,
                final_grubbs: Some(check),
                stop_reason: StopReason::MaxIterations,
            });
        }
        let next = current.without_index(check.suspect_index)?;
        let model = next.fit_normal()?;
        let battery = run_battery(&next, &model, &refit_config)?;
        iterations.push(ScreeningIteration {
            removed_value: Some(check.suspect_value),
            grubbs: check,
            battery,
        });
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sided_tie_breaks_toward_max() {
        let s = Sample::new(&[-1.0, 0.0, 0.0, 1.0], "sym").unwrap();
        let r = grubbs(&s, GrubbsVariant::TwoSided).unwrap();
        assert_eq!(r.suspect_value, 1.0);
        assert_eq!(r.suspect_index, 3);
    }

    #[test]
    fn two_sided_is_max_of_one_sided() {
        let s = Sample::new(&[0.4, 1.2, -2.0, 0.3, 5.5, 0.9, -0.7, 1.1], "mix").unwrap();
        let lo = grubbs(&s, GrubbsVariant::Min).unwrap();
        let hi = grubbs(&s, GrubbsVariant::Max).unwrap();
        let both = grubbs(&s, GrubbsVariant::TwoSided).unwrap();
        assert!((both.g - lo.g.max(hi.g)).abs() < 1e-15);
    }

    #[test]
    fn exact_p_never_exceeds_transform_p() {
        let s = Sample::new(&[0.4, 1.2, -2.0, 0.3, 5.5, 0.9, -0.7, 1.1], "mix").unwrap();
        for v in [GrubbsVariant::Min, GrubbsVariant::Max, GrubbsVariant::TwoSided] {
            let r = grubbs(&s, v).unwrap();
            assert!(r.p_exact <= r.p + 1e-15, "{v:?}: {} vs {}", r.p_exact, r.p);
        }
    }

    #[test]
    fn pure_spike_hits_exact_inversion_domain_edge() {
        // twenty equal values and one spike: G = (n-1)/√n exactly, so the
        // exact inversion's denominator (n-1)² - nG² is zero and p_exact
        // reports 0
        let mut values = vec![0.0; 20];
        values.push(10.0);
        let s = Sample::new(&values, "spike").unwrap();
        let g = grubbs(&s, GrubbsVariant::TwoSided).unwrap();
        assert_eq!(g.suspect_value, 10.0);
        assert!((g.g - 20.0 / 21.0_f64.sqrt()).abs() < 1e-12);
        assert!(g.p < 0.05, "p = {}", g.p);
        assert_eq!(g.p_exact, 0.0);
    }

    #[test]
    fn spike_is_removed_in_first_iteration() {
        // direct computation: mean = 10/21, s = sqrt(sum d²/20), G ≈ 4.37,
        // far beyond any critical value at n = 21
        let mut values = vec![0.0; 20];
        values.push(10.0);
        // perturb the zeros slightly so the post-removal sample is not degenerate
        for (i, v) in values.iter_mut().enumerate().take(20) {
            *v = (i as f64 - 9.5) * 1e-3;
        }
        let s = Sample::new(&values, "spike").unwrap();
        let g = grubbs(&s, GrubbsVariant::TwoSided).unwrap();
        assert_eq!(g.suspect_value, 10.0);
        assert!(g.p < 0.05, "p = {}", g.p);

        let hist = screen(&s, &BatteryConfig::default(), 5).unwrap();
        assert_eq!(hist.iterations.len(), 1);
        assert_eq!(hist.iterations[0].removed_value, Some(10.0));
        assert_eq!(hist.final_sample.n(), 20);
        assert_eq!(hist.stop_reason, StopReason::NoOutlier);
    }

    #[test]
    fn max_iter_stops_the_loop() {
        // two spikes; max_iter = 1 removes only the first
        let mut values: Vec<f64> = (0..30).map(|i| (i as f64 - 14.5) * 1e-2).collect();
        values.push(50.0);
        values.push(-49.0);
        let s = Sample::new(&values, "two-spikes").unwrap();
        let hist = screen(&s, &BatteryConfig::default(), 1).unwrap();
        assert_eq!(hist.iterations.len(), 1);
        assert_eq!(hist.stop_reason, StopReason::MaxIterations);
        assert_eq!(hist.iterations[0].removed_value, Some(50.0));
        assert!(hist.final_grubbs.is_some());
    }

    #[test]
    fn each_iteration_shrinks_n_by_one() {
        let mut values: Vec<f64> = (0..25).map(|i| (i as f64).sin()).collect();
        values.push(40.0);
        values.push(-35.0);
        values.push(30.0);
        let s = Sample::new(&values, "several").unwrap();
        let hist = screen(&s, &BatteryConfig::default(), 5).unwrap();
        let mut expect = s.n();
        for it in &hist.iterations {
            expect -= 1;
            assert!(it.removed_value.is_some());
            assert!(it.grubbs.p < 0.05);
        }
        assert_eq!(hist.final_sample.n(), expect);
    }

    #[test]
    fn too_few_points_stops() {
        let s = Sample::new(&[1.0, 2.0, 3.0], "tiny").unwrap();
        let hist = screen(&s, &BatteryConfig::default(), 5).unwrap();
        assert_eq!(hist.stop_reason, StopReason::TooFewPoints);
        assert!(hist.iterations.is_empty());
    }
}
