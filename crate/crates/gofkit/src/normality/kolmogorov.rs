//! Kolmogorov-Smirnov supremum statistics, the Kuiper modification, and
//! their asymptotic p-values.

use serde::{Deserialize, Serialize};

use crate::normality::{PValue, TestKind, TestResult};
use crate::sample::{FittedNormal, Sample};

/// Both one-sided supremum statistics and their combinations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsDecomposition {
    /// Largest deficit of the empirical CDF below the model CDF.
    pub d_minus: f64,
    /// Largest excess of the empirical CDF above the model CDF.
    pub d_plus: f64,
    /// max(d_minus, d_plus).
    pub d: f64,
    /// Kuiper statistic d_minus + d_plus.
    pub v: f64,
}

/// Supremum distances between the empirical step function and the model CDF,
/// examining both sides of every step. Ties are kept: a run of equal values
/// is one step of height (multiplicity)/n, and checking every index covers
/// both of its corners.
pub fn ks_statistics(sample: &Sample, model: &FittedNormal) -> KsDecomposition {
    let n = sample.n() as f64;
    let mut d_plus = f64::NEG_INFINITY;
    let mut d_minus = f64::NEG_INFINITY;
    for (i, &x) in sample.values().iter().enumerate() {
        let f = model.cdf(x);
        let hi = (i + 1) as f64 / n;
        let lo = i as f64 / n;
        d_plus = d_plus.max(hi - f);
        d_minus = d_minus.max(f - lo);
    }
    let d_plus = d_plus.max(0.0);
    let d_minus = d_minus.max(0.0);
    KsDecomposition {
        d_minus,
        d_plus,
        d: d_minus.max(d_plus),
        v: d_minus + d_plus,
    }
}

/// Survival function of the Kolmogorov distribution, alternating series
/// 2 Σ (-1)^{i-1} e^{-2 i² K²}, terms added until below 1e-12.
pub fn kolmogorov_survival(k: f64) -> f64 {
    // below K ≈ 0.2 the survival is 1 to well under 1e-12; the series
    // converges there too but needs hundreds of terms
    if k < 0.05 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for i in 1..=1000 {
        let i = i as f64;
        let term = (-2.0 * i * i * k * k).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Same survival probability through the theta-function dual form
/// 1 - √(2π)/K Σ e^{-(2i-1)² π² / (8K²)}; used to cross-check the
/// alternating series.
pub fn kolmogorov_survival_theta(k: f64) -> f64 {
    if k <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for i in 1..=200 {
        let m = (2 * i - 1) as f64;
        let term = (-m * m * std::f64::consts::PI.powi(2) / (8.0 * k * k)).exp();
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    (1.0 - (2.0 * std::f64::consts::PI).sqrt() / k * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of the two-sided statistic: survival at K = d √n.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    kolmogorov_survival(d * (n as f64).sqrt())
}

/// Finite-sample p-value using the Stephens-corrected argument
/// K = d (√n + 0.12 + 0.11/√n); better calibrated than the raw asymptotic
/// evaluation at moderate n and the battery's primary KS p-value.
pub fn ks_p_value_finite_n(d: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    kolmogorov_survival(d * (rn + 0.12 + 0.11 / rn))
}

/// One-sided asymptotic tail P(D± > d) = e^{-2 n d²}.
pub fn ks_one_sided_p_value(d: f64, n: usize) -> f64 {
    (-2.0 * n as f64 * d * d).exp().clamp(0.0, 1.0)
}

/// Kuiper tail probability: lambda = v (√n + 0.155 + 0.24/√n),
/// Q(lambda) = 2 Σ (4 i² lambda² - 1) e^{-2 i² lambda²}.
pub fn kuiper_p_value(v: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    let lambda = v * (rn + 0.155 + 0.24 / rn);
    // the series is numerically useless below ~0.4 where Q = 1 to 7 digits
    if lambda < 0.4 {
        return 1.0;
    }
    let mut sum = 0.0;
    for i in 1..=1000 {
        let i = i as f64;
        let l2 = i * i * lambda * lambda;
        let term = (4.0 * l2 - 1.0) * (-2.0 * l2).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

impl KsDecomposition {
    /// TestResult for the two-sided statistic D; the Stephens finite-n
    /// p-value is primary, the raw asymptotic evaluation is reported
    /// alongside.
    pub fn d_result(&self, n: usize, alpha: f64) -> TestResult {
        TestResult::new(
            TestKind::KsD,
            self.d,
            vec![
                PValue::new("finite-n", ks_p_value_finite_n(self.d, n)),
                PValue::new("asymptotic", ks_p_value(self.d, n)),
            ],
            None,
            alpha,
        )
    }

    pub fn one_sided_result(&self, kind: TestKind, n: usize, alpha: f64) -> TestResult {
        let stat = match kind {
            TestKind::KsDminus => self.d_minus,
            TestKind::KsDplus => self.d_plus,
            _ => panic!("one_sided_result needs a one-sided kind"),
        };
        TestResult::new(
            kind,
            stat,
            vec![PValue::new("one-sided-asymptotic", ks_one_sided_p_value(stat, n))],
            None,
            alpha,
        )
    }

    pub fn kuiper_result(&self, n: usize, alpha: f64) -> TestResult {
        TestResult::new(
            TestKind::KuiperV,
            self.v,
            vec![PValue::new("kuiper-series", kuiper_p_value(self.v, n))],
            None,
            alpha,
        )
    }
}
