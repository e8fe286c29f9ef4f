//! Cramér-von Mises quadratic EDF statistic with the Levin exponential
//! p-value approximation.

use crate::error::Error;
use crate::normality::{PValue, TestKind, TestResult};
use crate::sample::{FittedNormal, Sample};

/// W² = 1/(12n) + Σ ((2i-1)/(2n) - F(x_(i)))², p ≈ min(1, 0.67 e^{-5.6 W²}).
pub fn cramer_von_mises(
    sample: &Sample,
    model: &FittedNormal,
    alpha: f64,
) -> Result<TestResult, Error> {
    let n = sample.n();
    if n < 2 {
        return Err(Error::TooFewObservations { min: 2, got: n });
    }
    let nf = n as f64;
    let mut w2 = 1.0 / (12.0 * nf);
    for (i, &x) in sample.values().iter().enumerate() {
        let target = (2.0 * (i as f64 + 1.0) - 1.0) / (2.0 * nf);
        let d = target - model.cdf(x);
        w2 += d * d;
    }
    Ok(TestResult::new(
        TestKind::CramerVonMises,
        w2,
        vec![PValue::new("levin", levin_p(w2))],
        None,
        alpha,
    ))
}

/// Levin's approximation to the CvM tail probability.
pub fn levin_p(w2: f64) -> f64 {
    (0.67 * (-5.6 * w2).exp()).min(1.0)
}
