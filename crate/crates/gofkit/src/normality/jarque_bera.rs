//! Jarque-Bera moment test: skewness and excess kurtosis jointly referred to
//! chi-squared with 2 degrees of freedom.

use crate::error::Error;
use crate::normality::{PValue, TestKind, TestResult};
use crate::sample::Sample;
use crate::special::chi2_sf;

/// JB = n (g1²/6 + g2²/24) with p from chi-squared(2).
pub fn jarque_bera(sample: &Sample, alpha: f64) -> Result<TestResult, Error> {
    let n = sample.n();
    if n < 4 {
        return Err(Error::TooFewObservations { min: 4, got: n });
    }
    let m = sample.moments()?;
    let jb = n as f64 * (m.g1 * m.g1 / 6.0 + m.g2 * m.g2 / 24.0);
    let p = chi2_sf(jb, 2)?;
    Ok(TestResult::new(
        TestKind::JarqueBera,
        jb,
        vec![PValue::new("chi2-df2", p)],
        Some(2),
        alpha,
    ))
}
