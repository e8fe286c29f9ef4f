//! Pearson-Fisher chi-squared test over frequency classes, with the degrees
//! of freedom reduced by one for the frequency-sum constraint and by the
//! number of fitted model parameters.

use crate::binning::FrequencyClasses;
use crate::error::Error;
use crate::normality::{PValue, TestKind, TestResult};
use crate::special::chi2_sf;

/// X² = Σ (O - E)²/E with df = k - t_params - 1; `t_params` is 2 for a
/// normal fitted by moments.
pub fn chi_squared_test(
    fc: &FrequencyClasses,
    t_params: usize,
    alpha: f64,
) -> Result<TestResult, Error> {
    let k = fc.k();
    if k < t_params + 2 {
        return Err(Error::InsufficientDf {
            classes: k,
            params: t_params,
        });
    }
    let mut x2 = 0.0;
    for (&o, &e) in fc.observed.iter().zip(&fc.expected) {
        if e <= 0.0 {
            return Err(Error::domain(format!("expected count {e} is not positive")));
        }
        let d = o as f64 - e;
        x2 += d * d / e;
    }
    let df = k - t_params - 1;
    let p = chi2_sf(x2, df)?;
    Ok(TestResult::new(
        TestKind::ChiSquared,
        x2,
        vec![PValue::new("chi2-sf", p)],
        Some(df),
        alpha,
    ))
}
