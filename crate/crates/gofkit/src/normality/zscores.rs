//! z-referred central-tendency and shape statistics: mean, variance, and
//! standard deviation against the model parameters, plus the standardized
//! skewness and kurtosis.
//!
//! The location/scale statistics are only informative against an externally
//! supplied model; against the plug-in fit they compare the sample with
//! itself (z_mean is identically zero) and the battery flags them as
//! self-referential.

use crate::error::Error;
use crate::normality::{PValue, TestKind, TestResult};
use crate::sample::{FittedNormal, Sample};
use crate::special::{c4, normal_two_sided};

/// Which z statistic to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZStatistic {
    Mean,
    Variance,
    StdDev,
    Skewness,
    Kurtosis,
}

impl TryFrom<TestKind> for ZStatistic {
    type Error = Error;
    fn try_from(kind: TestKind) -> Result<Self, Error> {
        Ok(match kind {
            TestKind::ZMean => ZStatistic::Mean,
            TestKind::ZVariance => ZStatistic::Variance,
            TestKind::ZStdDev => ZStatistic::StdDev,
            TestKind::ZSkewness => ZStatistic::Skewness,
            TestKind::ZKurtosis => ZStatistic::Kurtosis,
            other => return Err(Error::domain(format!("{other:?} is not a z statistic"))),
        })
    }
}

impl ZStatistic {
    pub fn kind(&self) -> TestKind {
        match self {
            ZStatistic::Mean => TestKind::ZMean,
            ZStatistic::Variance => TestKind::ZVariance,
            ZStatistic::StdDev => TestKind::ZStdDev,
            ZStatistic::Skewness => TestKind::ZSkewness,
            ZStatistic::Kurtosis => TestKind::ZKurtosis,
        }
    }
}

/// One z statistic with its two-sided normal p-value.
pub fn z_statistic(
    which: ZStatistic,
    sample: &Sample,
    model: &FittedNormal,
    alpha: f64,
) -> Result<TestResult, Error> {
    let n = sample.n();
    if n < 5 {
        return Err(Error::TooFewObservations { min: 5, got: n });
    }
    let m = sample.moments()?;
    let nf = n as f64;
    let z = match which {
        ZStatistic::Mean => (m.mean - model.mu) * nf.sqrt() / m.s,
        ZStatistic::Variance => {
            let s2 = m.s * m.s;
            let num = (nf - 1.0) * s2 - model.sigma * model.sigma * nf;
            let den = ((nf - 1.0).powi(3) * m.m4 - (nf - 3.0) * m.m2 * m.m2).sqrt();
            nf * num / den
        }
        ZStatistic::StdDev => {
            let c = c4(n)?;
            (c * m.s / model.sigma - 1.0) / (1.0 - c * c).sqrt()
        }
        ZStatistic::Skewness => {
            m.g1 * ((nf + 1.0) * (nf + 3.0) / (6.0 * (nf - 2.0))).sqrt()
        }
        ZStatistic::Kurtosis => {
            // the kurtosis slot takes m4/m2² (kurtosis proper); this equals
            // the standard moment z-test (b2 - E[b2]) / sqrt(Var[b2])
            let b2 = m.g2 + 3.0;
            let scale = ((nf + 3.0) * (nf + 5.0) * (nf - 1.0) * (nf - 1.0)
                / (24.0 * nf * (nf - 2.0) * (nf - 3.0)))
                .sqrt();
            ((nf + 1.0) / (nf - 1.0) * b2 - 3.0) * scale
        }
    };
    Ok(TestResult::new(
        which.kind(),
        z,
        vec![PValue::new("normal-two-sided", normal_two_sided(z))],
        None,
        alpha,
    ))
}

/// All five z statistics in enum order.
pub fn z_statistics(
    sample: &Sample,
    model: &FittedNormal,
    alpha: f64,
) -> Result<Vec<TestResult>, Error> {
    [
        ZStatistic::Mean,
        ZStatistic::Variance,
        ZStatistic::StdDev,
        ZStatistic::Skewness,
        ZStatistic::Kurtosis,
    ]
    .iter()
    .map(|&w| z_statistic(w, sample, model, alpha))
    .collect()
}
