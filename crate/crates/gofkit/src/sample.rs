//! Observation vector, order statistics, ECDF, and central moments.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Validated, ascending-sorted finite observations.
///
/// Every downstream statistic is a function of the sorted values, so raw
/// input order never matters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    label: String,
}

impl Sample {
    /// Builds a sample from raw observations: validates finiteness, sorts,
    /// and keeps ties.
    pub fn new(raw: &[f64], label: impl Into<String>) -> Result<Self, Error> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        if raw.len() < 3 {
            return Err(Error::TooFewObservations {
                min: 3,
                got: raw.len(),
            });
        }
        let mut values = raw.to_vec();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
        Ok(Sample {
            values,
            label: label.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sorted values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Empirical CDF: fraction of observations <= x (right-continuous,
    /// ties counted with multiplicity).
    pub fn ecdf(&self, x: f64) -> f64 {
        let count = self.values.partition_point(|&v| v <= x);
        count as f64 / self.values.len() as f64
    }

    /// Number of observations strictly below x.
    pub(crate) fn count_below(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// Fraction of observations that share their value with another
    /// observation.
    pub fn tie_fraction(&self) -> f64 {
        let n = self.values.len();
        let mut tied = 0usize;
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && self.values[j] == self.values[i] {
                j += 1;
            }
            if j - i > 1 {
                tied += j - i;
            }
            i = j;
        }
        tied as f64 / n as f64
    }

    /// Returns a copy with the observation at `sorted_index` removed.
    pub fn without_index(&self, sorted_index: usize) -> Result<Self, Error> {
        if self.values.len() <= 3 {
            return Err(Error::TooFewObservations {
                min: 4,
                got: self.values.len(),
            });
        }
        let mut values = self.values.clone();
        values.remove(sorted_index);
        Ok(Sample {
            values,
            label: self.label.clone(),
        })
    }

    /// Central moments and standardized shape statistics.
    pub fn moments(&self) -> Result<Moments, Error> {
        Moments::of(self)
    }

    /// Plug-in normal model: mean and sample standard deviation (divisor n-1).
    pub fn fit_normal(&self) -> Result<FittedNormal, Error> {
        let m = self.moments()?;
        FittedNormal::new(m.mean, m.s)
    }
}

/// Central moments with divisor N, plus the n-1 standard deviation and the
/// standardized third/fourth moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    /// Second central moment (divisor N).
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    /// Sample standard deviation (divisor n-1).
    pub s: f64,
    /// Skewness m3 / m2^{3/2}.
    pub g1: f64,
    /// Excess kurtosis m4 / m2^2 - 3.
    pub g2: f64,
}

impl Moments {
    /// Two-pass computation: mean first, then centered powers, so the
    /// centered sums do not cancel catastrophically.
    fn of(sample: &Sample) -> Result<Moments, Error> {
        let n = sample.n();
        if n < 2 {
            return Err(Error::TooFewObservations { min: 2, got: n });
        }
        let nf = n as f64;
        let mean = sample.values().iter().sum::<f64>() / nf;
        let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
        for &v in sample.values() {
            let d = v - mean;
            let d2 = d * d;
            s2 += d2;
            s3 += d2 * d;
            s4 += d2 * d2;
        }
        let m2 = s2 / nf;
        if m2 == 0.0 {
            return Err(Error::DegenerateSample);
        }
        let m3 = s3 / nf;
        let m4 = s4 / nf;
        Ok(Moments {
            mean,
            m2,
            m3,
            m4,
            s: (s2 / (nf - 1.0)).sqrt(),
            g1: m3 / m2.powf(1.5),
            g2: m4 / (m2 * m2) - 3.0,
        })
    }
}

/// Normal model the departure statistics are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedNormal {
    pub mu: f64,
    pub sigma: f64,
}

impl FittedNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self, Error> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::DegenerateSample);
        }
        Ok(FittedNormal { mu, sigma })
    }

    /// Standardized coordinate (x - mu) / sigma.
    pub fn standardize(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }

    /// Model CDF at x.
    pub fn cdf(&self, x: f64) -> f64 {
        crate::special::normal_cdf(self.standardize(x))
    }

    /// Model survival function at x.
    pub fn sf(&self, x: f64) -> f64 {
        crate::special::normal_sf(self.standardize(x))
    }
}
