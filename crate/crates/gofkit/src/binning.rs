//! Frequency-class construction for the chi-squared test: class-count and
//! width rules plus the at-least-5-observations merge step.
//!
//! Classes are half-open `[lo, hi)` with ties on an edge going to the upper
//! class; the outermost classes are open-ended so expected counts sum to n
//! exactly.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sample::{FittedNormal, Sample};
use crate::special::normal_cdf;

/// How class edges are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BinningRule {
    /// Hartley class count, edges at model quantiles (equal expected count).
    HartleyEqualProbability,
    /// Hartley class count, equal-width classes spanning [min, max].
    HartleyEqualWidth,
    /// Class width 0.3 s with class limits at mean ± 6 s; zero-observed
    /// marginal classes dropped.
    DataplotWidth,
}

impl BinningRule {
    pub fn name(&self) -> &'static str {
        match self {
            BinningRule::HartleyEqualProbability => "hartley-eqprob",
            BinningRule::HartleyEqualWidth => "hartley-eqwidth",
            BinningRule::DataplotWidth => "dataplot",
        }
    }
}

/// Class boundaries with observed and expected counts.
///
/// `edges` has k+1 entries for k classes; the first and last are ±infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyClasses {
    #[serde(with = "edge_serde")]
    pub edges: Vec<f64>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub rule: BinningRule,
    pub merged: bool,
}

impl FrequencyClasses {
    pub fn k(&self) -> usize {
        self.observed.len()
    }

    pub fn n(&self) -> u64 {
        self.observed.iter().sum()
    }
}

/// Hartley class count: round(log2(2n)), half-up.
pub fn class_count_hartley(n: usize) -> Result<usize, Error> {
    if n < 8 {
        return Err(Error::TooFewObservations { min: 8, got: n });
    }
    Ok((2.0 * n as f64).log2().round() as usize)
}

/// Builds frequency classes for `sample` against `model` under `rule`,
/// then merges classes until every observed count is at least 5.
pub fn build_classes(
    sample: &Sample,
    model: &FittedNormal,
    rule: BinningRule,
) -> Result<FrequencyClasses, Error> {
    let edges = match rule {
        BinningRule::HartleyEqualProbability => {
            let k = class_count_hartley(sample.n())?;
            equal_probability_edges(model, k)
        }
        BinningRule::HartleyEqualWidth => {
            let k = class_count_hartley(sample.n())?;
            equal_width_edges(sample, k)?
        }
        BinningRule::DataplotWidth => dataplot_edges(sample)?,
    };
    let fc = classes_from_edges(sample, model, edges, rule);
    merge_small_classes(&fc)
}

/// Merges classes with fewer than 5 observations into their right neighbor
/// (the final class merges leftward). Idempotent on conforming input.
pub fn merge_small_classes(fc: &FrequencyClasses) -> Result<FrequencyClasses, Error> {
    let mut edges = fc.edges.clone();
    let mut observed = fc.observed.clone();
    let mut expected = fc.expected.clone();
    let mut merged = fc.merged;

    while observed.len() >= 2 {
        let Some(i) = observed.iter().position(|&o| o < 5) else {
            break;
        };
        merged = true;
        if i == observed.len() - 1 {
            observed[i - 1] += observed[i];
            expected[i - 1] += expected[i];
            observed.remove(i);
            expected.remove(i);
            edges.remove(i); // drop the boundary between i-1 and i
        } else {
            observed[i + 1] += observed[i];
            expected[i + 1] += expected[i];
            observed.remove(i);
            expected.remove(i);
            edges.remove(i + 1);
        }
    }
    if observed.len() < 2 || observed.iter().any(|&o| o < 5) {
        return Err(Error::DegenerateBinning);
    }
    Ok(FrequencyClasses {
        edges,
        observed,
        expected,
        rule: fc.rule,
        merged,
    })
}

fn classes_from_edges(
    sample: &Sample,
    model: &FittedNormal,
    edges: Vec<f64>,
    rule: BinningRule,
) -> FrequencyClasses {
    let n = sample.n() as f64;
    let k = edges.len() - 1;
    let mut observed = Vec::with_capacity(k);
    let mut expected = Vec::with_capacity(k);
    for i in 0..k {
        let below_hi = if edges[i + 1].is_infinite() {
            sample.n()
        } else {
            sample.count_below(edges[i + 1])
        };
        let below_lo = if edges[i].is_infinite() {
            0
        } else {
            sample.count_below(edges[i])
        };
        observed.push((below_hi - below_lo) as u64);
        let f_hi = if edges[i + 1] == f64::INFINITY {
            1.0
        } else {
            model.cdf(edges[i + 1])
        };
        let f_lo = if edges[i] == f64::NEG_INFINITY {
            0.0
        } else {
            model.cdf(edges[i])
        };
        expected.push(n * (f_hi - f_lo));
    }
    FrequencyClasses {
        edges,
        observed,
        expected,
        rule,
        merged: false,
    }
}

/// Interior edges at model quantiles i/k, found by bisection on the normal
/// CDF (no inverse CDF is shipped).
fn equal_probability_edges(model: &FittedNormal, k: usize) -> Vec<f64> {
    let mut edges = Vec::with_capacity(k + 1);
    edges.push(f64::NEG_INFINITY);
    for i in 1..k {
        let z = bisect_normal_quantile(i as f64 / k as f64);
        edges.push(model.mu + model.sigma * z);
    }
    edges.push(f64::INFINITY);
    edges
}

fn bisect_normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn equal_width_edges(sample: &Sample, k: usize) -> Result<Vec<f64>, Error> {
    let (lo, hi) = (sample.min(), sample.max());
    let w = (hi - lo) / k as f64;
    if !(w > 0.0) {
        return Err(Error::DegenerateBinning);
    }
    let mut edges = Vec::with_capacity(k + 1);
    edges.push(f64::NEG_INFINITY);
    for i in 1..k {
        edges.push(lo + i as f64 * w);
    }
    edges.push(f64::INFINITY);
    Ok(edges)
}

/// Dataplot histogram rule: 40 classes of width 0.3 s with limits at the
/// sample mean ± 6 s; marginal classes with zero observed count are dropped
/// and the surviving extremes become open-ended.
fn dataplot_edges(sample: &Sample) -> Result<Vec<f64>, Error> {
    let m = sample.moments()?;
    let w = 0.3 * m.s;
    let lo = m.mean - 6.0 * m.s;
    let grid: Vec<f64> = (0..=40).map(|i| lo + i as f64 * w).collect();

    // counts against the raw grid, extreme classes absorbing anything
    // beyond ± 6 s
    let mut counts = [0usize; 40];
    for i in 0..40 {
        let below_hi = if i == 39 {
            sample.n()
        } else {
            sample.count_below(grid[i + 1])
        };
        let below_lo = if i == 0 { 0 } else { sample.count_below(grid[i]) };
        counts[i] = below_hi - below_lo;
    }
    let first = counts.iter().position(|&c| c > 0).ok_or(Error::DegenerateBinning)?;
    let last = counts.iter().rposition(|&c| c > 0).unwrap();
    if last - first < 1 {
        return Err(Error::DegenerateBinning);
    }
    let mut edges = Vec::with_capacity(last - first + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(&grid[first + 1..=last]);
    edges.push(f64::INFINITY);
    Ok(edges)
}

/// Serializes edge arrays with the ±infinity sentinels as "-inf"/"inf"
/// strings so JSON round-trips losslessly.
mod edge_serde {
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(edges: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(edges.len()))?;
        for &e in edges {
            if e == f64::NEG_INFINITY {
                seq.serialize_element("-inf")?;
            } else if e == f64::INFINITY {
                seq.serialize_element("inf")?;
            } else {
                seq.serialize_element(&e)?;
            }
        }
        seq.end()
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Edge {
        Num(f64),
        Tag(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Edge>::deserialize(de)?;
        raw.into_iter()
            .map(|e| match e {
                Edge::Num(v) => Ok(v),
                Edge::Tag(s) => match s.as_str() {
                    "inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    other => Err(D::Error::custom(format!("bad edge {other:?}"))),
                },
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(values: &[f64]) -> Sample {
        Sample::new(values, "toy").unwrap()
    }

    #[test]
    fn hartley_counts() {
        assert_eq!(class_count_hartley(166).unwrap(), 8);
        assert_eq!(class_count_hartley(206).unwrap(), 9);
        assert_eq!(class_count_hartley(8).unwrap(), 4);
        assert!(matches!(
            class_count_hartley(7),
            Err(Error::TooFewObservations { .. })
        ));
    }

    fn fc(observed: &[u64]) -> FrequencyClasses {
        let k = observed.len();
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend((1..k).map(|i| i as f64));
        edges.push(f64::INFINITY);
        let expected: Vec<f64> = observed.iter().map(|&o| o as f64).collect();
        FrequencyClasses {
            edges,
            observed: observed.to_vec(),
            expected,
            rule: BinningRule::HartleyEqualWidth,
            merged: false,
        }
    }

    #[test]
    fn merge_into_right_neighbor() {
        let out = merge_small_classes(&fc(&[3, 7, 9])).unwrap();
        assert_eq!(out.observed, vec![10, 9]);
        assert!(out.merged);
        assert_eq!(out.edges.len(), 3);
    }

    #[test]
    fn merge_is_idempotent_on_conforming_input() {
        let input = fc(&[6, 6, 6]);
        let out = merge_small_classes(&input).unwrap();
        assert_eq!(out.observed, vec![6, 6, 6]);
        assert!(!out.merged);
        let twice = merge_small_classes(&out).unwrap();
        assert_eq!(twice, out);
    }

    #[test]
    fn merge_final_class_goes_left() {
        let out = merge_small_classes(&fc(&[9, 7, 3])).unwrap();
        assert_eq!(out.observed, vec![9, 10]);
    }

    #[test]
    fn merge_collapse_is_degenerate() {
        assert_eq!(
            merge_small_classes(&fc(&[1, 1, 1, 20])).unwrap_err(),
            Error::DegenerateBinning
        );
    }

    #[test]
    fn equal_probability_matches_model() {
        // sample placed at model quantiles -> O_i close to E_i = n/k
        let model = FittedNormal::new(0.0, 1.0).unwrap();
        let n = 64;
        let values: Vec<f64> = (1..=n)
            .map(|i| bisect_normal_quantile((i as f64 - 0.5) / n as f64))
            .collect();
        let s = Sample::new(&values, "quantiles").unwrap();
        let fc = build_classes(&s, &model, BinningRule::HartleyEqualProbability).unwrap();
        let k = fc.k();
        for (i, (&o, &e)) in fc.observed.iter().zip(&fc.expected).enumerate() {
            assert!((e - n as f64 / k as f64).abs() < 1e-9, "class {i}");
            assert!((o as f64 - e).abs() <= 1.0, "class {i}: O={o} E={e}");
        }
    }

    #[test]
    fn equal_probability_edges_hit_quantiles() {
        let model = FittedNormal::new(3.0, 2.5).unwrap();
        let edges = equal_probability_edges(&model, 8);
        for (i, &e) in edges.iter().enumerate().skip(1).take(7) {
            let p = normal_cdf(model.standardize(e));
            assert!((p - i as f64 / 8.0).abs() <= 1e-10, "edge {i}");
        }
    }

    #[test]
    fn counts_and_expectations_sum_to_n() {
        let values: Vec<f64> = (0..50).map(|i| (i as f64 * 0.7).sin() * 2.0 + 0.1 * i as f64).collect();
        let s = Sample::new(&values, "mixed").unwrap();
        let model = s.fit_normal().unwrap();
        for rule in [
            BinningRule::HartleyEqualProbability,
            BinningRule::HartleyEqualWidth,
            BinningRule::DataplotWidth,
        ] {
            let fc = build_classes(&s, &model, rule).unwrap();
            assert_eq!(fc.n(), 50, "{rule:?}");
            let se: f64 = fc.expected.iter().sum();
            assert!((se - 50.0).abs() < 1e-9, "{rule:?}: sum E = {se}");
            assert!(fc.observed.iter().all(|&o| o >= 5), "{rule:?}");
        }
    }

    #[test]
    fn dataplot_interior_widths_are_0_3_s() {
        let values: Vec<f64> = (0..80).map(|i| ((i * 37) % 80) as f64 / 8.0).collect();
        let s = Sample::new(&values, "grid").unwrap();
        let model = s.fit_normal().unwrap();
        let edges = dataplot_edges(&s).unwrap();
        let w = 0.3 * s.moments().unwrap().s;
        for pair in edges[1..edges.len() - 1].windows(2) {
            assert!((pair[1] - pair[0] - w).abs() < 1e-12);
        }
        let fc = build_classes(&s, &model, BinningRule::DataplotWidth).unwrap();
        assert!(fc.observed.first().copied().unwrap() > 0);
        assert!(fc.observed.last().copied().unwrap() > 0);
    }

    #[test]
    fn forced_merge_flags_and_conforms() {
        // two dense clusters with a sparse middle: the equal-width grid
        // produces several sub-5 classes that must chain-merge to [12, 12]
        let mut values: Vec<f64> = (0..12).map(|i| 1.0 + 0.01 * i as f64).collect();
        values.extend_from_slice(&[2.7, 2.72]);
        values.extend((0..10).map(|i| 4.0 + 0.01 * i as f64));
        let s = toy(&values);
        let model = s.fit_normal().unwrap();
        let fc = build_classes(&s, &model, BinningRule::HartleyEqualWidth).unwrap();
        assert!(fc.merged);
        assert_eq!(fc.observed, vec![12, 12]);
        assert_eq!(fc.n() as usize, values.len());
    }

    #[test]
    fn edges_round_trip_through_json() {
        let fc = fc(&[6, 7, 8]);
        let js = serde_json::to_string(&fc).unwrap();
        assert!(js.contains("\"-inf\""));
        let back: FrequencyClasses = serde_json::from_str(&js).unwrap();
        assert_eq!(back, fc);
    }
}
