//! Wilks-Shapiro W test via Royston's AS R94 approximation: polynomial
//! corrections to the Blom normal scores give the weight vector, and
//! log-normal transforms of 1 - W give the significance level.
//!
//! Valid for 3 <= n <= 5000 (the range Royston calibrated).

use crate::error::Error;
use crate::normality::{PValue, TestKind, TestResult};
use crate::sample::Sample;
use crate::special::normal_sf;

// polynomial coefficients in ascending powers (Royston 1995)
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

const MIN_N: usize = 3;
const MAX_N: usize = 5000;

/// W statistic and Royston p-value for the hypothesis that the sample is
/// normal (location and scale unspecified).
pub fn wilks_shapiro(sample: &Sample, alpha: f64) -> Result<TestResult, Error> {
    let n = sample.n();
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::SampleSizeOutOfRange {
            n,
            min: MIN_N,
            max: MAX_N,
        });
    }
    let x = sample.values();
    let range = x[n - 1] - x[0];
    if range < 1e-19 {
        return Err(Error::DegenerateSample);
    }

    let weights = half_weights(n);
    let (w, p) = w_and_p(x, &weights);
    Ok(TestResult::new(
        TestKind::WilksShapiro,
        w,
        vec![PValue::new("royston", p)],
        None,
        alpha,
    ))
}

/// Weights for the lower half of the ordered sample (applied with negative
/// sign below the median, mirrored positive above).
fn half_weights(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    let nf = n as f64;
    let mut a = vec![0.0; nn2];
    if n == 3 {
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
        return a;
    }
    let an25 = nf + 0.25;
    let mut summ2 = 0.0;
    for (i, slot) in a.iter_mut().enumerate() {
        let m = ppnd((i as f64 + 1.0 - 0.375) / an25);
        *slot = m;
        summ2 += m * m;
    }
    summ2 *= 2.0;
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / nf.sqrt();
    let a1 = poly(&C1, rsn) - a[0] / ssumm2;

    let (start, fac) = if n > 5 {
        let a2 = -a[1] / ssumm2 + poly(&C2, rsn);
        let num = summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1];
        let den = 1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2;
        a[1] = a2;
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * a[0] * a[0];
        let den = 1.0 - 2.0 * a1 * a1;
        (1, (num / den).sqrt())
    };
    a[0] = a1;
    for slot in a.iter_mut().skip(start) {
        *slot = -*slot / fac;
    }
    a
}

fn w_and_p(x: &[f64], a: &[f64]) -> (f64, f64) {
    let n = x.len();
    let nf = n as f64;
    let range = x[n - 1] - x[0];

    // signed weight of the i-th order statistic
    let weight = |i: usize| -> f64 {
        let j = n - 1 - i;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => -a[i],
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => a[j],
        }
    };

    let mut sx = 0.0;
    let mut sa = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        sx += xi / range;
        sa += weight(i);
    }
    sa /= nf;
    sx /= nf;

    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &xi) in x.iter().enumerate() {
        let asa = weight(i) - sa;
        let xsx = xi / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = 1.0 - w1;

    // significance level
    if n == 3 {
        if w < 0.75 {
            return (0.75, 0.0);
        }
        let pw = 1.0 - 6.0 / std::f64::consts::PI * w.sqrt().acos();
        return (w, pw.clamp(0.0, 1.0));
    }
    let y = w1.ln();
    if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            return (w, 1e-19);
        }
        let y = -(gamma - y).ln();
        let m = poly(&C3, nf);
        let s = poly(&C4, nf).exp();
        (w, normal_sf((y - m) / s))
    } else {
        let xx = nf.ln();
        let m = poly(&C5, xx);
        let s = poly(&C6, xx).exp();
        (w, normal_sf((y - m) / s))
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Inverse standard normal CDF (AS 111, Beasley-Springer), accurate to about
/// 1e-7 -- the precision Royston's polynomial fits were built on.
fn ppnd(p: f64) -> f64 {
    const SPLIT: f64 = 0.42;
    const A: [f64; 4] = [2.50662823884, -18.61500062529, 41.39119773534, -25.44106049637];
    const B: [f64; 4] = [-8.47351093090, 23.08336743743, -21.06224101826, 3.13082909833];
    const C: [f64; 4] = [-2.78718931138, -2.29796479134, 4.85014127135, 2.32121276858];
    const D: [f64; 2] = [3.54388924762, 1.63706781897];

    let q = p - 0.5;
    if q.abs() <= SPLIT {
        let r = q * q;
        return q * (((A[3] * r + A[2]) * r + A[1]) * r + A[0])
            / ((((B[3] * r + B[2]) * r + B[1]) * r + B[0]) * r + 1.0);
    }
    let mut r = if q > 0.0 { 1.0 - p } else { p };
    if r <= 0.0 {
        return 0.0;
    }
    r = (-r.ln()).sqrt();
    let num = ((C[3] * r + C[2]) * r + C[1]) * r + C[0];
    let den = (D[1] * r + D[0]) * r + 1.0;
    let t = num / den;
    if q < 0.0 {
        -t
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(values: &[f64]) -> (f64, f64) {
        let s = Sample::new(values, "sw").unwrap();
        let r = wilks_shapiro(&s, 0.05).unwrap();
        (r.statistic, r.primary_p())
    }

    // reference values from the AS R94 algorithm as shipped in scipy
    #[test]
    fn reference_small_samples() {
        let (w, p) = run(&[1.0, 2.0, 3.5]);
        assert!((w - 0.9868421052631577).abs() < 1e-10);
        assert!((p - 0.780440814879016).abs() < 5e-6);

        let (w, p) = run(&[0.5, 1.1, 1.9, 4.2]);
        assert!((w - 0.9078532197810063).abs() < 1e-9);
        assert!((p - 0.47110214435058956).abs() < 5e-6);

        let (w, p) = run(&[2.0, 2.9, 3.1, 4.4, 5.0]);
        assert!((w - 0.9523914075265988).abs() < 1e-9);
        assert!((p - 0.754257530748357).abs() < 5e-6);
    }

    #[test]
    fn reference_moderate_samples() {
        let (w, p) = run(&[12.4, -3.1, 7.7, 0.2, 5.5, -1.9, 3.3, 9.8, 2.2, 4.4]);
        assert!((w - 0.9791168710191542).abs() < 1e-9);
        assert!((p - 0.9602668639763046).abs() < 5e-6);

        let (w, p) = run(&[0.1, 0.2, 0.3, 0.5, 0.8, 1.3, 2.1, 3.4, 5.5, 8.9, 14.4, 23.3]);
        assert!((w - 0.7367600057296977).abs() < 1e-9);
        assert!((p - 0.0019506139920127353).abs() < 5e-6);

        let uniform: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let (w, p) = run(&uniform);
        assert!((w - 0.9603751832429884).abs() < 1e-9);
        assert!((p - 0.5513717457916771).abs() < 5e-6);
    }

    #[test]
    fn sample_at_expected_order_statistics_is_nearly_normal() {
        // Blom scores for n = 5; W should sit close to 1
        let scores = [
            -1.1797611176118612,
            -0.49720057068155404,
            0.0,
            0.49720057068155404,
            1.1797611176118612,
        ];
        let (w, p) = run(&scores);
        assert!(w > 0.95, "W = {w}");
        assert!((w - 0.9974502527816114).abs() < 1e-9);
        assert!(p > 0.9);
    }

    #[test]
    fn size_limits() {
        let too_small = Sample::new(&[1.0, 2.0, 3.0], "ok").unwrap();
        assert!(wilks_shapiro(&too_small, 0.05).is_ok());
        let big: Vec<f64> = (0..5001).map(|i| i as f64).collect();
        let s = Sample::new(&big, "big").unwrap();
        assert!(matches!(
            wilks_shapiro(&s, 0.05),
            Err(Error::SampleSizeOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_range_is_degenerate() {
        let s = Sample::new(&[2.0, 2.0, 2.0, 2.0], "flat").unwrap();
        assert_eq!(wilks_shapiro(&s, 0.05).unwrap_err(), Error::DegenerateSample);
    }
}
