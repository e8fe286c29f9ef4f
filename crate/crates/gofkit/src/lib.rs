//! Goodness-of-fit and normality screening toolkit.
//!
//! Measures the departure between a sample and a normal model along every
//! classical axis — Pearson-Fisher chi-squared over frequency classes,
//! Kolmogorov-Smirnov/Kuiper and Anderson-Darling and Cramér-von Mises EDF
//! statistics, the Wilks-Shapiro W test, Jarque-Bera, and z-referred moment
//! tests — and screens for outliers with iterated two-sided Grubbs tests.
//!
//! ```
//! use gofkit::{fixtures, normality, BatteryConfig};
//!
//! let sample = fixtures::set2();
//! let model = sample.fit_normal().unwrap();
//! let outcomes = normality::run_battery(&sample, &model, &BatteryConfig::default()).unwrap();
//! let rejected = normality::rejected_tests(&outcomes);
//! assert_eq!(rejected.len(), 2); // kurtosis and Jarque-Bera flag this set
//! ```
//!
//! The battery evaluates tests in parallel through rayon when the default
//! `parallel` feature is on; disable default features for a strictly
//! sequential build.

pub mod binning;
pub mod calibration;
pub mod error;
pub mod fixtures;
pub mod normality;
pub mod outlier;
pub mod sample;
pub mod special;

pub use binning::{build_classes, class_count_hartley, merge_small_classes, BinningRule, FrequencyClasses};
pub use error::Error;
pub use normality::{run_battery, BatteryConfig, PValue, TestKind, TestOutcome, TestResult};
pub use outlier::{grubbs, screen, GrubbsResult, GrubbsVariant, ScreeningHistory, StopReason};
pub use sample::{FittedNormal, Moments, Sample};
