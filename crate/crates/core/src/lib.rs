//! Confidence and credible regions for the tail index of heavy-tailed,
//! randomly right-censored data.
//!
//! The usual flow is: build a [`CensoredSample`], take the `k` largest
//! observations with [`tail_view`], then ask for a region with one of
//! [`ci_el`], [`ci_bcl`], [`ci_bayes`], [`ci_ml`] or (complete data only)
//! [`ci_cl`]. [`sim`] reproduces the coverage study and [`ks_scan`] checks
//! which `k` are compatible with a Pareto-type tail.
//!
//! ```
//! use tailindex::{ci_el, tail_view, CensoredSample};
//!
//! let values: Vec<f64> = (1..=200).map(|i| (200.0 / i as f64).powf(1.0 / 1.5)).collect();
//! let statuses = (0..200).map(|i| i % 5 != 0).collect();
//! let sample = CensoredSample::new(values, statuses).unwrap();
//! let tail = tail_view(&sample, 50).unwrap();
//! let region = ci_el(&tail, 0.05).unwrap();
//! assert!(region.lower < region.upper);
//! ```

pub mod bayes;
pub mod complete_cl;
pub mod elr;
pub mod error;
pub mod interval;
pub mod ks;
pub mod lr;
pub mod roots;
pub mod sample;
pub mod sim;
pub mod special;

pub use bayes::{
    ci_bayes, ci_bcl, gamma_quantile, hpdi, point_estimates, posterior_cl, posterior_jeffrey,
    GammaPosterior, PointEstimates, TiltedPosterior,
};
pub use complete_cl::{ci_cl, cl_stat, solve_multipliers, weighted_estimators, CompleteTilt};
pub use elr::{ci_el, el_center, elr_stat, score_terms, solve_lambda, tilt_weights, tiltable_hull, TiltedWeights};
pub use error::{Error, Result};
pub use interval::{theta_from_level, Interval, Method};
pub use ks::{ks_scan, ks_stat, ks_stat_ordered, KsPoint, KS_CRITICAL_95};
pub use lr::{ci_ml, ci_normal, lr_stat, ml_alpha};
pub use sample::{censored_hill, hill, tail_view, CensoredSample, OrderedSample, TailStats};
pub use sim::{
    coverage_experiment, generate_censored, generate_complete, optimal_k_summary, CoverageRow, Family,
    ModelSpec, SimConfig,
};
