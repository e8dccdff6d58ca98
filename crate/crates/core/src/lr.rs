//! Censored partial likelihood: ML estimate, `R(α)` and the region `I_ML`.

use crate::error::{Error, Result};
use crate::interval::{check_theta, Interval, Method};
use crate::roots::brent;
use crate::sample::TailStats;
use crate::special::chi2_1_critical;

/// `α̂ = Σ δ_i / Σ V_i`.
pub fn ml_alpha(tail: &TailStats) -> Result<f64> {
    let d = tail.uncensored_count();
    if d == 0 {
        return Err(Error::AllCensored);
    }
    Ok(d as f64 / tail.sum_log_excess())
}

/// Minus twice the log likelihood ratio, `2 k p̂ [α/α̂ − 1 − log(α/α̂)]`.
pub fn lr_stat(tail: &TailStats, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be positive")));
    }
    let ml = ml_alpha(tail)?;
    let r = alpha / ml;
    Ok(2.0 * tail.uncensored_count() as f64 * (r - 1.0 - r.ln()))
}

/// `I_ML(θ) = {α : R(α) <= q_θ}`.
///
/// `R` is convex with its zero at `α̂` and diverges at `0⁺` and `∞`, so each
/// endpoint is bracketed by repeatedly halving (doubling) `α̂`.
pub fn ci_ml(tail: &TailStats, theta: f64) -> Result<Interval> {
    check_theta(theta)?;
    let q = chi2_1_critical(theta)?;
    let ml = ml_alpha(tail)?;
    let scale = 2.0 * tail.uncensored_count() as f64;
    let excess = |a: f64| {
        let r = a / ml;
        scale * (r - 1.0 - r.ln()) - q
    };
    let xtol = 1e-13 * ml;

    let mut lo = ml * 0.5;
    while excess(lo) <= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NumericalFailure("I_ML lower bracket underflow".into()));
        }
    }
    let mut hi = ml * 2.0;
    while excess(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure("I_ML upper bracket overflow".into()));
        }
    }
    let lower = brent(excess, lo, ml, xtol)?;
    let upper = brent(excess, ml, hi, xtol)?;
    Interval::new(lower, upper, 1.0 - theta, Method::Ml)
}

/// Wald interval `α̂ (1 ± z/√(Σ δ))`, `z² = q_θ`, with the lower end clipped at 0.
pub fn ci_normal(tail: &TailStats, theta: f64) -> Result<Interval> {
    check_theta(theta)?;
    let z = chi2_1_critical(theta)?.sqrt();
    let ml = ml_alpha(tail)?;
    let half = z * ml / (tail.uncensored_count() as f64).sqrt();
    Interval::new((ml - half).max(0.0), ml + half, 1.0 - theta, Method::Normal)
}
