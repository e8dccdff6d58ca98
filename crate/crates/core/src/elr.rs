//! Data tilting for censored tails: the Lagrange multiplier, the tilted
//! weights, the log-posterior ratio `ℓ(α)` and the region `{α : ℓ(α) <= q_θ}`.
//!
//! The tilting constraint is the weighted partial-likelihood score
//! `Σ w_i (δ_i − α V_i) = 0`, i.e. the weighted posterior-mean estimator
//! `Σ w_i δ_i / Σ w_i V_i` is pinned to `α`. With uniform weights it is
//! solved by `α* = Σ δ_i / Σ V_i`, the maximum likelihood estimate.

use crate::error::{Error, Result};
use crate::interval::{check_theta, Interval, Method};
use crate::roots::brent;
use crate::sample::TailStats;
use crate::special::chi2_1_critical;

/// Probability weights over the tail that satisfy the tilting constraint at `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedWeights {
    weights: Vec<f64>,
    lambda: f64,
    alpha: f64,
}

impl TiltedWeights {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Per-observation scores `u_i = δ_i − α V_i`.
pub fn score_terms(tail: &TailStats, alpha: f64) -> Vec<f64> {
    tail.log_excesses()
        .iter()
        .zip(tail.indicators())
        .map(|(&v, &d)| f64::from(u8::from(d)) - alpha * v)
        .collect()
}

fn lambda_equation(u: &[f64], lambda: f64) -> (f64, f64) {
    u.iter().fold((0.0, 0.0), |(f, fp), &ui| {
        let r = ui / (1.0 + lambda * ui);
        (f + r, fp - r * r)
    })
}

/// Solves `Σ u_i / (1 + λ u_i) = 0` for the unique `λ` with every `1 + λ u_i > 0`.
///
/// The left side is strictly decreasing on the admissible interval
/// `(−1/max u, −1/min u)` and diverges at both ends. Newton steps are taken
/// from `λ = 0` and replaced by bisection whenever they leave the current
/// bracket.
pub fn solve_lambda(u: &[f64]) -> Result<f64> {
    let (umin, umax) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(umax > 0.0 && umin < 0.0) {
        return Err(Error::NoInteriorSolution);
    }
    let pole_lo = -1.0 / umax;
    let pole_hi = -1.0 / umin;
    let shrink = 1e-12 * (pole_hi - pole_lo);
    let (mut lo, mut hi) = (pole_lo + shrink, pole_hi - shrink);
    if lambda_equation(u, lo).0 <= 0.0 || lambda_equation(u, hi).0 >= 0.0 {
        // Root lies within `shrink` of a pole; the tilt is numerically degenerate.
        return Err(Error::NoInteriorSolution);
    }

    let mut x = 0.0;
    for _ in 0..500 {
        let (f, fp) = lambda_equation(u, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / fp;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let tol = 1e-15 * x.abs().max(1.0);
        if (next - x).abs() <= tol || hi - lo <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NumericalFailure("Lagrange multiplier did not converge".into()))
}

/// Weights `w_i = k⁻¹ [1 + λ u_i]⁻¹` tilting the tail to satisfy the constraint at `alpha`.
pub fn tilt_weights(tail: &TailStats, alpha: f64) -> Result<TiltedWeights> {
    let u = score_terms(tail, alpha);
    let lambda = solve_lambda(&u)?;
    let k = tail.k() as f64;
    let weights = u.iter().map(|&ui| 1.0 / (k * (1.0 + lambda * ui))).collect();
    Ok(TiltedWeights {
        weights,
        lambda,
        alpha,
    })
}

/// `ℓ(α) = 2 Σ log(1 + λ u_i)`; `+∞` when `alpha` is outside the tiltable hull.
pub fn elr_stat(tail: &TailStats, alpha: f64) -> f64 {
    let u = score_terms(tail, alpha);
    match solve_lambda(&u) {
        Ok(lambda) => {
            let s: f64 = u.iter().map(|&ui| (lambda * ui).ln_1p()).sum();
            (2.0 * s).max(0.0)
        }
        Err(_) => f64::INFINITY,
    }
}

/// The zero of `ℓ`: `Σ δ_i / Σ V_i`.
pub fn el_center(tail: &TailStats) -> Result<f64> {
    let d = tail.uncensored_count();
    if d == 0 {
        return Err(Error::AllCensored);
    }
    Ok(d as f64 / tail.sum_log_excess())
}

/// Open interval of `alpha` values whose scores take both signs.
pub fn tiltable_hull(tail: &TailStats) -> Result<(f64, f64)> {
    if tail.uncensored_count() == 0 {
        return Err(Error::AllCensored);
    }
    let (mut vmin_unc, mut vmax_unc) = (f64::INFINITY, 0.0f64);
    for (&v, &d) in tail.log_excesses().iter().zip(tail.indicators()) {
        if d {
            vmin_unc = vmin_unc.min(v);
            vmax_unc = vmax_unc.max(v);
        }
    }
    let upper = 1.0 / vmin_unc;
    let lower = if tail.uncensored_count() < tail.k() {
        0.0
    } else {
        1.0 / vmax_unc
    };
    if lower >= upper {
        return Err(Error::DegenerateHull);
    }
    Ok((lower, upper))
}

/// Endpoints of `{α : ℓ(α) <= level}`, clamped to the tiltable hull.
pub(crate) fn el_level_set(tail: &TailStats, level: f64) -> Result<(f64, f64)> {
    let (hull_lo, hull_hi) = tiltable_hull(tail)?;
    let center = el_center(tail)?;
    let excess = |a: f64| elr_stat(tail, a) - level;
    let xtol = 1e-12 * center;

    let walk = |edge: f64| -> Result<f64> {
        let mut inner = center;
        for j in 1..=80 {
            let t = 1.0 - 0.5f64.powi(j);
            let x = center + (edge - center) * t;
            if excess(x) > 0.0 {
                let (a, b) = if inner < x { (inner, x) } else { (x, inner) };
                return brent(excess, a, b, xtol);
            }
            inner = x;
        }
        Ok(edge)
    };
    Ok((walk(hull_lo)?, walk(hull_hi)?))
}

/// The region `I_EL(θ) = {α : ℓ(α) <= q_θ}`.
pub fn ci_el(tail: &TailStats, theta: f64) -> Result<Interval> {
    check_theta(theta)?;
    let q = chi2_1_critical(theta)?;
    let (lower, upper) = el_level_set(tail, q)?;
    Interval::new(lower, upper, 1.0 - theta, Method::El)
}
