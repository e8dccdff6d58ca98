//! Composite likelihood for complete samples: weighted posterior-mode
//! estimators and the entropy-tilting statistic `𝕃(α) = 2n Σ w_i log(n w_i)`.
//!
//! Weights are exponential tilts of the uniform distribution,
//!
//! ```text
//! w_i = n⁻¹ exp(−1 − λ1)                          below the threshold
//! w_i = n⁻¹ exp(−1 − λ1 − λ2 (Z_i − 1/α))         for the k exceedances
//! ```
//!
//! with `Z_i` the log-excesses over `X_{n,n−k}`. `λ2` comes from inverting
//! `φ(λ) = Σ e^{−λZ_i} Z_i / Σ e^{−λZ_i}` at `1/α`; `λ1` then closes the
//! normalization.

use crate::error::{Error, Result};
use crate::interval::{check_theta, Interval, Method};
use crate::roots::brent;
use crate::sample::{hill, CensoredSample, TailStats};
use crate::special::chi2_1_critical;

/// Solved entropy tilt at a given `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteTilt {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Weights in the original sample order.
    pub weights: Vec<f64>,
    pub alpha: f64,
    /// `𝕃(α)`.
    pub statistic: f64,
}

fn require_complete(sample: &CensoredSample) -> Result<()> {
    if !sample.is_complete() {
        return Err(Error::InvalidArgument(
            "the entropy-tilting region needs a complete (uncensored) sample".into(),
        ));
    }
    Ok(())
}

/// Posterior-mode estimators `(α̂(w), ĉ(w))` of the weighted composite likelihood.
pub fn weighted_estimators(sample: &CensoredSample, k: usize, weights: &[f64]) -> Result<(f64, f64)> {
    require_complete(sample)?;
    let n = sample.len();
    if weights.len() != n {
        return Err(Error::InvalidArgument(format!("{} weights for {n} observations", weights.len())));
    }
    let tail = sample.ordered().tail(k)?;
    let thr = tail.threshold();
    let nf = n as f64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for (&x, &w) in sample.values().iter().zip(weights) {
        if x > thr {
            s1 += w;
            s2 += w * (x / thr).ln();
        }
    }
    let num = s1 - 1.0 / nf;
    let den = s2 + thr.ln() / nf;
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::EstimatorUndefined(format!(
            "weighted estimator has numerator {num} and denominator {den}"
        )));
    }
    let alpha = num / den;
    let c = thr.powf(alpha) * (2.0 * nf / (2.0 * nf - 1.0)) * s1;
    Ok((alpha, c))
}

// log Σ exp(x_i)
fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `φ(λ)` and `φ'(λ) = −Var_λ(Z)`, evaluated with a shift that keeps every exponent <= 0.
fn phi(z: &[f64], lambda: f64) -> (f64, f64) {
    let shift = if lambda >= 0.0 {
        z.iter().cloned().fold(f64::INFINITY, f64::min)
    } else {
        z.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    };
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for &zi in z {
        let e = (-lambda * (zi - shift)).exp();
        s0 += e;
        s1 += e * zi;
        s2 += e * zi * zi;
    }
    let mean = s1 / s0;
    (mean, -(s2 / s0 - mean * mean).max(0.0))
}

/// Inverse of the decreasing map `φ` at `target`.
///
/// The search interval `[−L, L]` is doubled until it straddles the target;
/// Newton steps are used inside the bracket with bisection as fallback.
fn invert_phi(z: &[f64], target: f64) -> Result<f64> {
    let zmin = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let zmax = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if zmin == zmax {
        return if target == zmin { Ok(0.0) } else { Err(Error::NoInteriorSolution) };
    }
    if !(target > zmin && target < zmax) {
        return Err(Error::NoInteriorSolution);
    }
    let mut bound = 1.0;
    while !(phi(z, -bound).0 > target && phi(z, bound).0 < target) {
        bound *= 2.0;
        if bound > 1e300 {
            return Err(Error::NumericalFailure("φ inversion bracket exhausted".into()));
        }
    }
    let (mut lo, mut hi) = (-bound, bound);
    let mut x = 0.0;
    for _ in 0..400 {
        let (f, fp) = phi(z, x);
        let r = f - target;
        if r == 0.0 {
            return Ok(x);
        }
        if r > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if fp < 0.0 { x - r / fp } else { f64::NAN };
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let tol = 1e-15 * x.abs().max(1.0);
        if (next - x).abs() <= tol || hi - lo <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NumericalFailure("φ inversion did not converge".into()))
}

/// Tilt expressed on the sorted tail: exceedance weights follow `tail.log_excesses()`.
#[derive(Debug, Clone)]
pub(crate) struct TailTilt {
    pub lambda1: f64,
    pub lambda2: f64,
    pub below: f64,
    pub exceed: Vec<f64>,
    pub statistic: f64,
}

pub(crate) fn solve_tail(tail: &TailStats, alpha: f64) -> Result<TailTilt> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be positive")));
    }
    let n = tail.n() as f64;
    let k = tail.k() as f64;
    let z = tail.log_excesses();
    let target = 1.0 / alpha;
    let lambda2 = invert_phi(z, target)?;

    let log_s = log_sum_exp(z.iter().map(|&zi| -lambda2 * (zi - target)));
    let log_rest = (n - k).ln();
    // log((n − k) + S)
    let log_block = if log_s > log_rest {
        log_s + (log_rest - log_s).exp().ln_1p()
    } else {
        log_rest + (log_s - log_rest).exp().ln_1p()
    };
    // Normalization residual 1 − Σ w, increasing in λ1.
    let residual = |l1: f64| 1.0 - (-1.0 - l1 + log_block - n.ln()).min(700.0).exp();

    let root_gap = k.sqrt() / (n - k);
    let mut lo = -1.0 - root_gap.ln_1p();
    let mut hi = if root_gap < 1.0 { -1.0 - (-root_gap).ln_1p() } else { lo + 1.0 };
    let mut width = hi - lo;
    while residual(lo) > 0.0 {
        width *= 2.0;
        lo -= width;
        if !lo.is_finite() {
            return Err(Error::NumericalFailure("λ1 bracket exhausted".into()));
        }
    }
    while residual(hi) < 0.0 {
        width *= 2.0;
        hi += width;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure("λ1 bracket exhausted".into()));
        }
    }
    let lambda1 = brent(residual, lo, hi, 1e-15 * (1.0 + hi.abs().max(lo.abs())))?;

    let base = -n.ln() - 1.0 - lambda1;
    let below = base.exp();
    let exceed: Vec<f64> = z
        .iter()
        .map(|&zi| (base - lambda2 * (zi - target)).exp())
        .collect();
    let mut d = (n - k) * below * (n * below).ln();
    for &w in &exceed {
        if w > 0.0 {
            d += w * (n * w).ln();
        }
    }
    Ok(TailTilt {
        lambda1,
        lambda2,
        below,
        exceed,
        statistic: (2.0 * n * d).max(0.0),
    })
}

/// Solves for `(λ1, λ2)` at `alpha` and returns the full weight vector.
pub fn solve_multipliers(sample: &CensoredSample, k: usize, alpha: f64) -> Result<CompleteTilt> {
    require_complete(sample)?;
    let ordered = sample.ordered();
    let tail = ordered.tail(k)?;
    let tilt = solve_tail(&tail, alpha)?;
    let mut weights = vec![tilt.below; sample.len()];
    for (&idx, &w) in ordered.original_index()[..k].iter().zip(&tilt.exceed) {
        weights[idx] = w;
    }
    Ok(CompleteTilt {
        lambda1: tilt.lambda1,
        lambda2: tilt.lambda2,
        weights,
        alpha,
        statistic: tilt.statistic,
    })
}

/// `𝕃(α)` for a complete sample.
pub fn cl_stat(sample: &CensoredSample, k: usize, alpha: f64) -> Result<f64> {
    Ok(solve_multipliers(sample, k, alpha)?.statistic)
}

/// `𝕃(α)` from the tail statistics alone; `+∞` where the tilt has no solution.
pub fn cl_stat_tail(tail: &TailStats, alpha: f64) -> f64 {
    solve_tail(tail, alpha).map_or(f64::INFINITY, |t| t.statistic)
}

/// `I(θ) = {α : 𝕃(α) <= q_θ}` computed from a complete sample's tail.
///
/// `𝕃` vanishes at `α = 1/H(k)` and the tilt exists for `1/α` strictly
/// between the smallest and largest log-excess; endpoints are clamped to
/// that range when `𝕃` stays below `q_θ` all the way to its edge.
pub fn ci_cl_tail(tail: &TailStats, theta: f64) -> Result<Interval> {
    check_theta(theta)?;
    if tail.uncensored_count() != tail.k() {
        return Err(Error::InvalidArgument(
            "the entropy-tilting region needs a complete (uncensored) sample".into(),
        ));
    }
    let q = chi2_1_critical(theta)?;
    let z = tail.log_excesses();
    let (zmax, zmin) = (z[0], z[z.len() - 1]);
    if zmax == zmin {
        return Err(Error::DegenerateHull);
    }
    let center = 1.0 / hill(tail);
    let excess = |a: f64| cl_stat_tail(tail, a) - q;
    let xtol = 1e-12 * center;
    let walk = |edge: f64| -> Result<f64> {
        let mut inner = center;
        for j in 1..=80 {
            let x = center + (edge - center) * (1.0 - 0.5f64.powi(j));
            if excess(x) > 0.0 {
                let (a, b) = if inner < x { (inner, x) } else { (x, inner) };
                return brent(excess, a, b, xtol);
            }
            inner = x;
        }
        Ok(edge)
    };
    let lower = walk(1.0 / zmax)?;
    let upper = walk(1.0 / zmin)?;
    Interval::new(lower, upper, 1.0 - theta, Method::Cl2)
}

/// `I(θ)` for a complete sample.
pub fn ci_cl(sample: &CensoredSample, k: usize, theta: f64) -> Result<Interval> {
    require_complete(sample)?;
    ci_cl_tail(&sample.ordered().tail(k)?, theta)
}
