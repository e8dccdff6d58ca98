//! Posteriors for the tail index under Jeffreys' prior `π(α) ∝ 1/α`.
//!
//! Two families are handled:
//!
//! * the conjugate Gamma posteriors obtained from the censored partial
//!   likelihood, with or without composite-likelihood weights, whose mean and
//!   mode are the MPE and MAP estimators and whose highest-density interval
//!   is `I_B`;
//! * the composite-likelihood posterior `π(α) · Π_i k w_i(α)` in which the
//!   weights are re-tilted at every `α` (see [`crate::elr`]); its
//!   highest-density interval is `I_BCL`.

use crate::elr::{el_level_set, elr_stat, tiltable_hull};
use crate::error::{Error, Result};
use crate::interval::{check_theta, Interval, Method};
use crate::roots::brent;
use crate::sample::TailStats;
use crate::special::{gamma_p, gamma_quantile_std, ln_gamma_density};

/// Gamma(shape, rate) posterior of `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPosterior {
    pub shape: f64,
    pub rate: f64,
}

impl GammaPosterior {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Gamma posterior needs positive finite shape and rate, got ({shape}, {rate})"
            )));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    /// Posterior mode; requires `shape > 1`.
    pub fn mode(&self) -> Result<f64> {
        if self.shape <= 1.0 {
            return Err(Error::MapUndefined { shape: self.shape });
        }
        Ok((self.shape - 1.0) / self.rate)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        gamma_p(self.shape, self.rate * x)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_gamma_density(self.shape, self.rate * x) + self.rate.ln()
    }
}

/// `Gamma(Σ δ_i, Σ V_i)`.
pub fn posterior_jeffrey(tail: &TailStats) -> Result<GammaPosterior> {
    let d = tail.uncensored_count();
    if d == 0 {
        return Err(Error::AllCensored);
    }
    GammaPosterior::new(d as f64, tail.sum_log_excess())
}

/// `Gamma(k Σ w_i δ_i, k Σ w_i V_i)` for composite-likelihood weights `w`.
pub fn posterior_cl(tail: &TailStats, weights: &[f64]) -> Result<GammaPosterior> {
    let k = tail.k();
    if weights.len() != k {
        return Err(Error::InvalidArgument(format!(
            "{} weights for a tail of size {k}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidArgument("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
    }
    let kf = k as f64;
    let mut shape = 0.0;
    let mut rate = 0.0;
    for ((&w, &v), &d) in weights.iter().zip(tail.log_excesses()).zip(tail.indicators()) {
        if d {
            shape += w;
        }
        rate += w * v;
    }
    if shape <= 0.0 {
        return Err(Error::AllCensored);
    }
    GammaPosterior::new(kf * shape, kf * rate)
}

/// Posterior-mean and posterior-mode estimates of `α`.
///
/// The same formulas serve the plain and the composite-likelihood posteriors:
/// for the latter the shape already carries the factor `k`, so subtracting
/// `1/k` inside the weighted indicator sum is subtracting 1 from the shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimates {
    pub mpe: f64,
    /// `None` when `shape <= 1`.
    pub map: Option<f64>,
}

pub fn point_estimates(post: &GammaPosterior) -> PointEstimates {
    PointEstimates {
        mpe: post.mean(),
        map: post.mode().ok(),
    }
}

/// Quantile of a Gamma posterior.
pub fn gamma_quantile(p: f64, post: &GammaPosterior) -> Result<f64> {
    Ok(gamma_quantile_std(p, post.shape)? / post.rate)
}

/// Shortest interval carrying posterior mass `1 − θ`.
///
/// For `shape <= 1` the density is nonincreasing and the interval starts at 0.
/// Otherwise the lower endpoint `a` is found on `(0, Q(θ))` as the root of
/// `log f(a) − log f(b(a))`, where `b(a)` closes the coverage constraint.
pub fn hpdi(post: &GammaPosterior, theta: f64) -> Result<Interval> {
    check_theta(theta)?;
    let level = 1.0 - theta;
    let s = post.shape;
    if s <= 1.0 {
        let upper = gamma_quantile(level, post)?;
        return Interval::new(0.0, upper, level, Method::B);
    }

    // Work on the standard Gamma(s, 1) scale and divide by the rate at the end.
    let upper_of = |a: f64| -> Result<f64> {
        let pa = gamma_p(s, a);
        gamma_quantile_std((pa + level).min(1.0 - 1e-16), s)
    };
    let a_max = gamma_quantile_std(theta, s)?;
    let mut failure = None;
    let objective = |a: f64| -> f64 {
        match upper_of(a) {
            Ok(b) => (s - 1.0) * (a / b).ln() - (a - b),
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        }
    };
    let a_hi = a_max * (1.0 - 1e-12);
    let a_lo = a_max * 1e-300;
    let root = brent(objective, a_lo, a_hi, 1e-15 * a_max);
    if let Some(e) = failure {
        return Err(e);
    }
    let a = root?;
    let b = upper_of(a)?;
    Interval::new(a / post.rate, b / post.rate, level, Method::B)
}

/// `I_B(θ)`: HPDI of the Jeffreys-prior Gamma posterior.
pub fn ci_bayes(tail: &TailStats, theta: f64) -> Result<Interval> {
    hpdi(&posterior_jeffrey(tail)?, theta)
}

const BEL_GRID: usize = 1201;
// Posterior mass is tabulated where the log-density is within this much of its peak.
const BEL_LOG_SPAN: f64 = 30.0;

/// Composite-likelihood posterior `π(α | data) ∝ α⁻¹ Π_i k w_i(α)` on the
/// tiltable hull, tabulated on a fine grid.
#[derive(Debug, Clone)]
pub struct TiltedPosterior {
    grid: Vec<f64>,
    log_density: Vec<f64>,
    // normalized density and its cumulative trapezoid integral
    density: Vec<f64>,
    cdf: Vec<f64>,
    tail: TailStats,
}

/// Unnormalized log-density of the composite-likelihood posterior.
pub fn tilted_log_posterior(tail: &TailStats, alpha: f64) -> f64 {
    -0.5 * elr_stat(tail, alpha) - alpha.ln()
}

impl TiltedPosterior {
    pub fn new(tail: &TailStats) -> Result<Self> {
        let (hull_lo, hull_hi) = tiltable_hull(tail)?;
        // The prior shifts the peak left of the EL center; widen until the
        // log-density at both ends is negligible relative to the peak.
        let mut span = 2.0 * BEL_LOG_SPAN + 2.0;
        loop {
            let (lo, hi) = el_level_set(tail, span)?;
            let grid: Vec<f64> = (0..BEL_GRID)
                .map(|j| lo + (hi - lo) * j as f64 / (BEL_GRID - 1) as f64)
                .collect();
            let log_density: Vec<f64> = grid
                .iter()
                .map(|&a| if a > 0.0 { tilted_log_posterior(tail, a) } else { f64::NEG_INFINITY })
                .collect();
            let peak = log_density.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !peak.is_finite() {
                return Err(Error::NumericalFailure("tilted posterior has no finite mass".into()));
            }
            let left_ok = log_density[0] < peak - BEL_LOG_SPAN || lo <= hull_lo;
            let right_ok = log_density[BEL_GRID - 1] < peak - BEL_LOG_SPAN || hi >= hull_hi;
            if (left_ok && right_ok) || span > 1e4 {
                return Ok(Self::tabulate(tail.clone(), grid, log_density, peak));
            }
            span *= 2.0;
        }
    }

    fn tabulate(tail: TailStats, grid: Vec<f64>, log_density: Vec<f64>, peak: f64) -> Self {
        let raw: Vec<f64> = log_density.iter().map(|&l| (l - peak).exp()).collect();
        let mut cdf = vec![0.0; raw.len()];
        for j in 1..raw.len() {
            cdf[j] = cdf[j - 1] + 0.5 * (raw[j] + raw[j - 1]) * (grid[j] - grid[j - 1]);
        }
        let total = cdf[raw.len() - 1];
        let density = raw.iter().map(|d| d / total).collect();
        cdf.iter_mut().for_each(|c| *c /= total);
        Self {
            grid,
            log_density,
            density,
            cdf,
            tail,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn mean(&self) -> f64 {
        let mut m = 0.0;
        for j in 1..self.grid.len() {
            let (x0, x1) = (self.grid[j - 1], self.grid[j]);
            m += 0.5 * (x0 * self.density[j - 1] + x1 * self.density[j]) * (x1 - x0);
        }
        m
    }

    fn mode_index(&self) -> usize {
        self.log_density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Cumulative mass up to `x`, with the density interpolated linearly inside a cell.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return 0.0;
        }
        if x >= g[g.len() - 1] {
            return 1.0;
        }
        let step = g[1] - g[0];
        let j = (((x - g[0]) / step).floor() as usize).min(g.len() - 2);
        let t = (x - g[j]) / step;
        let fx = self.density[j] + t * (self.density[j + 1] - self.density[j]);
        self.cdf[j] + 0.5 * (self.density[j] + fx) * (x - g[j])
    }

    // Where the tabulated log-density crosses `level` on one side of the mode.
    fn crossing(&self, level: f64, mode: usize, left: bool) -> (f64, usize) {
        let ld = &self.log_density;
        let mut j = mode;
        loop {
            let next = if left {
                if j == 0 {
                    return (self.grid[0], 0);
                }
                j - 1
            } else {
                if j + 1 == ld.len() {
                    return (self.grid[j], j);
                }
                j + 1
            };
            if ld[next] < level {
                let (x0, x1, l0, l1) = (self.grid[j], self.grid[next], ld[j], ld[next]);
                let t = if l1.is_finite() { (l0 - level) / (l0 - l1) } else { 0.0 };
                return (x0 + t * (x1 - x0), next);
            }
            j = next;
        }
    }

    /// Highest-density interval with mass `1 − θ`.
    pub fn hpdi(&self, theta: f64) -> Result<Interval> {
        check_theta(theta)?;
        let level = 1.0 - theta;
        let mode = self.mode_index();
        let peak = self.log_density[mode];
        let mass = |c: f64| {
            let (a, _) = self.crossing(c, mode, true);
            let (b, _) = self.crossing(c, mode, false);
            self.cdf_at(b) - self.cdf_at(a)
        };
        // mass(c) decreases as the level c rises toward the peak.
        let (mut lo, mut hi) = (peak - BEL_LOG_SPAN, peak);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mass(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);

        // Polish each endpoint on the exact log-density within its grid cell.
        let polish = |left: bool| -> f64 {
            let (x, j) = self.crossing(c, mode, left);
            let inner = if left { (j + 1).min(mode) } else { j.saturating_sub(1).max(mode) };
            let (a, b) = if left {
                (self.grid[j], self.grid[inner])
            } else {
                (self.grid[inner], self.grid[j])
            };
            let f = |al: f64| tilted_log_posterior(&self.tail, al) - c;
            if a > 0.0 && f(a).is_finite() && f(b).is_finite() && f(a).signum() != f(b).signum() {
                brent(f, a, b, 1e-12 * b).unwrap_or(x)
            } else {
                x
            }
        };
        let lower = polish(true);
        let upper = polish(false);
        Interval::new(lower.max(0.0), upper, level, Method::Bcl)
    }
}

/// `I_BCL(θ)`: HPDI of the composite-likelihood posterior.
pub fn ci_bcl(tail: &TailStats, theta: f64) -> Result<Interval> {
    TiltedPosterior::new(tail)?.hpdi(theta)
}
