//! Log-gamma, the regularized incomplete gamma functions and their inverse.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Log of the Gamma(shape, 1) density at `x > 0`.
pub fn ln_gamma_density(shape: f64, x: f64) -> f64 {
    (shape - 1.0) * x.ln() - x - ln_gamma(shape)
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma(a)).exp()
}

fn series_p(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_TERMS {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * prefactor(a, x)
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn continued_fraction_q(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    prefactor(a, x) * h
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < a + 1.0 {
        series_p(a, x).min(1.0)
    } else {
        (1.0 - continued_fraction_q(a, x)).max(0.0)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        (1.0 - series_p(a, x)).max(0.0)
    } else {
        continued_fraction_q(a, x).min(1.0)
    }
}

/// Quantile of Gamma(shape, 1): the `x` with `P(shape, x) = p`.
///
/// Newton iteration kept inside a shrinking bracket, with bisection whenever
/// a Newton step would leave it. Converges to `|P(shape, x) - p| <= 1e-13`.
pub fn gamma_quantile_std(p: f64, shape: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("probability {p} outside (0, 1)")));
    }
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::InvalidArgument(format!("shape {shape} must be positive")));
    }

    let mut lo = 0.0;
    let mut hi = shape.max(1.0);
    while gamma_p(shape, hi) < p {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure("gamma quantile bracket overflow".into()));
        }
    }

    // Start from the small-x expansion P ≈ x^a / Γ(a+1) when it lands in the bracket.
    let small = ((p.ln() + ln_gamma(shape + 1.0)) / shape).exp();
    let mut x = if small > lo && small < hi { small } else { 0.5 * (lo + hi) };

    for _ in 0..400 {
        let cdf = gamma_p(shape, x);
        let resid = cdf - p;
        if resid.abs() <= 1e-13 {
            return Ok(x);
        }
        if resid < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
        let dens = ln_gamma_density(shape, x).exp();
        let step = if dens > 0.0 { resid / dens } else { f64::NAN };
        let next = x - step;
        x = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NumericalFailure(format!(
        "gamma quantile did not converge for p = {p}, shape = {shape}"
    )))
}

/// `q_θ`: the `(1 - θ)` quantile of the χ² distribution with one degree of freedom.
pub fn chi2_1_critical(theta: f64) -> Result<f64> {
    // χ²₁ is Gamma(1/2, rate 1/2).
    Ok(2.0 * gamma_quantile_std(1.0 - theta, 0.5)?)
}
