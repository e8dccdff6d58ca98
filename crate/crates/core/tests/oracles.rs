//! Solvers checked against brute-force scans and an independent Gamma implementation.

mod common;

use common::*;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Gamma};
use tailindex::*;

/// Smallest grid point where the decreasing map `Σ u/(1+λu)` turns negative.
fn lambda_grid(u: &[f64], points: usize) -> (f64, f64) {
    let umax = u.iter().cloned().fold(f64::MIN, f64::max);
    let umin = u.iter().cloned().fold(f64::MAX, f64::min);
    let (lo, hi) = (-1.0 / umax, -1.0 / umin);
    let step = (hi - lo) / points as f64;
    let g = |l: f64| u.iter().map(|&x| x / (1.0 + l * x)).sum::<f64>();
    let mut prev = lo + 0.5 * step;
    for j in 1..points {
        let l = lo + (j as f64 + 0.5) * step;
        if g(l) < 0.0 {
            return (0.5 * (prev + l), step);
        }
        prev = l;
    }
    (prev, step)
}

#[test]
fn solve_lambda_matches_grid_scan() {
    let mut r = rng(11);
    for _ in 0..100 {
        let len = r.random_range(2..60);
        let mut u: Vec<f64> = (0..len).map(|_| r.random_range(-3.0..2.0)).collect();
        u[0] = r.random_range(0.1..2.0);
        u[1] = r.random_range(-3.0..-0.1);
        let lambda = solve_lambda(&u).unwrap();
        let (grid, step) = lambda_grid(&u, 200_000);
        assert!((lambda - grid).abs() <= 2.0 * step, "λ = {lambda}, grid = {grid}, step = {step}");
    }
}

/// Shortest `[a, b]` with mass `1 − θ` by scanning the lower tail mass.
fn hpdi_oracle(shape: f64, rate: f64, theta: f64) -> (f64, f64) {
    let g = Gamma::new(shape, rate).unwrap();
    let ends = |p: f64| (g.inverse_cdf(p), g.inverse_cdf(p + 1.0 - theta));
    let len = |p: f64| {
        let (a, b) = ends(p);
        b - a
    };
    let n = 400;
    let mut best = 0.0;
    for j in 0..=n {
        let p = theta * j as f64 / n as f64;
        if len(p) < len(best) {
            best = p;
        }
    }
    // golden-section refinement around the best grid cell
    let (mut lo, mut hi) = ((best - theta / n as f64).max(0.0), (best + theta / n as f64).min(theta));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = hi - phi * (hi - lo);
        let d = lo + phi * (hi - lo);
        if len(c) < len(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    ends(0.5 * (lo + hi))
}

#[test]
fn hpdi_matches_grid_search() {
    let mut r = rng(12);
    for _ in 0..20 {
        let shape = r.random_range(1.2..150.0);
        let rate = r.random_range(0.2..40.0);
        let theta = [0.01, 0.05, 0.1, 0.2][r.random_range(0..4)];
        let post = GammaPosterior::new(shape, rate).unwrap();
        let iv = hpdi(&post, theta).unwrap();
        let (a, b) = hpdi_oracle(shape, rate, theta);
        assert!((iv.lower - a).abs() <= 2e-4, "shape {shape} rate {rate}: {} vs {a}", iv.lower);
        assert!((iv.upper - b).abs() <= 2e-4, "shape {shape} rate {rate}: {} vs {b}", iv.upper);
    }
}

#[test]
fn hpdi_below_unit_shape_starts_at_zero() {
    let post = GammaPosterior::new(0.7, 2.0).unwrap();
    let iv = hpdi(&post, 0.05).unwrap();
    let g = Gamma::new(0.7, 2.0).unwrap();
    assert_eq!(iv.lower, 0.0);
    assert!((iv.upper - g.inverse_cdf(0.95)).abs() < 1e-9);
}

#[test]
fn gamma_quantile_matches_trapezoid_integration() {
    // Gamma(5, 2): integrate the density on a fine grid and locate mass 1/2.
    let (shape, rate) = (5.0f64, 2.0f64);
    let dens = |x: f64| rate.powf(shape) * x.powf(shape - 1.0) * (-rate * x).exp() / 24.0;
    let h = 1e-5;
    let (mut x, mut mass) = (0.0, 0.0);
    while mass < 0.5 {
        let step = 0.5 * (dens(x) + dens(x + h)) * h;
        if mass + step >= 0.5 {
            x += h * (0.5 - mass) / step;
            break;
        }
        mass += step;
        x += h;
    }
    let q = gamma_quantile(0.5, &GammaPosterior::new(shape, rate).unwrap()).unwrap();
    assert!((q - x).abs() < 1e-6, "{q} vs {x}");
}

#[test]
fn gamma_quantile_agrees_with_independent_implementation() {
    for &shape in &[0.3, 1.0, 2.5, 17.0, 400.0] {
        let g = Gamma::new(shape, 1.0).unwrap();
        for &p in &[1e-6, 0.025, 0.5, 0.975, 1.0 - 1e-6] {
            let ours = tailindex::special::gamma_quantile_std(p, shape).unwrap();
            let theirs = g.inverse_cdf(p);
            assert!((ours - theirs).abs() <= 1e-8 * theirs.max(1.0), "shape {shape} p {p}");
        }
    }
}

/// Dense scan of `√k |#{V_i > t}/k − exp(−α̂ t)|` over `t = log r`.
fn ks_oracle(sample: &CensoredSample, k: usize) -> f64 {
    let tail = tail_of(sample, k);
    let mut v = tail.log_excesses().to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let alpha = 1.0 / hill(&tail);
    let kf = k as f64;
    let tmax = v[k - 1] * 1.01;
    let points = 400_000;
    let mut best = 0.0f64;
    for j in 1..=points {
        let t = tmax * j as f64 / points as f64;
        let above = k - v.partition_point(|&x| x <= t);
        best = best.max((above as f64 / kf - (-alpha * t).exp()).abs());
    }
    kf.sqrt() * best
}

#[test]
fn ks_jump_points_match_dense_grid() {
    let mut r = rng(13);
    for i in 0..50 {
        let n = r.random_range(40..300);
        let sample = if i % 2 == 0 {
            pareto(n, r.random_range(0.5..3.0), 1000 + i)
        } else {
            let mut g = rng(2000 + i);
            CensoredSample::complete((0..n).map(|_| 1.0 + unit(&mut g) * 10.0).collect()).unwrap()
        };
        let k = r.random_range(2..n / 2);
        let stat = ks_stat(&sample, k).unwrap();
        let oracle = ks_oracle(&sample, k);
        assert!((stat - oracle).abs() < 1e-3, "sample {i}: {stat} vs {oracle}");
        assert!(stat >= oracle - 1e-12);
    }
}

/// First grid point (walking out from `center` in steps of `step`) where `f > q`.
fn scan_edge(f: impl Fn(f64) -> f64, center: f64, step: f64, q: f64, dir: f64) -> f64 {
    let mut a = center;
    loop {
        let next = a + dir * step;
        if next <= 0.0 || f(next) > q {
            return a + 0.5 * dir * step;
        }
        a = next;
    }
}

#[test]
fn ci_ml_matches_alpha_scan() {
    for seed in 0..5 {
        let tail = tail_of(&censored_pareto(2000, 1.0, 2.0, 40 + seed), 300);
        let ml = ml_alpha(&tail).unwrap();
        let iv = ci_ml(&tail, 0.05).unwrap();
        let q = 3.841_458_820_694_124;
        let f = |a: f64| lr_stat(&tail, a).unwrap();
        let step = 2e-5;
        assert!((iv.lower - scan_edge(f, ml, step, q, -1.0)).abs() <= 2e-5);
        assert!((iv.upper - scan_edge(f, ml, step, q, 1.0)).abs() <= 2e-5);
    }
}

#[test]
fn ci_el_matches_alpha_scan() {
    for seed in 0..5 {
        let tail = tail_of(&censored_pareto(2000, 1.0, 2.0, 60 + seed), 150);
        let center = el_center(&tail).unwrap();
        let iv = ci_el(&tail, 0.05).unwrap();
        let q = 3.841_458_820_694_124;
        let f = |a: f64| elr_stat(&tail, a);
        let step = 2e-4;
        assert!((iv.lower - scan_edge(f, center, step, q, -1.0)).abs() <= 2e-4);
        assert!((iv.upper - scan_edge(f, center, step, q, 1.0)).abs() <= 2e-4);
    }
}

#[test]
fn ml_statistic_is_minimized_at_ml() {
    // k p̂ = 100 with Σ V = 100, so α̂ = 1
    let v: Vec<f64> = (0..100).map(|i| 1.99 - 0.02 * i as f64).collect();
    let tail = TailStats::from_parts(1000, 1.0, v, vec![true; 100]).unwrap();
    let ml = ml_alpha(&tail).unwrap();
    assert!((ml - 1.0).abs() < 1e-12);
    let argmin = (1..40_000)
        .map(|j| 0.5 + j as f64 * 2.5e-5)
        .min_by(|a, b| lr_stat(&tail, *a).unwrap().partial_cmp(&lr_stat(&tail, *b).unwrap()).unwrap())
        .unwrap();
    assert!((argmin - ml).abs() <= 2e-5);
}

#[test]
fn hill_is_consistent_on_pareto() {
    let tail = tail_of(&pareto(5000, 2.0, 5), 200);
    assert!((hill(&tail) - 0.5).abs() < 0.1);
}

#[test]
fn complete_tilt_normalizer_has_closed_form() {
    let sample = pareto(500, 1.5, 21);
    let k = 60;
    let tail = tail_of(&sample, k);
    let center = 1.0 / hill(&tail);
    for &alpha in &[0.8 * center, center, 1.3 * center] {
        let tilt = solve_multipliers(&sample, k, alpha).unwrap();
        let (n, kf) = (500.0, k as f64);
        let s: f64 = tail
            .log_excesses()
            .iter()
            .map(|&z| (-tilt.lambda2 * (z - 1.0 / alpha)).exp())
            .sum();
        let closed = -1.0 + (((n - kf) + s) / n).ln();
        assert!((tilt.lambda1 - closed).abs() < 1e-10, "{} vs {closed}", tilt.lambda1);
    }
}

#[test]
fn cl_statistic_vanishes_at_inverse_hill() {
    let sample = pareto(800, 1.0, 22);
    let k = 80;
    let center = 1.0 / hill(&tail_of(&sample, k));
    assert!(cl_stat(&sample, k, center).unwrap() < 1e-9);
    let argmin = (1..4000)
        .map(|j| center * (0.8 + j as f64 * 1e-4))
        .min_by(|a, b| {
            cl_stat(&sample, k, *a).unwrap().partial_cmp(&cl_stat(&sample, k, *b).unwrap()).unwrap()
        })
        .unwrap();
    assert!((argmin - center).abs() <= 1e-4 * center);
}
