//! Slow reference implementations of the closed-form kernels.
//!
//! These integrate the defining expressions numerically (or enumerate the
//! supremum directly) and exist to certify [`crate::kernels`]. None of them
//! call into the closed forms; the W2 oracle locates its breakpoints by
//! bisection on the normal cdf rather than through the quantile function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{Bandwidth, SortedSample};
use crate::normal_math::{cdf, pdf};

/// Midpoint-rule configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    panels: usize,
    /// Half-width of the integration window beyond the sample range
    /// (line integrals) or in normal-score units (quantile integrals).
    reach: f64,
}

impl QuadratureSpec {
    pub const MIN_PANELS: usize = 1000;

    pub fn new(panels: usize) -> Result<Self> {
        if panels < Self::MIN_PANELS {
            return Err(Error::invalid(
                "panels",
                format!("need at least {} panels, got {panels}", Self::MIN_PANELS),
            ));
        }
        Ok(Self { panels, reach: 10.0 })
    }

    pub fn with_reach(mut self, reach: f64) -> Self {
        self.reach = reach;
        self
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// 10^4 panels.
    pub fn fast() -> Self {
        Self::new(10_000).unwrap()
    }

    /// 10^6 panels.
    pub fn certify() -> Self {
        Self::new(1_000_000).unwrap()
    }
}

fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / m as f64;
    (0..m).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

// Solves cdf(u) = t by bisection.
fn cdf_inverse_by_bisection(t: f64, reach: f64) -> f64 {
    let (mut lo, mut hi) = (-reach, reach);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_0^1 (F_y^{-1}(t) - Phi^{-1}(t))^2 dt`.
///
/// Evaluated after the substitution `t = Phi(u)`, which turns each step of
/// the empirical quantile into a finite `u`-interval and removes the
/// logarithmic singularities at the ends. Each interval gets a midpoint rule
/// with a share of the panels proportional to its length.
pub fn w2_numeric(y: &SortedSample, q: QuadratureSpec) -> f64 {
    let n = y.len();
    let reach = q.reach.max(14.0);
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(-reach);
    for i in 1..n {
        edges.push(cdf_inverse_by_bisection(i as f64 / n as f64, reach));
    }
    edges.push(reach);
    let total = 2.0 * reach;
    y.values()
        .iter()
        .zip(edges.windows(2))
        .map(|(&v, e)| {
            let m = ((q.panels as f64 * (e[1] - e[0]) / total).ceil() as usize).max(64);
            midpoint(|u| (v - u) * (v - u) * pdf(u), e[0], e[1], m)
        })
        .sum()
}

/// `‖(1/n) Σ N(y_i, γ) - N(0, 1 + γ)‖_2^2` by midpoint quadrature on the line.
pub fn cw_numeric(y: &SortedSample, q: QuadratureSpec) -> f64 {
    cw_numeric_with_bandwidth(y, Bandwidth::silverman(y.len()), q)
}

pub fn cw_numeric_with_bandwidth(y: &SortedSample, bw: Bandwidth, q: QuadratureSpec) -> f64 {
    let g = bw.gamma();
    let n = y.len() as f64;
    let span = y.values().iter().fold(0.0f64, |m, v| m.max(v.abs())) + q.reach;
    let k_norm = (2.0 * PI * g).sqrt().recip();
    let t_var = 1.0 + g;
    let t_norm = (2.0 * PI * t_var).sqrt().recip();
    let integrand = |x: f64| {
        let mix: f64 = y
            .values()
            .iter()
            .map(|&c| k_norm * (-0.5 * (x - c) * (x - c) / g).exp())
            .sum::<f64>()
            / n;
        let target = t_norm * (-0.5 * x * x / t_var).exp();
        (mix - target) * (mix - target)
    };
    midpoint(integrand, -span, span, q.panels)
}

/// `∫_0^1 (F_z^{-1}(t) - t)^2 dt` with `z_i = Phi(y_i)`.
pub fn cvm_numeric(y: &SortedSample, q: QuadratureSpec) -> f64 {
    let n = y.len();
    let per = (q.panels / n).max(16);
    y.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let z = cdf(v);
            let a = i as f64 / n as f64;
            let b = (i + 1) as f64 / n as f64;
            midpoint(|t| (z - t) * (z - t), a, b, per)
        })
        .sum()
}

/// Two-sided `sup_x |F_n(x) - Phi(x)|` by direct enumeration.
///
/// At each distinct sample value the empirical cdf is counted from scratch
/// for both the left limit and the value itself.
pub fn ks_numeric(y: &SortedSample) -> f64 {
    let vals = y.values();
    let n = vals.len() as f64;
    let mut best = 0.0f64;
    for &x in vals {
        let below = vals.iter().filter(|&&v| v < x).count() as f64 / n;
        let at_or_below = vals.iter().filter(|&&v| v <= x).count() as f64 / n;
        let f = cdf(x);
        best = best.max((at_or_below - f).abs()).max((f - below).abs());
    }
    best
}
