//! One-dimensional dissimilarities between a sorted sample and `N(0, 1)`.
//!
//! Every kernel takes a [`SortedSample`] and returns the distance together
//! with its gradient with respect to the sorted values. Mapping the gradient
//! back onto unsorted inputs is the caller's job (see
//! [`sort_with_permutation`]).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::normal_math::{cdf, gauss_at_zero, half_gauss_at_quantile, pdf};

/// An ascending, finite, non-empty sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Unsorted(i + 1));
        }
        Ok(Self { values })
    }

    /// Sorts `raw` ascending; see [`sort_with_permutation`].
    pub fn from_unsorted(raw: &[f64]) -> Result<Self> {
        sort_with_permutation(raw).map(|(s, _)| s)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The sample `sorted(-y)`.
    pub fn reflected(&self) -> Self {
        Self {
            values: self.values.iter().rev().map(|v| -v).collect(),
        }
    }
}

/// Stable ascending sort. `perm[i]` is the original index of sorted element `i`.
pub fn sort_with_permutation(raw: &[f64]) -> Result<(SortedSample, Vec<usize>)> {
    if raw.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mut perm: Vec<usize> = (0..raw.len()).collect();
    perm.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let values = perm.iter().map(|&i| raw[i]).collect();
    Ok((SortedSample { values }, perm))
}

/// Kernel bandwidth (a variance) for the Cramér-Wold smoothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth(f64);

impl Bandwidth {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::invalid("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(Self(gamma))
    }

    /// Silverman's rule of thumb, `(4 / (3n))^(2/5)`.
    pub fn silverman(n: usize) -> Self {
        Self((4.0 / (3.0 * n.max(1) as f64)).powf(0.4))
    }

    pub fn gamma(self) -> f64 {
        self.0
    }
}

/// A distance value and its gradient with respect to the sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    pub distance: f64,
    pub gradient: Vec<f64>,
}

/// Which Kolmogorov-Smirnov statistic to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KsVariant {
    /// `max_i |i/n - F(y_(i))|`
    #[default]
    Upper,
    /// `max_i max(i/n - F_i, F_i - (i-1)/n)`, the textbook two-sided statistic.
    TwoSided,
}

/// Squared 2-Wasserstein distance between two equally sized samples.
///
/// `z` is a constant; the gradient is with respect to `y` only.
pub fn sw_pairwise(y: &SortedSample, z: &SortedSample) -> Result<KernelResult> {
    if y.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            actual: z.len(),
        });
    }
    let n = y.len() as f64;
    let mut distance = 0.0;
    let gradient = y
        .values
        .iter()
        .zip(&z.values)
        .map(|(a, b)| {
            let d = a - b;
            distance += d * d;
            2.0 * d / n
        })
        .collect();
    Ok(KernelResult {
        distance: distance / n,
        gradient,
    })
}

/// Squared 2-Wasserstein distance from the empirical distribution of `y`
/// to `N(0, 1)`, in closed form.
pub fn w2_closed(y: &SortedSample) -> KernelResult {
    let n = y.len();
    let nf = n as f64;
    let c = (2.0 / PI).sqrt();
    let mut prev = half_gauss_at_quantile(0.0);
    let mut sq = 0.0;
    let mut cross = 0.0;
    let mut gradient = Vec::with_capacity(n);
    for (i, &v) in y.values.iter().enumerate() {
        let next = half_gauss_at_quantile((i + 1) as f64 / nf);
        let w = c * (next - prev);
        sq += v * v;
        cross += v * w;
        gradient.push(2.0 * v / nf + w);
        prev = next;
    }
    KernelResult {
        distance: (1.0 + sq / nf + cross).max(0.0),
        gradient,
    }
}

/// Squared L2 distance between the Gaussian-smoothed sample density and the
/// equally smoothed standard normal, with Silverman's bandwidth.
pub fn cw_closed(y: &SortedSample) -> KernelResult {
    cw_closed_with_bandwidth(y, Bandwidth::silverman(y.len()))
}

pub fn cw_closed_with_bandwidth(y: &SortedSample, bw: Bandwidth) -> KernelResult {
    let g = bw.gamma();
    let n = y.len();
    let nf = n as f64;
    let vals = &y.values;

    let pair_var = 2.0 * g;
    let cross_var = 1.0 + 2.0 * g;
    let mut gradient = vec![0.0; n];

    // Pairwise self-interaction; the diagonal contributes n * p(0) and no gradient.
    let mut pair = nf * gauss_at_zero(0.0, pair_var);
    for i in 0..n {
        for j in (i + 1)..n {
            let m = vals[i] - vals[j];
            let p = gauss_at_zero(m, pair_var);
            pair += 2.0 * p;
            // d/dm of 2 p(m) is -2 m / var * p(m); m depends on y_i (+) and y_j (-)
            let dm = -2.0 * m / pair_var * p;
            gradient[i] += dm;
            gradient[j] -= dm;
        }
    }
    let pair_scale = 1.0 / (nf * nf);
    for gi in gradient.iter_mut() {
        *gi *= pair_scale;
    }

    let mut cross = 0.0;
    for (gi, &v) in gradient.iter_mut().zip(vals) {
        let p = gauss_at_zero(v, cross_var);
        cross += p;
        *gi += 2.0 / nf * v / cross_var * p;
    }

    let distance = pair * pair_scale + gauss_at_zero(0.0, 2.0 + 2.0 * g) - 2.0 / nf * cross;
    KernelResult {
        distance: distance.max(0.0),
        gradient,
    }
}

/// Cramér-von Mises statistic of the probability-integral-transformed sample
/// `z_(i) = Phi(y_(i))` against the uniform distribution.
pub fn cvm_closed(y: &SortedSample) -> KernelResult {
    let n = y.len();
    let nf = n as f64;
    let mut sq = 0.0;
    let mut lin = 0.0;
    let mut gradient = Vec::with_capacity(n);
    for (i, &v) in y.values.iter().enumerate() {
        let z = cdf(v);
        let w = (2 * i + 1) as f64;
        sq += z * z;
        lin += z * w;
        gradient.push((2.0 * z / nf - w / (nf * nf)) * pdf(v));
    }
    let distance = sq / nf - lin / (nf * nf) + 1.0 / 3.0;
    KernelResult {
        distance: distance.max(1.0 / (12.0 * nf * nf)),
        gradient,
    }
}

/// Kolmogorov-Smirnov distance to `N(0, 1)`.
///
/// The gradient is a subgradient placed on the first index attaining the max.
pub fn ks_closed(y: &SortedSample, variant: KsVariant) -> KernelResult {
    let n = y.len();
    let nf = n as f64;
    let mut best = f64::NEG_INFINITY;
    let mut arg = 0;
    let mut slope = 0.0;
    for (i, &v) in y.values.iter().enumerate() {
        let f = cdf(v);
        let upper = (i + 1) as f64 / nf - f;
        let (val, s) = match variant {
            KsVariant::Upper => (upper.abs(), if upper >= 0.0 { -1.0 } else { 1.0 }),
            KsVariant::TwoSided => {
                let lower = f - i as f64 / nf;
                if upper >= lower {
                    (upper, -1.0)
                } else {
                    (lower, 1.0)
                }
            }
        };
        if val > best {
            best = val;
            arg = i;
            slope = s;
        }
    }
    let mut gradient = vec![0.0; n];
    gradient[arg] = slope * pdf(y.values[arg]);
    KernelResult {
        distance: best.max(0.0),
        gradient,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_math::quantile;

    fn s(v: &[f64]) -> SortedSample {
        SortedSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sort_examples() {
        let (v, p) = sort_with_permutation(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(v.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(p, vec![1, 2, 0]);
        let (v, p) = sort_with_permutation(&[5.0]).unwrap();
        assert_eq!((v.values(), p), (&[5.0][..], vec![0]));
        let (_, p) = sort_with_permutation(&[2.0, 2.0]).unwrap();
        assert_eq!(p, vec![0, 1]);
        assert!(matches!(sort_with_permutation(&[]), Err(Error::Empty)));
        assert!(sort_with_permutation(&[f64::NAN]).is_err());
    }

    #[test]
    fn sorted_sample_validation() {
        assert!(matches!(SortedSample::new(vec![1.0, 0.0]), Err(Error::Unsorted(1))));
        assert!(SortedSample::new(vec![]).is_err());
        assert!(SortedSample::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn sw_examples() {
        let y = s(&[0.0, 1.0]);
        assert_eq!(sw_pairwise(&y, &y).unwrap().distance, 0.0);
        assert_eq!(sw_pairwise(&s(&[2.0]), &s(&[0.0])).unwrap().distance, 4.0);
        let r = sw_pairwise(&y, &s(&[0.5, 0.5])).unwrap();
        assert!((r.distance - 0.25).abs() < 1e-15);
        assert_eq!(r.gradient, vec![-0.5, 0.5]);
        assert!(sw_pairwise(&y, &s(&[0.0])).is_err());
    }

    #[test]
    fn w2_examples() {
        assert!((w2_closed(&s(&[0.0; 7])).distance - 1.0).abs() < 1e-12);
        assert!((w2_closed(&s(&[3.0])).distance - 10.0).abs() < 1e-12);
        let n = 256;
        let mid: Vec<f64> = (0..n).map(|i| quantile((i as f64 + 0.5) / n as f64)).collect();
        let d = w2_closed(&s(&mid)).distance;
        assert!(d > 0.0 && d < 0.01, "{d}");
    }

    #[test]
    fn cw_single_point() {
        let g = (4.0f64 / 3.0).powf(0.4);
        let expect = (4.0 * PI * g).powf(-0.5) + (2.0 * PI * (2.0 + 2.0 * g)).powf(-0.5)
            - 2.0 * (2.0 * PI * (1.0 + 2.0 * g)).powf(-0.5);
        assert!((cw_closed(&s(&[0.0])).distance - expect).abs() < 1e-15);
    }

    #[test]
    fn cvm_examples() {
        for n in [1usize, 2, 5, 17] {
            let y: Vec<f64> = (1..=n)
                .map(|i| quantile((2 * i - 1) as f64 / (2 * n) as f64))
                .collect();
            let d = cvm_closed(&s(&y)).distance;
            let target = 1.0 / (12.0 * (n * n) as f64);
            assert!((d - target).abs() < 1e-12, "n={n}: {d} vs {target}");
        }
        assert!((cvm_closed(&s(&[0.0])).distance - 1.0 / 12.0).abs() < 1e-15);
        assert!((cvm_closed(&s(&[-5.0; 3])).distance - 1.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn ks_examples() {
        // F(40) rounds to exactly 1
        let y4: Vec<f64> = (1..4).map(|i| quantile(i as f64 / 4.0)).chain([40.0]).collect();
        assert!(ks_closed(&s(&y4), KsVariant::Upper).distance < 1e-12);
        assert_eq!(ks_closed(&s(&[0.0]), KsVariant::Upper).distance, 0.5);
        assert!((ks_closed(&s(&[-10.0, 10.0]), KsVariant::Upper).distance - 0.5).abs() < 1e-15);
        let two = ks_closed(&s(&[0.0]), KsVariant::TwoSided);
        assert_eq!(two.distance, 0.5);
    }

    #[test]
    fn ks_gradient_on_first_argmax() {
        // both points have deviation exactly 0.5
        let r = ks_closed(&s(&[-40.0, 40.0]), KsVariant::Upper);
        assert_eq!(r.gradient[1], 0.0);
    }

    #[test]
    fn bandwidth() {
        assert!((Bandwidth::silverman(1).gamma() - (4.0f64 / 3.0).powf(0.4)).abs() < 1e-15);
        assert!(Bandwidth::new(0.0).is_err());
    }
}
