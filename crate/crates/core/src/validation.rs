//! Distances between a continuous CDF `F₁` and a step CDF `F₂`, evaluated in
//! closed form at the discontinuities of `F₂`.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Step CDF of a finite sample. Ties are merged into one point carrying the
/// combined count.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    points: Vec<f64>,
    /// Cumulative counts: `cum[i]` observations are `≤ points[i]`.
    cum: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::validation("empty sample"));
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(Error::validation("sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        let mut points: Vec<f64> = Vec::new();
        let mut cum: Vec<u64> = Vec::new();
        for (i, &x) in samples.iter().enumerate() {
            if points.last() == Some(&x) {
                *cum.last_mut().unwrap() = i as u64 + 1;
            } else {
                points.push(x);
                cum.push(i as u64 + 1);
            }
        }
        Ok(EmpiricalDistribution { points, cum })
    }

    /// Distinct discontinuity points, increasing.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn sample_size(&self) -> u64 {
        *self.cum.last().unwrap()
    }

    /// Step heights `F₂(xᵢ)`.
    pub fn cdf_values(&self) -> Vec<f64> {
        (0..self.points.len()).map(|i| self.height(i)).collect()
    }

    fn height(&self, i: usize) -> f64 {
        self.cum[i] as f64 / self.sample_size() as f64
    }

    /// `F₂(x)`, right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        match self.points.partition_point(|&p| p <= x) {
            0 => 0.0,
            i => self.height(i - 1),
        }
    }

    /// Number of observations `≥ d`.
    pub fn count_at_least(&self, d: f64) -> u64 {
        match self.points.partition_point(|&p| p < d) {
            0 => self.sample_size(),
            i => self.sample_size() - self.cum[i - 1],
        }
    }

    /// Fraction of observations `≥ d`.
    pub fn tail_fraction(&self, d: f64) -> f64 {
        self.count_at_least(d) as f64 / self.sample_size() as f64
    }

    /// Left-continuous inverse: the smallest point with `F₂(x) ≥ p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let target = p * self.sample_size() as f64;
        let i = self.cum.partition_point(|&c| (c as f64) < target);
        self.points[i.min(self.points.len() - 1)]
    }

    pub fn mean(&self) -> f64 {
        let mut prev = 0;
        let mut s = 0.0;
        for (&x, &c) in self.points.iter().zip(&self.cum) {
            s += x * (c - prev) as f64;
            prev = c;
        }
        s / self.sample_size() as f64
    }
}

/// `max_i max(|F₁(xᵢ) − F₂(xᵢ)|, |F₁(xᵢ) − F₂(xᵢ₋₁)|)` with `F₂(x₀) = 0`.
pub fn kolmogorov_distance<F: FnMut(f64) -> f64>(mut f1: F, f2: &EmpiricalDistribution) -> f64 {
    let mut prev = 0.0;
    let mut best = 0.0f64;
    for (i, &x) in f2.points.iter().enumerate() {
        let v = f1(x);
        let h = f2.height(i);
        best = best.max((v - h).abs()).max((v - prev).abs());
        prev = h;
    }
    best
}

/// Same value as [`kolmogorov_distance`] for nondecreasing `F₁`, but evaluates
/// `F₁` only where a block of points could still beat the running maximum.
/// Worth it when `F₁` is expensive and the sample is large.
pub fn kolmogorov_distance_monotone<F: FnMut(f64) -> f64>(mut f1: F, f2: &EmpiricalDistribution) -> f64 {
    let n = f2.points.len();
    let step_before = |i: usize| if i == 0 { 0.0 } else { f2.height(i - 1) };
    let mut best = 0.0f64;
    let term = |i: usize, v: f64| (v - f2.height(i)).abs().max((v - step_before(i)).abs());
    let first = f1(f2.points[0]);
    best = best.max(term(0, first));
    if n == 1 {
        return best;
    }
    let last = f1(f2.points[n - 1]);
    best = best.max(term(n - 1, last));
    let mut stack = alloc::vec![(0usize, n - 1, first, last)];
    while let Some((i, j, fi, fj)) = stack.pop() {
        if j - i <= 1 {
            continue;
        }
        // Interior points k ∈ (i, j): F₁(x_k) ∈ [fi, fj] and the step values
        // involved lie in [F₂(x_i), F₂(x_{j-1})].
        let bound = (fj - f2.height(i)).max(f2.height(j - 1) - fi);
        if bound <= best {
            continue;
        }
        let mid = (i + j) / 2;
        let fm = f1(f2.points[mid]);
        best = best.max(term(mid, fm));
        stack.push((mid, j, fm, fj));
        stack.push((i, mid, fi, fm));
    }
    best
}

/// Cramér–von Mises distance `(∫(F₁ − F₂)² dF₁)^{1/2}` from the closed form
/// over the discontinuities of `F₂`.
pub fn cramer_von_mises_distance<F: FnMut(f64) -> f64>(mut f1: F, f2: &EmpiricalDistribution) -> f64 {
    let f: Vec<f64> = f2.points.iter().map(|&x| f1(x)).collect();
    let n = f.len();
    let cube = |v: f64| v * v * v;
    let mut s = cube(f[0]) + cube(1.0 - f[n - 1]);
    for i in 0..n - 1 {
        let h = f2.height(i);
        s += cube(f[i + 1] - h) - cube(f[i] - h);
    }
    (s / 3.0).max(0.0).sqrt()
}

/// `(empirical quantile, theoretical quantile)` at each probability.
pub fn qq_pairs<Q>(mut f1_quantile: Q, f2: &EmpiricalDistribution, probs: &[f64]) -> Result<Vec<(f64, f64)>>
where
    Q: FnMut(f64) -> Result<f64>,
{
    probs
        .iter()
        .map(|&p| {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain {
                    what: "probability",
                    value: p,
                });
            }
            Ok((f2.quantile(p), f1_quantile(p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn uniform(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    #[test]
    fn ties_are_merged() {
        let e = EmpiricalDistribution::from_samples(vec![3.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(e.points(), &[1.0, 2.0, 3.0]);
        assert_eq!(e.cdf_values(), vec![0.25, 0.5, 1.0]);
        assert_eq!(e.cdf(2.5), 0.5);
        assert_eq!(e.cdf(0.0), 0.0);
        assert_eq!(e.count_at_least(3.0), 2);
        assert_eq!(e.count_at_least(0.0), 4);
        assert_eq!(e.tail_fraction(3.5), 0.0);
        assert_eq!(e.quantile(0.5), 2.0);
        assert_eq!(e.quantile(0.51), 3.0);
        assert_eq!(e.quantile(1e-9), 1.0);
        assert!(EmpiricalDistribution::from_samples(vec![]).is_err());
    }

    #[test]
    fn staircase_against_generator() {
        let n = 40;
        let e = EmpiricalDistribution::from_samples((1..=n).map(|i| i as f64 / n as f64).collect()).unwrap();
        assert!((kolmogorov_distance(uniform, &e) - 1.0 / n as f64).abs() < 1e-15);
        assert_eq!(
            kolmogorov_distance_monotone(uniform, &e),
            kolmogorov_distance(uniform, &e)
        );
    }

    #[test]
    fn single_point() {
        let e = EmpiricalDistribution::from_samples(vec![0.0]).unwrap();
        assert!((kolmogorov_distance(|_| 0.4, &e) - 0.6).abs() < 1e-15);
        assert!((cramer_von_mises_distance(|_| 0.5, &e) - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_for_continuous_f1() {
        let e = EmpiricalDistribution::from_samples(vec![0.1, 0.5, 0.7]).unwrap();
        for shift in [-0.2, 0.0, 0.1] {
            assert!(kolmogorov_distance(|x| uniform(x + shift), &e) >= 1.0 / 6.0 - 1e-15);
        }
    }

    #[test]
    fn qq_pairs_are_monotone() {
        let e = EmpiricalDistribution::from_samples((0..100).map(|i| i as f64 / 100.0).collect()).unwrap();
        let probs = [0.01, 0.2, 0.5, 0.9, 0.99];
        let pairs = qq_pairs(Ok, &e, &probs).unwrap();
        assert!(pairs.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
        assert!(qq_pairs(Ok, &e, &[0.0]).is_err());
    }
}
