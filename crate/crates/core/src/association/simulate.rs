use alloc::vec::Vec;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::data::{FrequencyModel, HaplotypeSample};
use super::similarity::SimilarityMatrix;
use crate::parallel::map_indexed;
use crate::rng::stream;
use crate::{Error, Result};

/// Which two-sample statistic to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// `(p̂ − q̂)ᵀA(p̂ − q̂)`
    Ds,
    /// `p̂ᵀAp̂ − q̂ᵀAq̂`
    Dt,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Ds => "ds",
            Statistic::Dt => "dt",
        }
    }
}

/// Multinomial draw by successive conditional binomials.
fn multinomial<R: Rng>(rng: &mut R, probs: &[f64], total: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(probs.len());
    let mut remaining = total;
    let mut mass = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(remaining);
            break;
        }
        let x = if remaining == 0 || p <= 0.0 {
            0
        } else if p >= mass {
            remaining
        } else {
            Binomial::new(remaining, p / mass)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        out.push(x);
        remaining -= x;
        mass -= p;
    }
    out
}

fn check_sizes(n: u64, m: u64) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::validation("both group sizes must be at least 1"));
    }
    Ok(())
}

/// Group 1 ~ Multinomial(n; p), group 2 ~ Multinomial(m; q).
pub fn simulate_counts(freqs: &FrequencyModel, n: u64, m: u64, seed: u64) -> Result<HaplotypeSample> {
    check_sizes(n, m)?;
    let mut rng = stream(seed, 0);
    let c1 = multinomial(&mut rng, freqs.p(), n);
    let c2 = multinomial(&mut rng, freqs.q(), m);
    HaplotypeSample::new(freqs.haplotypes().to_vec(), c1, c2)
}

/// `n_rep` simulated values of the statistic, replicate `i` from stream
/// `(seed, i)`, in index order.
#[allow(clippy::too_many_arguments)]
pub fn simulate_statistics(
    freqs: &FrequencyModel,
    a: &SimilarityMatrix,
    n: u64,
    m: u64,
    statistic: Statistic,
    n_rep: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<f64>> {
    check_sizes(n, m)?;
    if a.k() != freqs.k() {
        return Err(Error::validation(
            "similarity matrix and frequencies differ in dimension",
        ));
    }
    let a = a.matrix();
    let k = freqs.k();
    Ok(map_indexed(n_rep, workers, |i| {
        let mut rng = stream(seed, i as u64);
        let c1 = multinomial(&mut rng, freqs.p(), n);
        let c2 = multinomial(&mut rng, freqs.q(), m);
        let (nf, mf) = (n as f64, m as f64);
        let (mut x, mut y): (Vec<f64>, Vec<f64>) = (Vec::with_capacity(k), Vec::with_capacity(k));
        for j in 0..k {
            x.push(c1[j] as f64 / nf);
            y.push(c2[j] as f64 / mf);
        }
        match statistic {
            Statistic::Ds => {
                let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                bilinear(a, &s, &s)
            }
            Statistic::Dt => bilinear(a, &x, &x) - bilinear(a, &y, &y),
        }
    }))
}

pub(crate) fn bilinear(a: &crate::linalg::Matrix, x: &[f64], y: &[f64]) -> f64 {
    let k = x.len();
    let mut acc = 0.0;
    for j in 0..k {
        if y[j] == 0.0 {
            continue;
        }
        let mut col = 0.0;
        for i in 0..k {
            col += a[(i, j)] * x[i];
        }
        acc += col * y[j];
    }
    acc
}
