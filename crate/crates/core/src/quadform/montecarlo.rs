use alloc::vec::Vec;
use rand_distr::{Distribution, StandardNormal};

use super::reduce::WeightedChiSquareForm;
use crate::parallel::map_indexed;
use crate::rng::stream;
use crate::validation::EmpiricalDistribution;
use crate::{Error, Result};

/// `n_draws` realizations of `Σ ωᵢ(Yᵢ + bᵢ)² + c`, draw `i` from stream
/// `(seed, i)`, in index order.
pub fn mc_draws(w: &WeightedChiSquareForm, n_draws: usize, seed: u64, workers: usize) -> Vec<f64> {
    map_indexed(n_draws, workers, |i| {
        let mut rng = stream(seed, i as u64);
        let mut d = w.c;
        for (&omega, &b) in w.omega.iter().zip(&w.b) {
            let y: f64 = StandardNormal.sample(&mut rng);
            d += omega * (y + b) * (y + b);
        }
        d
    })
}

pub fn mc_sample(
    w: &WeightedChiSquareForm,
    n_draws: usize,
    seed: u64,
    workers: usize,
) -> Result<EmpiricalDistribution> {
    if n_draws == 0 {
        return Err(Error::Domain {
            what: "number of draws",
            value: 0.0,
        });
    }
    EmpiricalDistribution::from_samples(mc_draws(w, n_draws, seed, workers))
}
