//! Null distributions, p-values, power and sample sizes for statistics of the
//! form `D = XᵀAX` where `X` is (possibly degenerate) multivariate normal and
//! `A` is an arbitrary symmetric matrix.
//!
//! The crate is `no_std` (it needs `alloc`). The default `std` feature only
//! adds thread-based workers to the Monte Carlo and permutation routines; the
//! results are bit-identical with or without it.
//!
//! Layout:
//!
//! * [`distributions`]: non-central chi-square, normal, and the difference of
//!   two scaled non-central chi-squares by numerical convolution.
//! * [`quadform`]: spectral reduction of a Gaussian quadratic form to a
//!   weighted chi-square sum, cumulants, the two- and four-cumulant chi-square
//!   surrogates, sign splitting and a Monte Carlo sampler.
//! * [`association`]: haplotype samples, similarity measures, the `D_s`/`D_t`
//!   statistics and the p-value, power and sample-size solvers.
//! * [`validation`]: Kolmogorov and Cramér–von Mises distances between a
//!   continuous CDF and a step CDF, and QQ pairs.

#![no_std]
// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod association;
pub mod distributions;
mod error;
pub mod linalg;
pub mod models;
pub mod parallel;
pub mod quadform;
pub mod quadrature;
pub mod rng;
pub mod roots;
pub mod special;
pub mod validation;

pub use error::{Error, Result};

/// How a tail probability is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Central chi-square matched on the first two cumulants.
    TwoCum,
    /// Shifted, scaled non-central chi-square matched on four cumulants.
    FourCum,
    /// Positive and negative weights matched separately, then convolved.
    DiffChisq,
    /// Direct simulation of the weighted chi-square representation.
    MonteCarlo,
    /// Relabelling of the pooled haplotype observations.
    Permutation,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::TwoCum,
        Method::FourCum,
        Method::DiffChisq,
        Method::MonteCarlo,
        Method::Permutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::TwoCum => "two-cum",
            Method::FourCum => "four-cum",
            Method::DiffChisq => "diff-chisq",
            Method::MonteCarlo => "mc",
            Method::Permutation => "permutation",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Validation(alloc::format!("unknown method `{s}`")))
    }
}
