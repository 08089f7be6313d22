//! Gaussian quadratic forms `D = XᵀAX`, `X ~ N(μ, Σ)` with `Σ` possibly
//! singular.
//!
//! A form is reduced to `Σ ωᵢ(Yᵢ + bᵢ)² + c` with independent standard normal
//! `Yᵢ` ([`spectral_reduce`]). Tail probabilities come from cumulant-matched
//! chi-square surrogates ([`two_cum`], [`four_cum`]), from matching the
//! positive and negative weights separately ([`split_sign_approx`]) when the
//! weights have mixed signs, or from simulation ([`mc_sample`]).

mod form;
mod montecarlo;
mod reduce;
mod surrogate;

pub use form::{cumulants, CumulantVector, GaussianQuadraticForm};
pub use montecarlo::{mc_draws, mc_sample};
pub use reduce::{
    reduce_singular_a, spectral_reduce, ReductionWorkspace, SingularAReduction, WeightedChiSquareForm, DEFAULT_RANK_TOL,
};
pub use surrogate::{
    critical_value, four_cum, split_sign_approx, tail_prob, two_cum, DifferenceSurrogate, FourCumSurrogate, Surrogate,
    TwoCumSurrogate,
};
