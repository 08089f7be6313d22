//! Two-sample haplotype association: similarity measures, the statistics
//! `D_s = ŝᵀAŝ` (with `ŝ = p̂ − q̂`) and `D_t = p̂ᵀAp̂ − q̂ᵀAq̂`, covariance
//! estimators, and the p-value, power and sample-size solvers built on
//! [`quadform`](crate::quadform).

mod data;
mod estimators;
mod inference;
mod similarity;
mod simulate;

pub use data::{FrequencyModel, HaplotypeSample};
pub use estimators::{
    estimate_sigma_s, form_for_ds, form_for_ds_pooled, pooled_sigma, schaid_chisq, statistic_ds, statistic_dt,
    statistic_dt_form, traces_fast, FastTraces, PooledEstimate,
};
pub use inference::{
    permutation_pvalue, power, pvalue, sample_size, InferenceOptions, NullSurrogate, PValueReport, PermutationReport,
    PowerReport, SampleSizeReport, MAX_SAMPLE_SIZE,
};
pub use similarity::{similarity_matrix, Measure, SimilarityMatrix};
pub use simulate::{simulate_counts, simulate_statistics, Statistic};
