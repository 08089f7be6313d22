use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

use super::data::{FrequencyModel, HaplotypeSample};
use super::estimators::{form_for_ds, form_for_ds_pooled, pooled_sigma, statistic_ds, traces_fast, PooledEstimate};
use super::similarity::SimilarityMatrix;
use super::simulate::bilinear;
use crate::parallel::map_indexed;
use crate::quadform::{
    four_cum, mc_sample, spectral_reduce, split_sign_approx, two_cum, Surrogate, TwoCumSurrogate,
    WeightedChiSquareForm, DEFAULT_RANK_TOL,
};
use crate::rng::stream;
use crate::{Error, Method, Result};

/// Upper end of the sample-size search.
pub const MAX_SAMPLE_SIZE: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferenceOptions {
    pub rank_tol: f64,
    /// Draws for [`Method::MonteCarlo`].
    pub n_draws: usize,
    /// Relabellings for [`Method::Permutation`].
    pub n_perm: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for InferenceOptions {
    fn default() -> Self {
        InferenceOptions {
            rank_tol: DEFAULT_RANK_TOL,
            n_draws: 100_000,
            n_perm: 10_000,
            seed: 0,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PValueReport {
    pub method: Method,
    pub statistic: f64,
    pub p_value: f64,
    /// Absent for the simulation-based methods.
    pub surrogate: Option<Surrogate>,
    /// Rank of the null covariance; absent for permutation.
    pub r_sigma: Option<usize>,
    /// Haplotypes observed in neither group, removed before estimation.
    pub dropped: Vec<String>,
    pub warnings: Vec<String>,
    /// Monte Carlo draws or permutations used.
    pub replicates: Option<usize>,
    /// Replicates at least as large as the observed statistic.
    pub exceedances: Option<u64>,
}

fn not_definite() -> Error {
    Error::NotApplicable {
        reason: "weights of the reduced form have mixed signs (indefinite similarity matrix)",
        fallback: Some(Method::DiffChisq),
    }
}

/// Null p-value `P(D_s ≥ d̂_s)` under the pooled estimate `Σ̂_s` with zero mean.
pub fn pvalue(
    sample: &HaplotypeSample,
    a: &SimilarityMatrix,
    method: Method,
    opts: &InferenceOptions,
) -> Result<PValueReport> {
    if a.k() != sample.k() {
        return Err(Error::validation(format!(
            "similarity matrix is {0}x{0} but there are {1} haplotypes",
            a.k(),
            sample.k()
        )));
    }
    let (sample_used, kept) = sample.drop_empty();
    let a = a.select(&kept);
    let dropped: Vec<String> = (0..sample.k())
        .filter(|i| !kept.contains(i))
        .map(|i| sample.haplotypes()[i].clone())
        .collect();
    let d = statistic_ds(&sample_used, &a)?;
    let mut report = PValueReport {
        method,
        statistic: d,
        p_value: f64::NAN,
        surrogate: None,
        r_sigma: None,
        dropped,
        warnings: Vec::new(),
        replicates: None,
        exceedances: None,
    };

    if method == Method::Permutation {
        let perm = permutation_pvalue(&sample_used, &a, opts.n_perm, opts.seed, opts.workers)?;
        report.p_value = perm.p_value;
        report.replicates = Some(perm.n_perm);
        report.exceedances = Some(perm.exceedances);
        return Ok(report);
    }

    let pooled = pooled_sigma(&sample_used);
    let form = form_for_ds_pooled(&pooled, &a)?;
    let w = match spectral_reduce(&form, opts.rank_tol) {
        Ok((ws, w)) => {
            report.r_sigma = Some(ws.r_sigma);
            report.warnings.extend(ws.warnings);
            w
        }
        Err(Error::DegenerateForm { constant }) => {
            let s = Surrogate::PointMass(constant);
            report.p_value = s.tail_prob(d)?;
            report.surrogate = Some(s);
            report.r_sigma = Some(0);
            report
                .warnings
                .push(String::from("null covariance is zero; D_s is a point mass"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    // With nonnegative weights D_s ≥ 0 = c, so d̂_s ≤ 0 has tail probability 1
    // whatever the approximation.
    let at_support_min = w.is_nonnegative() && d <= w.c;

    let surrogate = match method {
        Method::TwoCum => {
            if !w.is_nonnegative() {
                return Err(not_definite());
            }
            let t = traces_fast(&a, &pooled)?;
            let s = TwoCumSurrogate::from_traces(t.tr_w, t.tr_w2)?;
            Some(Surrogate::TwoCum(TwoCumSurrogate { df0: t.df0(), ..s }))
        }
        Method::FourCum => {
            if !w.is_nonnegative() {
                return Err(not_definite());
            }
            Some(Surrogate::FourCum(four_cum(&form)?))
        }
        Method::DiffChisq => Some(Surrogate::Difference(split_sign_approx(&w)?)),
        Method::MonteCarlo => {
            let e = mc_sample(&w, opts.n_draws, opts.seed, opts.workers)?;
            report.replicates = Some(opts.n_draws);
            report.exceedances = Some(e.count_at_least(d));
            report.p_value = e.tail_fraction(d);
            None
        }
        Method::Permutation => unreachable!("handled above"),
    };
    if let Some(s) = surrogate {
        report.p_value = if at_support_min { 1.0 } else { s.tail_prob(d)? };
        report.surrogate = Some(s);
    } else if at_support_min {
        report.p_value = 1.0;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationReport {
    pub statistic: f64,
    pub p_value: f64,
    pub exceedances: u64,
    pub n_perm: usize,
}

/// `(1 + #{D_s(perm) ≥ d̂_s})/(1 + n_perm)` over random relabellings of the
/// pooled observations into groups of the original sizes. Permutation `i`
/// uses stream `(seed, i)`.
pub fn permutation_pvalue(
    sample: &HaplotypeSample,
    a: &SimilarityMatrix,
    n_perm: usize,
    seed: u64,
    workers: usize,
) -> Result<PermutationReport> {
    if n_perm == 0 {
        return Err(Error::Domain {
            what: "number of permutations",
            value: 0.0,
        });
    }
    let d_hat = statistic_ds(sample, a)?;
    let k = sample.k();
    let totals: Vec<u64> = sample
        .counts1()
        .iter()
        .zip(sample.counts2())
        .map(|(a, b)| a + b)
        .collect();
    let pool: Vec<usize> = totals
        .iter()
        .enumerate()
        .flat_map(|(j, &t)| core::iter::repeat_n(j, t as usize))
        .collect();
    let (n, m) = (sample.n() as usize, sample.m() as f64);
    let big = pool.len();
    let tie = 1e-12 * d_hat.abs();
    let a = a.matrix();
    let hits = map_indexed(n_perm, workers, |i| {
        let mut rng = stream(seed, i as u64);
        let mut pool = pool.clone();
        let mut c1 = vec![0u64; k];
        for t in 0..n {
            let j = rng.random_range(t..big);
            pool.swap(t, j);
            c1[pool[t]] += 1;
        }
        let s: Vec<f64> = (0..k)
            .map(|j| c1[j] as f64 / n as f64 - (totals[j] - c1[j]) as f64 / m)
            .collect();
        bilinear(a, &s, &s) >= d_hat - tie
    });
    let exceedances = hits.iter().filter(|&&h| h).count() as u64;
    Ok(PermutationReport {
        statistic: d_hat,
        p_value: (1 + exceedances) as f64 / (1 + n_perm) as f64,
        exceedances,
        n_perm,
    })
}

/// Surrogate used for the null critical value in [`power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NullSurrogate {
    #[default]
    FourCum,
    TwoCum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub power: f64,
    pub critical_value: f64,
    pub null: Surrogate,
    pub alternative: Surrogate,
    pub n: u64,
    pub m: u64,
    pub alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "significance level",
            value: alpha,
        });
    }
    Ok(())
}

fn reduce_or_point(
    form: &crate::quadform::GaussianQuadraticForm,
) -> Result<core::result::Result<WeightedChiSquareForm, f64>> {
    match spectral_reduce(form, DEFAULT_RANK_TOL) {
        Ok((_, w)) => Ok(Ok(w)),
        Err(Error::DegenerateForm { constant }) => Ok(Err(constant)),
        Err(e) => Err(e),
    }
}

/// Power of the level-`alpha` test with `n` and `m` observations. The
/// critical value comes from the null form at the mixture frequencies
/// `(n p + m q)/(n + m)`; the rejection probability from the four-cumulant
/// surrogate of the alternative form, or from sign splitting when the
/// similarity matrix is indefinite.
pub fn power(
    freqs: &FrequencyModel,
    a: &SimilarityMatrix,
    n: u64,
    m: u64,
    alpha: f64,
    null: NullSurrogate,
) -> Result<PowerReport> {
    check_alpha(alpha)?;
    if n == 0 || m == 0 {
        return Err(Error::validation("both group sizes must be at least 1"));
    }
    let pooled = PooledEstimate::from_frequencies(freqs.mixture(n, m), n, m);
    let null_form = form_for_ds_pooled(&pooled, a)?;
    let alt_form = form_for_ds(freqs, a, n, m)?;
    let w0 = reduce_or_point(&null_form)?.map_err(|constant| Error::DegenerateForm { constant })?;
    let (null_s, alt_s) = if w0.is_nonnegative() {
        let null_s = match null {
            NullSurrogate::FourCum => Surrogate::FourCum(four_cum(&null_form)?),
            NullSurrogate::TwoCum => Surrogate::TwoCum(two_cum(&null_form)?),
        };
        (null_s, Surrogate::FourCum(four_cum(&alt_form)?))
    } else {
        let alt_s = match reduce_or_point(&alt_form)? {
            Ok(w1) => Surrogate::Difference(split_sign_approx(&w1)?),
            Err(c) => Surrogate::PointMass(c),
        };
        (Surrogate::Difference(split_sign_approx(&w0)?), alt_s)
    };
    let critical_value = null_s.critical_value(alpha)?;
    Ok(PowerReport {
        power: alt_s.tail_prob(critical_value)?,
        critical_value,
        null: null_s,
        alternative: alt_s,
        n,
        m,
        alpha,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSizeReport {
    pub n: u64,
    pub m: u64,
    pub power: f64,
    /// Power at `n − 1` (absent when `n` is the lower search bound).
    pub power_below: Option<f64>,
    pub evaluations: usize,
    pub warnings: Vec<String>,
}

/// Smallest `n ≥ 2`, with `m = round(ratio·n)`, whose power reaches
/// `target_power`: doubling from 2, then bisection on the integers.
pub fn sample_size(
    freqs: &FrequencyModel,
    a: &SimilarityMatrix,
    ratio: f64,
    alpha: f64,
    target_power: f64,
    null: NullSurrogate,
) -> Result<SampleSizeReport> {
    check_alpha(alpha)?;
    if !(target_power > alpha && target_power < 1.0) {
        return Err(Error::Domain {
            what: "target power",
            value: target_power,
        });
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::Domain {
            what: "group size ratio",
            value: ratio,
        });
    }
    if freqs.is_null() {
        return Err(Error::validation("p equals q, so power never exceeds alpha"));
    }
    let m_of = |n: u64| ((ratio * n as f64).round() as u64).max(1);
    let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
    let mut eval = |n: u64| -> Result<f64> {
        if let Some(&p) = cache.get(&n) {
            return Ok(p);
        }
        let p = power(freqs, a, n, m_of(n), alpha, null)?.power;
        cache.insert(n, p);
        Ok(p)
    };

    let mut hi = 2u64;
    if eval(hi)? < target_power {
        let mut lo;
        loop {
            lo = hi;
            if hi == MAX_SAMPLE_SIZE {
                return Err(Error::Unreachable {
                    max_n: MAX_SAMPLE_SIZE,
                    achieved_power: eval(hi)?,
                });
            }
            hi = (2 * hi).min(MAX_SAMPLE_SIZE);
            if eval(hi)? >= target_power {
                break;
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if eval(mid)? >= target_power {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let mut warnings = Vec::new();
    let points: Vec<(u64, f64)> = cache.iter().map(|(&n, &p)| (n, p)).collect();
    for w in points.windows(2) {
        if w[1].1 < w[0].1 - 1e-9 {
            warnings.push(format!(
                "power decreased from {:.6} at n = {} to {:.6} at n = {}",
                w[0].1, w[0].0, w[1].1, w[1].0
            ));
        }
    }
    Ok(SampleSizeReport {
        n: hi,
        m: m_of(hi),
        power: cache[&hi],
        power_below: if hi > 2 { Some(cache[&(hi - 1)]) } else { None },
        evaluations: cache.len(),
        warnings,
    })
}
