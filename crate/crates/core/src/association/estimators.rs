use alloc::vec::Vec;

use super::data::{FrequencyModel, HaplotypeSample};
use super::similarity::SimilarityMatrix;
use crate::distributions::NoncentralChiSquare;
use crate::linalg::{self, Matrix, Vector};
use crate::quadform::GaussianQuadraticForm;
use crate::{Error, Method, Result};

/// `(diag(p) − ppᵀ)/n + (diag(q) − qqᵀ)/m`, the covariance of `p̂ − q̂`.
pub fn estimate_sigma_s(p: &[f64], q: &[f64], n: u64, m: u64) -> Matrix {
    multinomial_cov(p, 1.0 / n as f64) + multinomial_cov(q, 1.0 / m as f64)
}

fn multinomial_cov(p: &[f64], scale: f64) -> Matrix {
    let k = p.len();
    Matrix::from_fn(k, k, |i, j| {
        let d = if i == j { p[i] } else { 0.0 };
        scale * (d - p[i] * p[j])
    })
}

/// The pooled null estimate `ρ̂ = (n p̂ + m q̂)/(n + m)` and
/// `Σ̂_s = (1/n + 1/m)(R̂ − ρ̂ρ̂ᵀ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledEstimate {
    pub rho_hat: Vec<f64>,
    pub n: u64,
    pub m: u64,
    pub sigma_hat: Matrix,
}

impl PooledEstimate {
    pub fn from_frequencies(rho: Vec<f64>, n: u64, m: u64) -> Self {
        let scale = 1.0 / n as f64 + 1.0 / m as f64;
        let sigma_hat = multinomial_cov(&rho, scale);
        PooledEstimate {
            rho_hat: rho,
            n,
            m,
            sigma_hat,
        }
    }

    /// `R̂ = diag(ρ̂)`.
    pub fn r_hat_diag(&self) -> Matrix {
        Matrix::from_diagonal(&Vector::from_row_slice(&self.rho_hat))
    }
}

pub fn pooled_sigma(sample: &HaplotypeSample) -> PooledEstimate {
    let total = (sample.n() + sample.m()) as f64;
    let rho = sample
        .counts1()
        .iter()
        .zip(sample.counts2())
        .map(|(&a, &b)| (a + b) as f64 / total)
        .collect();
    PooledEstimate::from_frequencies(rho, sample.n(), sample.m())
}

/// `tr(Ŵ) = c·x` and `tr(Ŵ²) = c²·y` with `c = 1/n + 1/m`; the sample sizes
/// cancel in `df0 = x²/y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastTraces {
    pub tr_w: f64,
    pub tr_w2: f64,
    pub x: f64,
    pub y: f64,
    pub scale: f64,
}

impl FastTraces {
    pub fn df0(&self) -> f64 {
        self.x * self.x / self.y
    }

    pub fn beta(&self) -> f64 {
        self.tr_w / self.tr_w2
    }
}

/// `tr(AΣ̂_s)` and `tr((AΣ̂_s)²)` by explicit sums over `ρ̂`, without forming
/// `Σ̂_s`.
pub fn traces_fast(a: &SimilarityMatrix, pooled: &PooledEstimate) -> Result<FastTraces> {
    let a = a.matrix();
    let rho = &pooled.rho_hat;
    let k = rho.len();
    if a.nrows() != k {
        return Err(Error::validation(
            "similarity matrix and frequencies differ in dimension",
        ));
    }
    let mut x = 0.0;
    let mut diag2 = 0.0;
    let mut off2 = 0.0;
    let mut cross = 0.0;
    let mut rar = 0.0;
    for j in 0..k {
        let (ajj, rj) = (a[(j, j)], rho[j]);
        x += ajj * rj * (1.0 - rj);
        diag2 += ajj * ajj * rj * rj * (1.0 - 2.0 * rj);
        rar += ajj * rj * rj;
        for j2 in j + 1..k {
            let (a12, r2) = (a[(j, j2)], rho[j2]);
            x -= 2.0 * a12 * rj * r2;
            off2 += a12 * a12 * rj * r2 * (1.0 - rj - r2);
            rar += 2.0 * a12 * rj * r2;
            let inner: f64 = (0..k).map(|l| a[(l, j)] * a[(l, j2)] * rho[l]).sum();
            cross += rj * r2 * inner;
        }
    }
    let y = diag2 + 2.0 * off2 - 4.0 * cross + rar * rar;
    let scale = 1.0 / pooled.n as f64 + 1.0 / pooled.m as f64;
    Ok(FastTraces {
        tr_w: scale * x,
        tr_w2: scale * scale * y,
        x,
        y,
        scale,
    })
}

/// `D_s = (p̂ − q̂)ᵀA(p̂ − q̂)`.
pub fn statistic_ds(sample: &HaplotypeSample, a: &SimilarityMatrix) -> Result<f64> {
    check_dims(sample.k(), a)?;
    let s: Vector = Vector::from_vec(sample.p_hat()) - Vector::from_vec(sample.q_hat());
    Ok(linalg::quad(a.matrix(), &s))
}

/// `D_t = p̂ᵀAp̂ − q̂ᵀAq̂`.
pub fn statistic_dt(sample: &HaplotypeSample, a: &SimilarityMatrix) -> Result<f64> {
    check_dims(sample.k(), a)?;
    let p = Vector::from_vec(sample.p_hat());
    let q = Vector::from_vec(sample.q_hat());
    Ok(linalg::quad(a.matrix(), &p) - linalg::quad(a.matrix(), &q))
}

fn check_dims(k: usize, a: &SimilarityMatrix) -> Result<()> {
    if a.k() != k {
        return Err(Error::validation(alloc::format!(
            "similarity matrix is {0}x{0} but there are {k} haplotypes",
            a.k()
        )));
    }
    Ok(())
}

/// Asymptotic form of `D_s`: mean `p − q`, covariance `Σ_s(p, q)`.
pub fn form_for_ds(freqs: &FrequencyModel, a: &SimilarityMatrix, n: u64, m: u64) -> Result<GaussianQuadraticForm> {
    check_dims(freqs.k(), a)?;
    let mu = Vector::from_iterator(freqs.k(), freqs.p().iter().zip(freqs.q()).map(|(p, q)| p - q));
    GaussianQuadraticForm::new(a.matrix().clone(), mu, estimate_sigma_s(freqs.p(), freqs.q(), n, m))
}

/// Null form of `D_s` from the pooled estimate: zero mean, covariance `Σ̂_s`.
pub fn form_for_ds_pooled(pooled: &PooledEstimate, a: &SimilarityMatrix) -> Result<GaussianQuadraticForm> {
    check_dims(pooled.rho_hat.len(), a)?;
    GaussianQuadraticForm::central(a.matrix().clone(), pooled.sigma_hat.clone())
}

/// `D_t` as a `2k`-dimensional form in `(p̂; q̂)` with weight `A ⊕ (−A)`.
pub fn statistic_dt_form(
    freqs: &FrequencyModel,
    a: &SimilarityMatrix,
    n: u64,
    m: u64,
) -> Result<GaussianQuadraticForm> {
    check_dims(freqs.k(), a)?;
    let k = freqs.k();
    let mut mu = Vector::zeros(2 * k);
    for i in 0..k {
        mu[i] = freqs.p()[i];
        mu[k + i] = freqs.q()[i];
    }
    let sigma = linalg::block_diag(
        &multinomial_cov(freqs.p(), 1.0 / n as f64),
        &multinomial_cov(freqs.q(), 1.0 / m as f64),
    );
    let weight = linalg::block_diag(a.matrix(), &(-a.matrix()));
    GaussianQuadraticForm::new(weight, mu, sigma)
}

/// `XᵀAX/σ²` for idempotent `A` and `X ~ N(μ, σ²I)`: exactly
/// `χ²_{rank A}(μᵀAμ/σ²)`.
pub fn schaid_chisq(a: &Matrix, mu: &Vector, sigma_scale: f64) -> Result<NoncentralChiSquare> {
    if !a.is_square() || mu.len() != a.nrows() {
        return Err(Error::validation("projection matrix and mean differ in dimension"));
    }
    if !(sigma_scale > 0.0 && sigma_scale.is_finite()) {
        return Err(Error::Domain {
            what: "variance scale",
            value: sigma_scale,
        });
    }
    let scale = linalg::max_abs(a);
    if scale == 0.0 || linalg::max_abs(&(a * a - a)) > 1e-8 * scale {
        return Err(Error::NotApplicable {
            reason: "matrix is not idempotent",
            fallback: Some(Method::FourCum),
        });
    }
    let trace = a.trace();
    let df = trace.round();
    if (trace - df).abs() > 1e-6 {
        return Err(Error::Numerical {
            what: "projection rank",
            achieved: trace,
        });
    }
    let delta = (linalg::quad(a, mu) / sigma_scale).max(0.0);
    NoncentralChiSquare::new(df, delta)
}
