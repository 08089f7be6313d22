use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::form::{CumulantVector, GaussianQuadraticForm};
use crate::linalg::{self, Matrix, Vector};
use crate::{Error, Result};

/// Eigenvalues below this fraction of the largest are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Allowed negative eigenvalue of `Σ`, relative to its largest eigenvalue.
const PSD_TOL: f64 = 1e-10;

/// Intermediate matrices of the reduction `Σ = U_σΛ_σU_σᵀ = BBᵀ`,
/// `W = BᵀAB = VΩVᵀ`.
#[derive(Debug, Clone)]
pub struct ReductionWorkspace {
    pub u_sigma: Matrix,
    pub lambda_sigma: Vec<f64>,
    pub b_matrix: Matrix,
    pub w: Matrix,
    pub v: Matrix,
    /// All eigenvalues of `W`, descending, including the ones dropped from
    /// the weighted form.
    pub omega: Vec<f64>,
    pub r_sigma: usize,
    /// `Σ 4gᵢ²` over dropped near-zero weights: the variance of the linear
    /// terms left out of the weighted form.
    pub dropped_linear_energy: f64,
    pub warnings: Vec<String>,
}

/// `D = Σ ωᵢ(Yᵢ + bᵢ)² + c` with `Yᵢ` i.i.d. standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedChiSquareForm {
    pub omega: Vec<f64>,
    pub b: Vec<f64>,
    pub c: f64,
}

impl WeightedChiSquareForm {
    pub fn new(omega: Vec<f64>, b: Vec<f64>, c: f64) -> Result<Self> {
        if omega.len() != b.len() {
            return Err(Error::validation("omega and b differ in length"));
        }
        if omega.iter().chain(&b).any(|v| !v.is_finite()) || !c.is_finite() {
            return Err(Error::validation("weighted form has non-finite entries"));
        }
        Ok(WeightedChiSquareForm { omega, b, c })
    }

    /// Central form with the given weights.
    pub fn central(omega: Vec<f64>) -> Self {
        let b = alloc::vec![0.0; omega.len()];
        WeightedChiSquareForm { omega, b, c: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn cumulants(&self) -> CumulantVector {
        CumulantVector::from_weights(&self.omega, &self.b, self.c)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.omega.iter().all(|&w| w >= 0.0)
    }

    pub fn has_mixed_signs(&self) -> bool {
        self.omega.iter().any(|&w| w > 0.0) && self.omega.iter().any(|&w| w < 0.0)
    }

    /// The terms with `ω` of the requested sign, with negative weights
    /// negated so the result has positive weights. No constant.
    pub fn sign_group(&self, positive: bool) -> WeightedChiSquareForm {
        let (omega, b) = self
            .omega
            .iter()
            .zip(&self.b)
            .filter(|(&w, _)| if positive { w > 0.0 } else { w < 0.0 })
            .map(|(&w, &b)| (w.abs(), b))
            .unzip();
        WeightedChiSquareForm { omega, b, c: 0.0 }
    }

    /// Value of the form at a given vector of standard normals.
    pub fn evaluate(&self, y: &[f64]) -> f64 {
        self.omega
            .iter()
            .zip(&self.b)
            .zip(y)
            .map(|((&w, &b), &y)| w * (y + b) * (y + b))
            .sum::<f64>()
            + self.c
    }
}

/// Reduces a form to independent weighted chi-square terms.
///
/// Eigenvalues of `Σ` at or below `rank_tol·λ_max` are discarded, as are
/// weights with `|ωᵢ| ≤ rank_tol·max|ω|`. A dropped weight still contributes
/// its mean `ωᵢ` to `c`; its linear term `2gᵢYᵢ` is left out and reported in
/// [`ReductionWorkspace::dropped_linear_energy`], with a warning when it
/// exceeds `1e-6·κ₂`.
pub fn spectral_reduce(
    form: &GaussianQuadraticForm,
    rank_tol: f64,
) -> Result<(ReductionWorkspace, WeightedChiSquareForm)> {
    let eig = linalg::sym_eigen(form.sigma());
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(&min) = eig.values.last() {
        if min < -PSD_TOL * scale {
            return Err(Error::validation(format!(
                "sigma is not positive semi-definite (eigenvalue {min:e})"
            )));
        }
    }
    let lambda_max = eig.values.first().copied().unwrap_or(0.0);
    let retained: Vec<usize> = (0..eig.values.len())
        .filter(|&i| lambda_max > 0.0 && eig.values[i] > rank_tol * lambda_max)
        .collect();
    let r_sigma = retained.len();
    if r_sigma == 0 {
        return Err(Error::DegenerateForm {
            constant: form.mean_value(),
        });
    }
    let k = form.k();
    let u_sigma = Matrix::from_fn(k, r_sigma, |r, c| eig.vectors[(r, retained[c])]);
    let lambda_sigma: Vec<f64> = retained.iter().map(|&i| eig.values[i]).collect();
    let b_matrix = Matrix::from_fn(k, r_sigma, |r, c| u_sigma[(r, c)] * lambda_sigma[c].sqrt());
    let w = b_matrix.transpose() * form.a() * &b_matrix;
    let w = (&w + w.transpose()) * 0.5;
    let weig = linalg::sym_eigen(&w);
    let omega_all = weig.values;
    let v = weig.vectors;

    let omega_max = omega_all.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let keep: Vec<usize> = (0..omega_all.len())
        .filter(|&i| omega_max > 0.0 && omega_all[i].abs() > rank_tol * omega_max)
        .collect();
    if keep.is_empty() {
        return Err(Error::DegenerateForm {
            constant: form.mean_value(),
        });
    }

    let omega: Vec<f64> = keep.iter().map(|&i| omega_all[i]).collect();
    let dropped_mean: f64 = (0..omega_all.len())
        .filter(|i| !keep.contains(i))
        .map(|i| omega_all[i])
        .sum();
    let mut warnings = Vec::new();
    let (b, c, dropped_linear_energy) = if form.is_central() {
        (alloc::vec![0.0; keep.len()], 0.0, 0.0)
    } else {
        let a_mu = form.a() * form.mu();
        let g: Vector = v.transpose() * (b_matrix.transpose() * a_mu);
        let b: Vec<f64> = keep.iter().map(|&i| g[i] / omega_all[i]).collect();
        let explained: f64 = keep.iter().map(|&i| g[i] * g[i] / omega_all[i]).sum();
        let energy: f64 = (0..omega_all.len())
            .filter(|i| !keep.contains(i))
            .map(|i| 4.0 * g[i] * g[i])
            .sum();
        let kappa2: f64 =
            2.0 * omega_all.iter().map(|w| w * w).sum::<f64>() + 4.0 * g.iter().map(|x| x * x).sum::<f64>();
        if energy > 1e-6 * kappa2 {
            warnings.push(format!(
                "dropped near-zero weights carry linear variance {energy:e} ({:.2e} of the total)",
                energy / kappa2
            ));
        }
        (b, form.mean_value() - explained + dropped_mean, energy)
    };
    let workspace = ReductionWorkspace {
        u_sigma,
        lambda_sigma,
        b_matrix,
        w,
        v,
        omega: omega_all,
        r_sigma,
        dropped_linear_energy,
        warnings,
    };
    Ok((workspace, WeightedChiSquareForm { omega, b, c }))
}

/// `A = G_aΓ_aG_aᵀ` restricted to the non-zero eigenvalues of `A`, and the
/// equivalent `r_a`-dimensional form in `G_aᵀX`.
#[derive(Debug, Clone)]
pub struct SingularAReduction {
    pub g_a: Matrix,
    pub gamma_a: Vec<f64>,
    pub r_a: usize,
    pub reduced: GaussianQuadraticForm,
}

pub fn reduce_singular_a(form: &GaussianQuadraticForm, rank_tol: f64) -> Result<SingularAReduction> {
    let eig = linalg::sym_eigen(form.a());
    let gamma_max = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gamma_max == 0.0 {
        return Err(Error::Degenerate("similarity matrix is zero"));
    }
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i].abs() > rank_tol * gamma_max)
        .collect();
    let r_a = keep.len();
    let g_a = Matrix::from_fn(form.k(), r_a, |r, c| eig.vectors[(r, keep[c])]);
    let gamma_a: Vec<f64> = keep.iter().map(|&i| eig.values[i]).collect();
    let reduced = GaussianQuadraticForm::new(
        Matrix::from_diagonal(&Vector::from_vec(gamma_a.clone())),
        g_a.transpose() * form.mu(),
        g_a.transpose() * form.sigma() * &g_a,
    )?;
    Ok(SingularAReduction {
        g_a,
        gamma_a,
        r_a,
        reduced,
    })
}
