use alloc::format;

use crate::linalg::{self, Matrix, Vector};
use crate::{Error, Result};

/// Relative asymmetry tolerated in `A` and `Σ` before they are symmetrized.
const SYMMETRY_TOL: f64 = 1e-12;

/// `D = XᵀAX` with `X ~ N(μ, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianQuadraticForm {
    a: Matrix,
    mu: Vector,
    sigma: Matrix,
}

impl GaussianQuadraticForm {
    /// Checks shapes and symmetry, then stores the symmetrized matrices.
    /// Positive semi-definiteness of `sigma` is checked by
    /// [`spectral_reduce`](super::spectral_reduce), which needs the
    /// eigendecomposition anyway.
    pub fn new(a: Matrix, mu: Vector, sigma: Matrix) -> Result<Self> {
        let a = linalg::symmetrized(&a, SYMMETRY_TOL, "A")?;
        let sigma = linalg::symmetrized(&sigma, SYMMETRY_TOL, "sigma")?;
        let k = a.nrows();
        if sigma.nrows() != k || mu.len() != k {
            return Err(Error::validation(format!(
                "dimension mismatch: A is {k}x{k}, sigma is {0}x{0}, mu has {1} entries",
                sigma.nrows(),
                mu.len()
            )));
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("mu has non-finite entries"));
        }
        Ok(GaussianQuadraticForm { a, mu, sigma })
    }

    /// Zero-mean form.
    pub fn central(a: Matrix, sigma: Matrix) -> Result<Self> {
        let k = a.nrows();
        Self::new(a, Vector::zeros(k), sigma)
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn mu(&self) -> &Vector {
        &self.mu
    }

    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    pub fn k(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_central(&self) -> bool {
        self.mu.iter().all(|&v| v == 0.0)
    }

    /// The same form with `A` multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        GaussianQuadraticForm {
            a: &self.a * t,
            mu: self.mu.clone(),
            sigma: self.sigma.clone(),
        }
    }

    /// `μᵀAμ`, the value of `D` at the mean.
    pub fn mean_value(&self) -> f64 {
        linalg::quad(&self.a, &self.mu)
    }
}

/// First four cumulants `κ₁..κ₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantVector {
    pub kappa: [f64; 4],
}

impl CumulantVector {
    /// Cumulants of `Σ ωᵢ(Yᵢ + bᵢ)² + c`.
    pub fn from_weights(omega: &[f64], b: &[f64], c: f64) -> Self {
        let mut kappa = [c, 0.0, 0.0, 0.0];
        let mut factor = 1.0;
        for (nu, k) in kappa.iter_mut().enumerate() {
            let nu_f = (nu + 1) as f64;
            let s: f64 = omega
                .iter()
                .zip(b)
                .map(|(&w, &bi)| w.powi(nu as i32 + 1) * (1.0 + nu_f * bi * bi))
                .sum();
            *k += factor * s;
            factor *= 2.0 * nu_f;
        }
        CumulantVector { kappa }
    }

    pub fn mean(&self) -> f64 {
        self.kappa[0]
    }

    pub fn variance(&self) -> f64 {
        self.kappa[1]
    }
}

/// `κ_ν = 2^{ν−1}(ν−1)!·(tr((AΣ)^ν) + ν·μᵀ(AΣ)^{ν−1}Aμ)`, from matrix powers.
pub fn cumulants(form: &GaussianQuadraticForm) -> CumulantVector {
    let m = form.a() * form.sigma();
    let mut power = m.clone();
    let mut v = form.a() * form.mu();
    let mut kappa = [0.0; 4];
    let mut factor = 1.0;
    for (nu, k) in kappa.iter_mut().enumerate() {
        let nu_f = (nu + 1) as f64;
        *k = factor * (power.trace() + nu_f * form.mu().dot(&v));
        factor *= 2.0 * nu_f;
        if nu < 3 {
            power = &power * &m;
            v = &m * v;
        }
    }
    CumulantVector { kappa }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_central_chi_square_cumulants() {
        for k in 1..6 {
            let f = GaussianQuadraticForm::central(Matrix::identity(k, k), Matrix::identity(k, k)).unwrap();
            let kf = k as f64;
            assert_eq!(cumulants(&f).kappa, [kf, 2.0 * kf, 8.0 * kf, 48.0 * kf]);
        }
    }

    #[test]
    fn noncentral_one_dimensional() {
        for mu in [0.0, 0.5, 2.0] {
            let f = GaussianQuadraticForm::new(
                Matrix::identity(1, 1),
                Vector::from_element(1, mu),
                Matrix::identity(1, 1),
            )
            .unwrap();
            let d = mu * mu;
            let expect = [1.0 + d, 2.0 + 4.0 * d, 8.0 + 24.0 * d, 48.0 + 192.0 * d];
            let got = cumulants(&f).kappa;
            for i in 0..4 {
                assert!((got[i] - expect[i]).abs() < 1e-12 * expect[i]);
            }
            let w = CumulantVector::from_weights(&[1.0], &[mu], 0.0).kappa;
            for i in 0..4 {
                assert!((w[i] - expect[i]).abs() < 1e-12 * expect[i]);
            }
        }
    }

    #[test]
    fn homogeneity() {
        let a = Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let s = Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 0.5]);
        let f = GaussianQuadraticForm::new(a, Vector::from_vec(alloc::vec![0.3, -0.1]), s).unwrap();
        let base = cumulants(&f).kappa;
        let t = 2.5f64;
        let scaled = cumulants(&f.scaled(t)).kappa;
        for nu in 0..4 {
            assert!((scaled[nu] - t.powi(nu as i32 + 1) * base[nu]).abs() < 1e-12 * scaled[nu].abs());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(GaussianQuadraticForm::central(a, Matrix::identity(2, 2)).is_err());
        assert!(GaussianQuadraticForm::central(Matrix::identity(2, 2), Matrix::identity(3, 3)).is_err());
        let ok = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5 + 1e-14, 1.0]);
        assert!(GaussianQuadraticForm::central(ok, Matrix::identity(2, 2)).is_ok());
    }
}
