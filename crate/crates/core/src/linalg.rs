//! Dense symmetric matrix helpers on top of `nalgebra`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Checks `‖M − Mᵀ‖_max ≤ rel_tol·‖M‖_max` and returns `(M + Mᵀ)/2`.
pub fn symmetrized(m: &Matrix, rel_tol: f64, name: &str) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::validation(alloc::format!(
            "{name} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation(alloc::format!("{name} has non-finite entries")));
    }
    let asym = max_abs(&(m - m.transpose()));
    if asym > rel_tol * max_abs(m) {
        return Err(Error::validation(alloc::format!(
            "{name} is not symmetric (max |m_ij - m_ji| = {asym:e})"
        )));
    }
    Ok((m + m.transpose()) * 0.5)
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order and eigenvectors as the matching columns.
#[derive(Debug, Clone)]
pub struct SortedEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub fn sym_eigen(m: &Matrix) -> SortedEigen {
    let n = m.nrows();
    if n == 0 {
        return SortedEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    SortedEigen { values, vectors }
}

/// `tr(XY)` without forming the product.
pub fn trace_of_product(x: &Matrix, y: &Matrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

/// `vᵀ M v`.
pub fn quad(m: &Matrix, v: &Vector) -> f64 {
    v.dot(&(m * v))
}

/// `I − 𝟙𝟙ᵀ/k`, the centering projector.
pub fn centering_projector(k: usize) -> Matrix {
    Matrix::from_fn(k, k, |i, j| if i == j { 1.0 } else { 0.0 } - 1.0 / k as f64)
}

/// Block-diagonal `X ⊕ Y`.
pub fn block_diag(x: &Matrix, y: &Matrix) -> Matrix {
    let (a, b) = (x.nrows(), y.nrows());
    let mut out = Matrix::zeros(a + b, a + b);
    out.view_mut((0, 0), (a, a)).copy_from(x);
    out.view_mut((a, a), (b, b)).copy_from(y);
    out
}
