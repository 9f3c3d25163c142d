use crate::error::{Error, Result};

use super::eigen::herm_eigvals;
use super::matrix::CMatrix;

fn is_exactly_hermitian(m: &CMatrix) -> bool {
    m.is_square() && m.hermiticity_residual() <= 1e-14 * m.max_abs().max(1.0)
}

/// Singular values, descending, from the Hermitian dilation
/// `[[0, M], [M†, 0]]` whose spectrum is `±σ` (plus zeros). This keeps
/// absolute accuracy on small singular values, unlike `eig(M M†)`.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let (r, c) = (m.rows(), m.cols());
    let dilation = CMatrix::from_fn(r + c, r + c, |i, j| {
        if i < r && j >= r {
            m[(i, j - r)]
        } else if i >= r && j < r {
            m[(j, i - r)].conj()
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    });
    let spec = herm_eigvals(&dilation)?;
    Ok(spec.values().iter().take(r.min(c)).map(|&s| s.max(0.0)).collect())
}

/// Sum of singular values. Hermitian input goes through its own spectrum,
/// which avoids squaring small singular values.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::dimension(format!("trace norm needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if is_exactly_hermitian(m) {
        return Ok(herm_eigvals(&m.hermitian_part())?.values().iter().map(|l| l.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    if is_exactly_hermitian(m) {
        let spec = herm_eigvals(&m.hermitian_part())?;
        return Ok(spec.values().iter().map(|l| l.abs()).fold(0.0, f64::max));
    }
    Ok(singular_values(m)?[0])
}

/// Realignment across the `A|B` cut: entry `((i,k),(j,l))` of `U` lands in
/// row `(i,j)`, column `(k,l)`. `U = Σ_s A_s ⊗ B_s` becomes
/// `Σ_s vec(A_s) vec(B_s)^T`.
pub fn realign(u: &CMatrix, (n, m): (usize, usize)) -> Result<CMatrix> {
    if u.rows() != n * m || u.cols() != n * m {
        return Err(Error::dimension(format!("operator is {}x{}, expected {}x{}", u.rows(), u.cols(), n * m, n * m)));
    }
    Ok(CMatrix::from_fn(n * n, m * m, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / m, col % m);
        u[(i * m + k, j * m + l)]
    }))
}

/// Operator Schmidt coefficients (singular values of the realignment).
pub fn operator_schmidt_values(u: &CMatrix, dims: (usize, usize)) -> Result<Vec<f64>> {
    singular_values(&realign(u, dims)?)
}

/// Number of operator Schmidt coefficients above `tol` times the largest.
/// Rank one exactly when `U = W ⊗ Y`.
pub fn operator_schmidt_rank(u: &CMatrix, dims: (usize, usize), tol: f64) -> Result<usize> {
    let s = operator_schmidt_values(u, dims)?;
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol * top).count())
}
