use crate::error::{Error, Result};

use super::matrix::{CMatrix, C64};

const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the squared off-diagonal Frobenius mass drops below this
/// fraction of the squared Frobenius norm.
const OFF_DIAGONAL_TOL: f64 = 1e-24;
/// Hermiticity tolerance for eigensolver input, relative to `max(1, |M|_max)`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Real eigenvalues sorted in descending order, repeated by multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.0.first().copied()
    }

    pub fn min(&self) -> Option<f64> {
        self.0.last().copied()
    }

    /// Copy padded with zeros (or truncated) to `len`, re-sorted.
    pub fn padded(&self, len: usize) -> Spectrum {
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        Spectrum::new(v)
    }

    /// Largest elementwise deviation after zero-padding both to equal length.
    pub fn max_deviation(&self, other: &Spectrum) -> f64 {
        let len = self.len().max(other.len());
        let (a, b) = (self.padded(len), other.padded(len));
        a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// Eigendecomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Spectrum,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(λ) V†`
    pub fn reconstruct(&self) -> CMatrix {
        let d: Vec<C64> = self.values.values().iter().map(|&x| C64::new(x, 0.0)).collect();
        &(&self.vectors * &CMatrix::from_diag(&d)) * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
pub fn herm_eig(m: &CMatrix) -> Result<HermEigen> {
    let n = m.rows();
    let (a, v) = jacobi(m, true)?;
    let v = v.expect("vectors were requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = CMatrix::from_fn(n, n, |row, col| v[row * n + order[col]]);
    Ok(HermEigen { values: Spectrum(values), vectors })
}

/// Eigenvalues only; skips accumulating the eigenvectors.
pub fn herm_eigvals(m: &CMatrix) -> Result<Spectrum> {
    let n = m.rows();
    let (a, _) = jacobi(m, false)?;
    Ok(Spectrum::new((0..n).map(|i| a[i * n + i].re).collect()))
}

/// Runs the sweeps; returns the diagonalized matrix and, if asked, the
/// accumulated rotations, both row-major.
fn jacobi(m: &CMatrix, with_vectors: bool) -> Result<(Vec<C64>, Option<Vec<C64>>)> {
    if !m.is_square() {
        return Err(Error::dimension(format!("eigensolver needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::validation(format!("matrix is not Hermitian (residual {residual:.3e})")));
    }
    let n = m.rows();
    let mut a: Vec<C64> = m.hermitian_part().as_slice().to_vec();
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let mut v: Option<Vec<C64>> = with_vectors.then(|| CMatrix::identity(n).as_slice().to_vec());

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let threshold = OFF_DIAGONAL_TOL * total.max(f64::MIN_POSITIVE);
    // pivots this small cannot keep the off-diagonal mass above threshold
    let negligible = threshold / (n * n).max(1) as f64;

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a, n) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p * n + q].norm_sqr() > negligible {
                    rotate(&mut a, v.as_deref_mut(), n, p, q);
                }
            }
        }
    }
    if !converged && off_diagonal_mass(&a, n) > threshold {
        return Err(Error::Numerical(format!("Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})")));
    }
    Ok((a, v))
}

fn off_diagonal_mass(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[p * n + q].norm_sqr();
        }
    }
    s
}

fn rotate(a: &mut [C64], v: Option<&mut [C64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let alpha = a[p * n + p].re;
    let beta = a[q * n + q].re;
    let phase_conj = (apq / r).conj();
    let theta = (beta - alpha) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        (if theta >= 0.0 { 1.0 } else { -1.0 }) / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    // A <- A G, V <- V G
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = akp * c + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    if let Some(v) = v {
        for k in 0..n {
            let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
            v[k * n + p] = vkp * c + vkq * g_qp;
            v[k * n + q] = vkp * g_pq + vkq * g_qq;
        }
    }
    // A <- G† A
    let (gqp_c, gqq_c) = (g_qp.conj(), g_qq.conj());
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = apk * c + gqp_c * aqk;
        a[q * n + k] = apk * s + gqq_c * aqk;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}
