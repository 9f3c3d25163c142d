use std::f64::consts::TAU;

use crate::error::{Error, Result};

use super::eigen::herm_eig;
use super::matrix::{inner, norm, CMatrix, C64};

/// Residual allowed in `‖Mv − e^{iμ}v‖` for each returned eigenpair.
pub const EIGENPAIR_TOL: f64 = 1e-8;

/// Mixing angles for `cos θ · Re(M) + sin θ · Im(M)`; tried in order until
/// every eigenpair verifies.
const MIX_ANGLES: [f64; 6] = [0.618_033_988_7, 2.414_213_562_4, 1.324_717_957_2, 0.3, 2.7, 1.772_453_850_9];

/// Eigenphases (in `(-π, π]`) and eigenvectors of a unitary.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

/// Diagonalizes a unitary `M` through its commuting Hermitian parts
/// `(M + M†)/2` and `(M − M†)/(2i)`: eigenvectors of a generic real
/// combination of the two are eigenvectors of `M`. Each pair is verified.
pub fn unitary_eig(m: &CMatrix) -> Result<UnitaryEigen> {
    if !m.is_square() {
        return Err(Error::dimension("unitary eigendecomposition needs a square matrix"));
    }
    let residual = m.unitarity_residual();
    if residual > 1e-9 {
        return Err(Error::validation(format!("matrix is not unitary (residual {residual:.3e})")));
    }
    let adj = m.adjoint();
    let re_part = CMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] + adj[(i, j)]) * 0.5);
    let im_part = CMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] - adj[(i, j)]) * C64::new(0.0, -0.5));

    let mut worst = f64::INFINITY;
    for theta in MIX_ANGLES {
        let h = &re_part.scale_real(theta.cos()) + &im_part.scale_real(theta.sin());
        let eig = herm_eig(&h.hermitian_part())?;
        let mut phases = Vec::with_capacity(m.rows());
        let mut vectors = Vec::with_capacity(m.rows());
        let mut max_res = 0.0_f64;
        for k in 0..m.rows() {
            let v = eig.vector(k);
            let mv = m.mul_vec(&v);
            let lambda = inner(&v, &mv);
            let mu = lambda.arg();
            let e = C64::from_polar(1.0, mu);
            let r: Vec<C64> = mv.iter().zip(&v).map(|(a, b)| a - e * b).collect();
            max_res = max_res.max(norm(&r));
            phases.push(mu);
            vectors.push(v);
        }
        if max_res <= EIGENPAIR_TOL {
            return Ok(UnitaryEigen { phases, vectors });
        }
        worst = worst.min(max_res);
    }
    Err(Error::Numerical(format!("could not verify unitary eigenpairs (best residual {worst:.3e})")))
}

/// Largest angular gap between consecutive phases on the circle, including
/// the wrap-around gap. A single distinct phase gives `2π`.
pub fn largest_angular_gap(phases: &[f64]) -> f64 {
    if phases.is_empty() {
        return TAU;
    }
    let mut p: Vec<f64> = phases.iter().map(|x| x.rem_euclid(TAU)).collect();
    p.sort_by(f64::total_cmp);
    let mut gap = p[0] + TAU - p[p.len() - 1];
    for w in p.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_unitary, rng_from_seed};

    #[test]
    fn recovers_prescribed_eigenphases() {
        let mut rng = rng_from_seed(12);
        let q = random_unitary(&mut rng, 5);
        let mus = [0.1, -1.4, 2.5, 2.5, 3.0];
        let d: Vec<C64> = mus.iter().map(|&m| C64::from_polar(1.0, m)).collect();
        let u = CMatrix::from_diag(&d).conjugate_by(&q);
        let e = unitary_eig(&u).unwrap();
        let mut got = e.phases.clone();
        got.sort_by(f64::total_cmp);
        let mut want = mus.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn gaps() {
        assert!((largest_angular_gap(&[0.0]) - TAU).abs() < 1e-15);
        assert!((largest_angular_gap(&[0.0, std::f64::consts::PI]) - std::f64::consts::PI).abs() < 1e-15);
        let g = largest_angular_gap(&[0.0, std::f64::consts::FRAC_PI_2]);
        assert!((g - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        // negative angles wrap
        let g = largest_angular_gap(&[-0.1, 0.1]);
        assert!((g - (TAU - 0.2)).abs() < 1e-12);
    }

    #[test]
    fn identity_has_single_phase() {
        let e = unitary_eig(&CMatrix::identity(3)).unwrap();
        assert!(e.phases.iter().all(|p| p.abs() < 1e-15));
    }
}
