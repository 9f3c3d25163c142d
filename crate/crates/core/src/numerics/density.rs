use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::eigen::{herm_eigvals, Spectrum};
use super::matrix::{CMatrix, C64};

/// Tolerance for Hermiticity, unit trace and the eigenvalue clamp.
pub const STATE_TOL: f64 = 1e-10;

/// Unit of information. Every number the crate emits carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    /// Logarithm in this unit's base.
    pub fn log(self, x: f64) -> f64 {
        match self {
            Units::Bits => x.log2(),
            Units::Nats => x.ln(),
        }
    }

    /// Converts a value measured in nats into this unit.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Units::Bits => nats / std::f64::consts::LN_2,
            Units::Nats => nats,
        }
    }

    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            Units::Bits => value * std::f64::consts::LN_2,
            Units::Nats => value,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Units {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Units::Bits),
            "nats" => Ok(Units::Nats),
            other => Err(Error::validation(format!("unknown units '{other}' (expected bits|nats)"))),
        }
    }
}

/// Which factor of `A ⊗ B` survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite (all within [`STATE_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dimension(format!("density matrix must be square, got {}x{}", matrix.rows(), matrix.cols())));
        }
        let herm = matrix.hermiticity_residual();
        if herm > STATE_TOL {
            return Err(Error::validation(format!("density matrix not Hermitian (residual {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::validation(format!("density matrix trace {:.12} != 1", tr.re)));
        }
        let spec = herm_eigvals(&matrix)?;
        if let Some(min) = spec.min() {
            if min < -STATE_TOL {
                return Err(Error::validation(format!("density matrix has negative eigenvalue {min:.3e}")));
            }
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps a matrix that is a density operator by construction (outputs of
    /// channels applied to validated inputs).
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(matrix.is_square());
        DensityMatrix { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        check_unit(psi, "state")?;
        Ok(DensityMatrix { matrix: CMatrix::projector(psi) })
    }

    /// `I / dim`
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        check_distribution(probs)?;
        Ok(DensityMatrix { matrix: CMatrix::from_real_diag(probs) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `ρ_A ⊗ ρ_B`
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: self.matrix.kron(&other.matrix) }
    }

    /// Convex combination `Σ p_j ρ_j`.
    pub fn mixture(states: &[DensityMatrix], probs: &[f64]) -> Result<DensityMatrix> {
        if states.len() != probs.len() || states.is_empty() {
            return Err(Error::dimension(format!("{} states vs {} probabilities", states.len(), probs.len())));
        }
        check_distribution(probs)?;
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::dimension("mixture of states with different dimensions"));
        }
        Ok(DensityMatrix::from_trusted(mix_matrices(states, probs)))
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        herm_eigvals(&self.matrix)
    }
}

pub(crate) fn mix_matrices(states: &[DensityMatrix], probs: &[f64]) -> CMatrix {
    let dim = states[0].dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (s, &p) in states.iter().zip(probs) {
        if p != 0.0 {
            acc = &acc + &s.matrix.scale_real(p);
        }
    }
    acc
}

pub(crate) fn check_unit(psi: &[C64], what: &str) -> Result<()> {
    let n = super::matrix::norm(psi);
    if (n - 1.0).abs() > STATE_TOL {
        return Err(Error::validation(format!("{what} has norm {n:.12}, expected 1")));
    }
    Ok(())
}

/// Probability vector check: entries ≥ 0 and sum within 1e-12 of 1.
pub fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::validation("empty probability vector"));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::validation(format!("invalid probability {p}")));
    }
    let s: f64 = probs.iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!("probabilities sum to {s:.15}")));
    }
    Ok(())
}

/// Shannon entropy of an eigenvalue list with the clamp rule: values in
/// `[-1e-10, 0)` count as zero, anything more negative is an error.
pub fn entropy_of_spectrum(values: &[f64], units: Units) -> Result<f64> {
    let mut s = 0.0;
    for &l in values {
        if l < -STATE_TOL {
            return Err(Error::validation(format!("negative eigenvalue {l:.3e} in entropy")));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(units.from_nats(s.max(0.0)))
}

/// `S(ρ) = -Σ λ log λ`.
pub fn von_neumann_entropy(rho: &DensityMatrix, units: Units) -> Result<f64> {
    entropy_of_spectrum(rho.spectrum()?.values(), units)
}

/// `H₂(x) = -x log x - (1-x) log(1-x)`, evaluated as the entropy of
/// `diag(x, 1-x)`.
pub fn binary_entropy(x: f64, units: Units) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::validation(format!("binary entropy argument {x} outside [0, 1]")));
    }
    von_neumann_entropy(&DensityMatrix::from_trusted(CMatrix::from_real_diag(&[x, 1.0 - x])), units)
}

/// Partial trace of an operator on `C^n ⊗ C^m`; index `(i, k)` maps to
/// `i * m + k`.
pub fn partial_trace_matrix(rho: &CMatrix, keep: Keep, (n, m): (usize, usize)) -> Result<CMatrix> {
    if rho.rows() != n * m || rho.cols() != n * m {
        return Err(Error::dimension(format!(
            "operator is {}x{}, expected {}x{} for dims ({n}, {m})",
            rho.rows(),
            rho.cols(),
            n * m,
            n * m
        )));
    }
    Ok(match keep {
        Keep::A => CMatrix::from_fn(n, n, |i, j| (0..m).map(|k| rho[(i * m + k, j * m + k)]).sum()),
        Keep::B => CMatrix::from_fn(m, m, |k, l| (0..n).map(|i| rho[(i * m + k, i * m + l)]).sum()),
    })
}

pub fn partial_trace(rho: &DensityMatrix, keep: Keep, dims: (usize, usize)) -> Result<DensityMatrix> {
    partial_trace_matrix(rho.matrix(), keep, dims).map(DensityMatrix::from_trusted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::{random_distribution, random_ket, random_unitary, rng_from_seed};

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = DensityMatrix::pure(&crate::numerics::basis(3, 0)).unwrap();
        assert_eq!(von_neumann_entropy(&rho, Units::Bits).unwrap(), 0.0);
    }

    #[test]
    fn maximally_mixed_entropy() {
        let rho = DensityMatrix::maximally_mixed(6);
        let s = von_neumann_entropy(&rho, Units::Bits).unwrap();
        assert!((s - 6f64.log2()).abs() < 1e-12);
        assert!((s - 2.584962500721156).abs() < 1e-12);
        let s_nats = von_neumann_entropy(&rho, Units::Nats).unwrap();
        assert!((s_nats - 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_three_quarters() {
        // -0.75 log2 0.75 - 0.25 log2 0.25, 30-digit reference
        let h = binary_entropy(0.75, Units::Bits).unwrap();
        assert!((h - 0.811_278_124_459_132_9).abs() < 1e-14);
        assert_eq!(binary_entropy(1.0, Units::Bits).unwrap(), 0.0);
        assert!((binary_entropy(0.5, Units::Bits).unwrap() - 1.0).abs() < 1e-15);
        assert!(binary_entropy(1.2, Units::Bits).is_err());
    }

    #[test]
    fn clamp_window() {
        assert_eq!(entropy_of_spectrum(&[1.0, -5e-11], Units::Bits).unwrap(), 0.0);
        assert!(entropy_of_spectrum(&[1.0, -2e-10], Units::Bits).is_err());
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(DensityMatrix::new(CMatrix::from_real_diag(&[0.5, 0.4])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real_diag(&[1.5, -0.5])).is_err());
        let nh = CMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(DensityMatrix::new(nh).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real_diag(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let mut rng = rng_from_seed(11);
        let a = DensityMatrix::pure(&random_ket(&mut rng, 3)).unwrap();
        let p = random_distribution(&mut rng, 2);
        let b = DensityMatrix::diagonal(&p).unwrap();
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, Keep::A, (3, 2)).unwrap();
        let rb = partial_trace(&ab, Keep::B, (3, 2)).unwrap();
        assert!(ra.matrix().max_abs_diff(a.matrix()) < 1e-12);
        assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let bell = vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        let rho = DensityMatrix::pure(&bell).unwrap();
        let ra = partial_trace(&rho, Keep::A, (2, 2)).unwrap();
        assert!(ra.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn cnot_conjugation_marginal() {
        // U (|+⟩⟨+| ⊗ |0⟩⟨0|) U† is the Bell state; its A-marginal is I/2.
        let cnot = CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        let plus = crate::numerics::uniform_superposition(2);
        let rho = DensityMatrix::pure(&plus).unwrap().tensor(&DensityMatrix::pure(&crate::numerics::basis(2, 0)).unwrap());
        let out = rho.matrix().conjugate_by(&cnot);
        // brute force: build the output vector and trace by hand
        let v = cnot.mul_vec(&plus.iter().flat_map(|&a| [a, C64::new(0.0, 0.0)]).collect::<Vec<_>>());
        let brute = CMatrix::from_fn(2, 2, |i, j| (0..2).map(|k| v[i * 2 + k] * v[j * 2 + k].conj()).sum());
        let ra = partial_trace_matrix(&out, Keep::A, (2, 2)).unwrap();
        assert!(ra.max_abs_diff(&brute) < 1e-15);
        assert!(ra.max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace_and_is_linear() {
        let mut rng = rng_from_seed(4);
        let (n, m) = (3, 4);
        let u = random_unitary(&mut rng, n * m);
        let w = random_unitary(&mut rng, n * m);
        let x = CMatrix::from_fn(n * m, n * m, |i, j| u[(i, j)] * 0.3 + w[(j, i)]);
        let y = u.adjoint();
        let (alpha, beta) = (C64::new(0.7, -0.2), C64::new(-1.1, 0.4));
        let lhs = partial_trace_matrix(&(&x.scale(alpha) + &y.scale(beta)), Keep::B, (n, m)).unwrap();
        let rhs = &partial_trace_matrix(&x, Keep::B, (n, m)).unwrap().scale(alpha)
            + &partial_trace_matrix(&y, Keep::B, (n, m)).unwrap().scale(beta);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        for keep in [Keep::A, Keep::B] {
            let t = partial_trace_matrix(&x, keep, (n, m)).unwrap().trace();
            assert!((t - x.trace()).norm() < 1e-12);
        }
        assert!(partial_trace_matrix(&x, Keep::A, (5, 2)).is_err());
    }
}
