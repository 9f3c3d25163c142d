use crate::error::{Error, Result};
use crate::numerics::{basis, check_distribution, check_unit, CMatrix, DensityMatrix, Spectrum, Units, C64};

use super::gate::ControlledGate;
use super::holevo::holevo;
use super::outputs::{backward_output, forward_output};

/// Controlled gate that is diagonal in the product basis:
/// `V_i = diag(e^{iθ_i0}, …, e^{iθ_i,m−1})`.
pub fn diagonal_gate(phases: &[Vec<f64>]) -> Result<ControlledGate> {
    ControlledGate::new(
        phases
            .iter()
            .map(|row| CMatrix::from_diag(&row.iter().map(|&t| C64::from_polar(1.0, t)).collect::<Vec<_>>()))
            .collect(),
    )
}

/// Both sides of the forward/backward exchange for a diagonal gate.
#[derive(Debug, Clone)]
pub struct SymmetrySpectra {
    /// Spectrum of `γ = Σ_i p_i V_i|ψ⟩⟨ψ|V_i†` on `B`, zero padded.
    pub forward: Spectrum,
    /// Spectrum of the backward mixture on `A`, zero padded.
    pub backward: Spectrum,
    pub forward_holevo: f64,
    pub backward_holevo: f64,
    /// Largest entry deviation between the channel outputs and the matrix
    /// products `M M†`, `M† M` with `M_ji = c_j d_ij √p_i`.
    pub formula_residual: f64,
}

impl SymmetrySpectra {
    pub fn spectrum_gap(&self) -> f64 {
        self.forward.max_deviation(&self.backward)
    }
}

/// Forward protocol: `A` sends `|i⟩` with probability `p_i`, `B` starts in
/// `ψ = Σ c_j |j⟩`. Backward protocol: `B` sends `|j⟩` with probability
/// `|c_j|²`, `A` starts in `Σ √p_i |i⟩`. For a diagonal gate both mixtures
/// are `M M†` and `M† M` for the same `M`, so their spectra agree.
pub fn diagonal_symmetry_spectra(gate: &ControlledGate, probs: &[f64], target: &[C64], units: Units) -> Result<SymmetrySpectra> {
    let (n, m) = (gate.n(), gate.m());
    if probs.len() != n || target.len() != m {
        return Err(Error::dimension(format!(
            "need {n} probabilities and a target of dimension {m}, got {} and {}",
            probs.len(),
            target.len()
        )));
    }
    check_distribution(probs)?;
    check_unit(target, "target state")?;
    for (i, v) in gate.controls().iter().enumerate() {
        let off = CMatrix::from_fn(m, m, |a, b| if a == b { C64::new(0.0, 0.0) } else { v[(a, b)] });
        if off.max_abs() > 1e-12 {
            return Err(Error::validation(format!("control {i} is not diagonal")));
        }
    }

    let fwd_outputs = (0..n).map(|i| forward_output(gate, i, target)).collect::<Result<Vec<_>>>()?;
    let gamma = DensityMatrix::mixture(&fwd_outputs, probs)?;

    let probe: Vec<C64> = probs.iter().map(|&p| C64::new(p.sqrt(), 0.0)).collect();
    let back_probs: Vec<f64> = target.iter().map(|c| c.norm_sqr()).collect();
    let total: f64 = back_probs.iter().sum();
    let back_probs: Vec<f64> = back_probs.iter().map(|p| p / total).collect();
    let back_outputs = (0..m).map(|j| backward_output(gate, &probe, &basis(m, j))).collect::<Result<Vec<_>>>()?;
    let back_mix = DensityMatrix::mixture(&back_outputs, &back_probs)?;

    let mm = CMatrix::from_fn(m, n, |j, i| target[j] * gate.control(i)[(j, j)] * probs[i].sqrt());
    let formula_residual = (&mm * &mm.adjoint())
        .max_abs_diff(gamma.matrix())
        .max((&mm.adjoint() * &mm).transpose().max_abs_diff(back_mix.matrix()));

    let len = n.max(m);
    Ok(SymmetrySpectra {
        forward: gamma.spectrum()?.padded(len),
        backward: back_mix.spectrum()?.padded(len),
        forward_holevo: holevo(&fwd_outputs, probs, units)?,
        backward_holevo: holevo(&back_outputs, &back_probs, units)?,
        formula_residual,
    })
}
