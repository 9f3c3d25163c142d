use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    check_distribution, check_unit, entropy_of_spectrum, herm_eig, mix_matrices, CMatrix, DensityMatrix, Units, C64,
};

use super::gate::ControlledGate;
use super::outputs::forward_basis_outputs;

/// Eigenvalues of `ρ̄` at or below this count as numerically zero.
const NULL_CUT: f64 = 64.0 * f64::EPSILON;

/// Prior and pure input states on the sending side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub probs: Vec<f64>,
    pub states: Vec<Vec<C64>>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<Vec<C64>>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::validation(format!(
                "ensemble has {} probabilities but {} states",
                probs.len(),
                states.len()
            )));
        }
        if states.is_empty() {
            return Err(Error::validation("ensemble must contain at least one state"));
        }
        check_distribution(&probs)?;
        let dim = states[0].len();
        for (i, s) in states.iter().enumerate() {
            if s.len() != dim {
                return Err(Error::dimension(format!("ensemble state {i} has dimension {}, expected {dim}", s.len())));
            }
            check_unit(s, &format!("ensemble state {i}"))?;
        }
        Ok(Ensemble { probs, states })
    }

    pub fn uniform(states: Vec<Vec<C64>>) -> Result<Self> {
        let k = states.len().max(1);
        Ensemble::new(vec![1.0 / k as f64; states.len()], states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn check_outputs(outputs: &[DensityMatrix]) -> Result<usize> {
    let first = outputs.first().ok_or_else(|| Error::validation("need at least one output state"))?;
    let dim = first.dim();
    if let Some((i, o)) = outputs.iter().enumerate().find(|(_, o)| o.dim() != dim) {
        return Err(Error::dimension(format!("output {i} has dimension {}, expected {dim}", o.dim())));
    }
    Ok(dim)
}

/// Holevo quantities below this many nats are reported as exactly zero.
pub const HOLEVO_NOISE_FLOOR: f64 = 1e-13;

/// `χ = S(Σ p_j ρ_j) − Σ p_j S(ρ_j)`.
pub fn holevo(outputs: &[DensityMatrix], probs: &[f64], units: Units) -> Result<f64> {
    check_outputs(outputs)?;
    if probs.len() != outputs.len() {
        return Err(Error::validation(format!("{} probabilities for {} outputs", probs.len(), outputs.len())));
    }
    check_distribution(probs)?;
    let avg = DensityMatrix::mixture(outputs, probs)?;
    let mut chi = avg.spectrum().and_then(|s| entropy_of_spectrum(s.values(), Units::Nats))?;
    for (o, &p) in outputs.iter().zip(probs) {
        if p > 0.0 {
            chi -= p * o.spectrum().and_then(|s| entropy_of_spectrum(s.values(), Units::Nats))?;
        }
    }
    // entropies of pure outputs carry ~1e-15 of eigensolver noise
    Ok(units.from_nats(if chi < HOLEVO_NOISE_FLOOR { 0.0 } else { chi }))
}

/// Result of [`optimize_prior`]. `chi_nats` is the Holevo quantity at `probs`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorOptimum {
    pub probs: Vec<f64>,
    pub chi_nats: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Holevo value (nats) after each iteration; nondecreasing.
    pub history: Vec<f64>,
}

impl PriorOptimum {
    pub fn chi(&self, units: Units) -> f64 {
        units.from_nats(self.chi_nats)
    }
}

/// `D(ρ_j ‖ ρ̄)` for every output, in nats, and `χ = Σ p_j D_j`.
fn divergences(outputs: &[DensityMatrix], entropies: &[f64], probs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let avg = mix_matrices(outputs, probs);
    let eig = herm_eig(&avg.hermitian_part())?;
    let n = avg.rows();
    // log ρ̄ restricted to its numerical support; directions below the cut
    // are eigensolver noise and would otherwise be weighted by ln(tiny)
    let mut log_avg = CMatrix::zeros(n, n);
    for (k, &l) in eig.values.values().iter().enumerate() {
        if l > NULL_CUT {
            let v = eig.vector(k);
            let lg = l.ln();
            for a in 0..n {
                let va = v[a] * lg;
                for b in 0..n {
                    log_avg[(a, b)] += va * v[b].conj();
                }
            }
        }
    }
    let mut div = Vec::with_capacity(outputs.len());
    for (o, &s) in outputs.iter().zip(entropies) {
        // tr ρ log ρ̄, both Hermitian
        let rho = o.matrix();
        let mut cross = 0.0;
        for a in 0..n {
            for b in 0..n {
                cross += (rho[(a, b)] * log_avg[(b, a)]).re;
            }
        }
        div.push((-s - cross).max(0.0));
    }
    let chi = div.iter().zip(probs).map(|(d, p)| if *p > 0.0 { d * p } else { 0.0 }).sum::<f64>();
    Ok((div, chi))
}

/// Maximizes the Holevo quantity over the prior for fixed output states by
/// the classical-quantum Blahut–Arimoto update `p'_j ∝ p_j exp(D(ρ_j‖ρ̄))`,
/// starting from the uniform prior.
///
/// Stops when the largest relative change in `p` falls below `tol`, or when
/// the duality gap `max_j D_j − χ` (an upper bound on the remaining
/// improvement, in nats) does. Hitting `max_iters` returns the best point
/// with `converged = false`.
pub fn optimize_prior(outputs: &[DensityMatrix], max_iters: usize, tol: f64) -> Result<PriorOptimum> {
    let k = outputs.len().max(1);
    optimize_prior_from(outputs, &vec![1.0 / k as f64; outputs.len()], max_iters, tol)
}

/// [`optimize_prior`] from a given starting prior. Entries that are zero stay zero.
pub fn optimize_prior_from(outputs: &[DensityMatrix], start: &[f64], max_iters: usize, tol: f64) -> Result<PriorOptimum> {
    check_outputs(outputs)?;
    if start.len() != outputs.len() {
        return Err(Error::validation(format!("{} starting probabilities for {} outputs", start.len(), outputs.len())));
    }
    check_distribution(start)?;
    let entropies = outputs
        .iter()
        .map(|o| o.spectrum().and_then(|s| entropy_of_spectrum(s.values(), Units::Nats)))
        .collect::<Result<Vec<_>>>()?;

    let mut p = start.to_vec();
    let (mut div, mut chi) = divergences(outputs, &entropies, &p)?;
    let mut history = vec![chi];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        let gap = div.iter().zip(&p).filter(|(_, &q)| q > 0.0).map(|(d, _)| *d).fold(0.0, f64::max) - chi;
        if gap < tol {
            converged = true;
            break;
        }
        // shift exponents by the max for stability
        let top = div.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut next: Vec<f64> = p.iter().zip(&div).map(|(q, d)| q * (d - top).exp()).collect();
        let z: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= z);
        let (next_div, next_chi) = divergences(outputs, &entropies, &next)?;
        iterations += 1;
        debug_assert!(next_chi >= chi - 1e-12, "Blahut-Arimoto step decreased chi: {chi} -> {next_chi}");
        let change = p
            .iter()
            .zip(&next)
            .map(|(a, b)| if a.max(*b) > 0.0 { (a - b).abs() / a.max(*b) } else { 0.0 })
            .fold(0.0, f64::max);
        if next_chi >= chi {
            p = next;
            div = next_div;
            chi = next_chi;
        }
        history.push(chi);
        if change < tol {
            converged = true;
            break;
        }
    }
    Ok(PriorOptimum { probs: p, chi_nats: chi, iterations, converged, history })
}

/// Forward Holevo quantity when `A` sends basis states with prior `probs`
/// and `B` starts in `target`.
pub fn forward_basis_holevo(gate: &ControlledGate, target: &[C64], probs: &[f64], units: Units) -> Result<f64> {
    holevo(&forward_basis_outputs(gate, target)?, probs, units)
}

/// Best forward Holevo quantity over priors on basis inputs for a fixed `target`.
pub fn forward_basis_capacity(gate: &ControlledGate, target: &[C64], units: Units) -> Result<f64> {
    let outputs = forward_basis_outputs(gate, target)?;
    let opt = optimize_prior(&outputs, 10_000, 1e-13)?;
    holevo(&outputs, &opt.probs, units)
}
