//! Phase spread of a controlled gate and the capacity bounds built on it.

use std::f64::consts::{SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::channels::ControlledGate;
use crate::error::{Error, Result};
use crate::numerics::{binary_entropy, largest_angular_gap, unitary_eig, Units, C64};

/// Slack allowed when validating `d ∈ [0, 2]`.
const D_SLACK: f64 = 1e-12;

/// Precision of [`invert_forward_bound`].
pub const INVERT_TOL: f64 = 1e-12;

/// `min_φ ‖V_j − e^{iφ}V_k‖` for one pair, with the eigenphases of `V_j V_k†`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpread {
    pub d: f64,
    pub phases: Vec<f64>,
}

/// Gate-level phase spread: the largest pairwise `d` and its witness pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpread {
    pub d: f64,
    /// Largest eigenphase chord of the witness pair; never below `d`.
    pub d_max_pair: f64,
    pub witness: (usize, usize),
    pub eigenphases: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForwardVariant {
    /// `min{log k, H₂(d/2) + (d/2) log(k−1)}` taken literally.
    Paper,
    /// Same shape with the trace-distance cap `T(d)/2` in place of `d/2`.
    Corrected,
}

impl std::str::FromStr for ForwardVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ForwardVariant::Paper),
            "corrected" => Ok(ForwardVariant::Corrected),
            other => Err(Error::validation(format!("unknown bound variant '{other}' (expected paper or corrected)"))),
        }
    }
}

fn check_same_dim(vj: &crate::CMatrix, vk: &crate::CMatrix) -> Result<()> {
    if !vj.is_square() || vj.rows() != vk.rows() || vj.cols() != vk.cols() {
        return Err(Error::dimension(format!(
            "unitaries are {}x{} and {}x{}",
            vj.rows(),
            vj.cols(),
            vk.rows(),
            vk.cols()
        )));
    }
    Ok(())
}

fn relative_phases(vj: &crate::CMatrix, vk: &crate::CMatrix) -> Result<crate::numerics::UnitaryEigen> {
    check_same_dim(vj, vk)?;
    unitary_eig(&(vj * &vk.adjoint()))
}

/// Minimal radius of a circular arc point: with `γ` the largest gap between
/// neighbouring eigenphases, the best `e^{iφ}` sits opposite the gap and
/// `d = 2 cos(γ/4)`.
fn spread_from_phases(phases: &[f64]) -> f64 {
    let gamma = largest_angular_gap(phases);
    // 2 cos(γ/4) written so that γ = 2π gives exactly 0
    (2.0 * ((TAU - gamma) / 4.0).sin()).clamp(0.0, 2.0)
}

fn max_chord(phases: &[f64]) -> (f64, usize, usize) {
    let mut best = (0.0, 0, 0);
    for a in 0..phases.len() {
        for b in a + 1..phases.len() {
            let c = (C64::from_polar(1.0, phases[a]) - C64::from_polar(1.0, phases[b])).norm();
            if c > best.0 {
                best = (c, a, b);
            }
        }
    }
    best
}

pub fn phase_spread_pair(vj: &crate::CMatrix, vk: &crate::CMatrix) -> Result<PairSpread> {
    let eig = relative_phases(vj, vk)?;
    Ok(PairSpread { d: spread_from_phases(&eig.phases), phases: eig.phases })
}

/// Largest `|e^{iμ_a} − e^{iμ_b}|` over eigenphases of `V_j V_k†`.
pub fn max_pair_chord(vj: &crate::CMatrix, vk: &crate::CMatrix) -> Result<f64> {
    Ok(max_chord(&relative_phases(vj, vk)?.phases).0)
}

pub fn gate_phase_spread(gate: &ControlledGate) -> Result<PhaseSpread> {
    let mut best: Option<(PairSpread, (usize, usize))> = None;
    for j in 0..gate.n() {
        for k in j + 1..gate.n() {
            let s = phase_spread_pair(gate.control(j), gate.control(k))?;
            if best.as_ref().is_none_or(|(b, _)| s.d > b.d) {
                best = Some((s, (j, k)));
            }
        }
    }
    Ok(match best {
        Some((s, witness)) => PhaseSpread { d: s.d, d_max_pair: max_chord(&s.phases).0.max(s.d), witness, eigenphases: s.phases },
        None => PhaseSpread { d: 0.0, d_max_pair: 0.0, witness: (0, 0), eigenphases: Vec::new() },
    })
}

fn check_d(d: f64) -> Result<f64> {
    if !(-D_SLACK..=2.0 + D_SLACK).contains(&d) {
        return Err(Error::validation(format!("phase spread d must lie in [0, 2], got {d}")));
    }
    Ok(d.clamp(0.0, 2.0))
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::validation("k must be at least 1"));
    }
    Ok(())
}

/// `H₂(1/2 + √(1 − d²/4)/2)`.
pub fn backward_lower_bound(d: f64, units: Units) -> Result<f64> {
    let d = check_d(d)?;
    let ell = (1.0 - d * d / 4.0).max(0.0).sqrt();
    binary_entropy(0.5 + ell / 2.0, units)
}

/// Largest trace distance between pure outputs `V_j|ψ⟩`, `V_k|ψ⟩` when
/// the pair has spread `d`: `d√(4 − d²)` up to `d = √2`, then 2.
pub fn trace_distance_cap(d: f64) -> f64 {
    if d >= SQRT_2 {
        2.0
    } else {
        (d * (4.0 - d * d).sqrt()).min(2.0)
    }
}

fn fano_form(s: f64, k: usize, units: Units) -> Result<f64> {
    let tail = if k > 1 && s > 0.0 { s * units.log((k - 1) as f64) } else { 0.0 };
    Ok(binary_entropy(s, units)? + tail)
}

pub fn forward_upper_bound(d: f64, k: usize, variant: ForwardVariant, units: Units) -> Result<f64> {
    let d = check_d(d)?;
    check_k(k)?;
    let log_k = units.log(k as f64);
    match variant {
        ForwardVariant::Paper => Ok(fano_form(d / 2.0, k, units)?.min(log_k)),
        ForwardVariant::Corrected => {
            let s = trace_distance_cap(d) / 2.0;
            if s >= (k - 1) as f64 / k as f64 {
                Ok(log_k)
            } else {
                Ok(fano_form(s, k, units)?.min(log_k))
            }
        }
    }
}

/// Smallest `d` at which the chosen bound reaches `log k`. Found from the
/// cap itself, which is well conditioned there, unlike the entropy.
fn saturation_point(k: usize, variant: ForwardVariant) -> f64 {
    let s_sat = (k - 1) as f64 / k as f64;
    match variant {
        ForwardVariant::Paper => 2.0 * s_sat,
        ForwardVariant::Corrected => {
            let (mut lo, mut hi) = (0.0, SQRT_2);
            while hi - lo > INVERT_TOL / 16.0 {
                let mid = 0.5 * (lo + hi);
                if trace_distance_cap(mid) / 2.0 >= s_sat {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
    }
}

/// Smallest `d` with `f(d) ≥ c_forward`, by bisection on the interval where
/// `f` is increasing.
pub fn invert_forward_bound(c_forward: f64, k: usize, variant: ForwardVariant, units: Units) -> Result<f64> {
    check_k(k)?;
    if !c_forward.is_finite() || c_forward < 0.0 {
        return Err(Error::validation(format!("forward capacity must be a nonnegative number, got {c_forward}")));
    }
    let top = units.log(k as f64);
    if c_forward > top + 1e-12 {
        return Err(Error::validation(format!(
            "forward capacity {c_forward} exceeds the bound's range; it saturates at {top} {units}"
        )));
    }
    if c_forward <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = saturation_point(k, variant);
    if c_forward >= top {
        return Ok(hi);
    }
    let mut lo = 0.0;
    while hi - lo > INVERT_TOL {
        let mid = 0.5 * (lo + hi);
        if forward_upper_bound(mid, k, variant, units)? >= c_forward {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Backward lower bound implied by a forward capacity, through the corrected
/// forward bound.
pub fn chained_backward_bound(c_forward: f64, k: usize, units: Units) -> Result<f64> {
    backward_lower_bound(invert_forward_bound(c_forward, k, ForwardVariant::Corrected, units)?, units)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub units: Units,
    pub d: f64,
    pub d_max_pair: f64,
    pub witness: (usize, usize),
    pub k: usize,
    pub backward_lower: f64,
    pub backward_lower_strong: f64,
    pub forward_upper_paper: f64,
    pub forward_upper_corrected: f64,
    /// Forward value fed into the chained bound.
    pub forward_input: f64,
    pub chained_backward_lower: f64,
}

impl BoundReport {
    /// All bounds for `gate`. `forward_value` should be a known forward
    /// capacity or a lower bound on it; the chained bound stays valid either way.
    pub fn new(gate: &ControlledGate, forward_value: f64, units: Units) -> Result<Self> {
        let spread = gate_phase_spread(gate)?;
        let k = gate.k();
        let cap = units.log(k as f64);
        let forward_input = forward_value.clamp(0.0, cap);
        Ok(BoundReport {
            units,
            d: spread.d,
            d_max_pair: spread.d_max_pair,
            witness: spread.witness,
            k,
            backward_lower: backward_lower_bound(spread.d, units)?,
            backward_lower_strong: backward_lower_bound(spread.d_max_pair, units)?,
            forward_upper_paper: forward_upper_bound(spread.d, k, ForwardVariant::Paper, units)?,
            forward_upper_corrected: forward_upper_bound(spread.d, k, ForwardVariant::Corrected, units)?,
            forward_input,
            chained_backward_lower: chained_backward_bound(forward_input, k, units)?,
        })
    }
}

/// Two-state backward ensemble: probe `(|j⟩ + |k⟩)/√2` on `A` and inputs
/// `V_k†|e_a⟩`, `V_k†|e_b⟩` on `B`, where `e_a`, `e_b` are eigenvectors of
/// `V_j V_k†` with eigenphases `μ_a`, `μ_b`. The outputs are pure and their
/// uniform mixture has Holevo quantity `H₂(1/2 + |ℓ|/2)`,
/// `ℓ = (e^{iμ_a} + e^{iμ_b})/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairConstruction {
    pub pair: (usize, usize),
    pub phases: (f64, f64),
    pub chord: f64,
    pub probe: Vec<C64>,
    pub states: Vec<Vec<C64>>,
}

impl PairConstruction {
    pub fn predicted(&self, units: Units) -> Result<f64> {
        let ell = ((C64::from_polar(1.0, self.phases.0) + C64::from_polar(1.0, self.phases.1)) * 0.5).norm();
        binary_entropy((0.5 + ell / 2.0).min(1.0), units)
    }
}

/// [`PairConstruction`] for a chosen control pair and eigenvector pair.
pub fn pair_construction(gate: &ControlledGate, (j, k): (usize, usize), (a, b): (usize, usize)) -> Result<PairConstruction> {
    if j >= gate.n() || k >= gate.n() || j == k {
        return Err(Error::validation(format!("invalid control pair ({j}, {k})")));
    }
    let eig = relative_phases(gate.control(j), gate.control(k))?;
    if a >= eig.phases.len() || b >= eig.phases.len() {
        return Err(Error::validation(format!("invalid eigenvector pair ({a}, {b})")));
    }
    let vk_adj = gate.control(k).adjoint();
    let s = 1.0 / 2f64.sqrt();
    let mut probe = vec![C64::new(0.0, 0.0); gate.n()];
    probe[j] = C64::new(s, 0.0);
    probe[k] = C64::new(s, 0.0);
    let states = vec![vk_adj.mul_vec(&eig.vectors[a]), vk_adj.mul_vec(&eig.vectors[b])];
    let (mu_a, mu_b) = (eig.phases[a], eig.phases[b]);
    Ok(PairConstruction {
        pair: (j, k),
        phases: (mu_a, mu_b),
        chord: (C64::from_polar(1.0, mu_a) - C64::from_polar(1.0, mu_b)).norm(),
        probe,
        states,
    })
}

/// Chord length, control pair, eigenphase index pair.
type ChordWitness = (f64, (usize, usize), (usize, usize));

/// The pair construction at the largest eigenphase chord over all control
/// pairs. `None` when the gate has a single control.
pub fn best_pair_construction(gate: &ControlledGate) -> Result<Option<PairConstruction>> {
    let mut best: Option<ChordWitness> = None;
    for j in 0..gate.n() {
        for k in j + 1..gate.n() {
            let (c, a, b) = max_chord(&relative_phases(gate.control(j), gate.control(k))?.phases);
            if best.is_none_or(|(bc, _, _)| c > bc) {
                best = Some((c, (j, k), (a, b)));
            }
        }
    }
    best.map(|(_, pair, eig)| pair_construction(gate, pair, eig)).transpose()
}
