use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::best_pair_construction;
use crate::error::Result;
use crate::numerics::random::{gaussian_c64, random_ket, rng_from_seed};
use crate::numerics::{herm_eig, normalized, uniform_superposition, CMatrix, DensityMatrix, Units, C64};

use super::gate::ControlledGate;
use super::holevo::{holevo, optimize_prior_from, Ensemble};
use super::outputs::backward_output_unchecked;

/// Consecutive rejections before the step size is halved.
const REJECTIONS_PER_HALVING: usize = 10;
/// Smallest perturbation step.
pub const STEP_FLOOR: f64 = 1e-6;
const INITIAL_STEP: f64 = 0.5;
/// Prior updates per step. The prior is warm-started from the incumbent, so
/// the optimization keeps converging across accepted steps.
const PRIOR_ITERS: usize = 10;
const PRIOR_TOL: f64 = 1e-11;
/// Prior updates spent on the winning point before it is reported.
const POLISH_ITERS: usize = 2000;
const POLISH_TOL: f64 = 1e-13;
/// Share of uniform weight mixed into a warm-started prior so that outputs
/// the previous optimum discarded can come back.
const PRIOR_REVIVAL: f64 = 0.01;
/// Structured starts run before the random ones.
const STRUCTURED_STARTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// A feasible point of the capacity supremum: the Holevo quantity reached by
/// `ensemble` on the sending side with `probe` fixed on the other side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolevoCertificate {
    pub value: f64,
    pub units: Units,
    pub direction: Direction,
    pub probe: Vec<C64>,
    pub ensemble: Ensemble,
    pub iterations: usize,
    pub seed: u64,
    /// Index of the start that produced the certificate; its RNG seed is `seed + restart`.
    pub restart: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    /// Random starts, in addition to the two structured ones.
    pub restarts: usize,
    /// Perturbation steps per start.
    pub iters: usize,
    pub units: Units,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, restarts: 4, iters: 200, units: Units::Bits }
    }
}

#[derive(Debug, Clone)]
struct Point {
    probe: Vec<C64>,
    states: Vec<Vec<C64>>,
    probs: Vec<f64>,
    chi_nats: f64,
}

fn evaluate(gate: &ControlledGate, probe: Vec<C64>, states: Vec<Vec<C64>>, prior: &[f64]) -> Result<Point> {
    let outputs: Vec<DensityMatrix> = states.iter().map(|s| backward_output_unchecked(gate, &probe, s)).collect();
    let k = prior.len() as f64;
    let start: Vec<f64> = prior.iter().map(|p| (1.0 - PRIOR_REVIVAL) * p + PRIOR_REVIVAL / k).collect();
    let opt = optimize_prior_from(&outputs, &start, PRIOR_ITERS, PRIOR_TOL)?;
    Ok(Point { probe, states, probs: opt.probs, chi_nats: opt.chi_nats })
}

fn perturb<R: Rng + ?Sized>(rng: &mut R, v: &[C64], step: f64) -> Vec<C64> {
    let moved: Vec<C64> = v
        .iter()
        .map(|z| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z + C64::new(re, im) * step
        })
        .collect();
    normalized(&moved).unwrap_or_else(|| v.to_vec())
}

/// Uniform probe on `A` and the eigenbasis (pulled back through `V_0`) of a
/// generic Hermitian combination of the `V_j V_0†`. When the controls
/// commute this is their joint eigenbasis and the outputs are orthogonal.
fn joint_eigenbasis_start<R: Rng + ?Sized>(gate: &ControlledGate, rng: &mut R) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
    let m = gate.m();
    let v0_adj = gate.control(0).adjoint();
    let mut h = CMatrix::zeros(m, m);
    for v in gate.controls().iter().skip(1) {
        let w = (v * &v0_adj).scale(gaussian_c64(rng));
        h = &(&h + &w) + &w.adjoint();
    }
    let eig = herm_eig(&h.hermitian_part())?;
    let states = (0..m).map(|l| v0_adj.mul_vec(&eig.vector(l))).collect();
    Ok((uniform_superposition(gate.n()), states))
}

fn initial_point(gate: &ControlledGate, restart: usize, rng: &mut crate::numerics::random::Rng64) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
    match restart {
        0 => Ok(match best_pair_construction(gate)? {
            Some(pc) => (pc.probe, pc.states),
            None => (uniform_superposition(gate.n()), vec![random_ket(rng, gate.m())]),
        }),
        1 => joint_eigenbasis_start(gate, rng),
        _ => {
            let probe = random_ket(rng, gate.n());
            let states = (0..gate.m() + 2).map(|_| random_ket(rng, gate.m())).collect();
            Ok((probe, states))
        }
    }
}

/// One start followed by block-coordinate ascent: each step perturbs the
/// probe or one input state with Gaussian noise, re-optimizes the prior and
/// keeps the move only if the Holevo quantity rises.
fn ascend(gate: &ControlledGate, restart: usize, seed: u64, iters: usize) -> Result<(Point, usize)> {
    let mut rng = rng_from_seed(seed);
    let (probe, states) = initial_point(gate, restart, &mut rng)?;
    let k = states.len();
    let mut best = evaluate(gate, probe, states, &vec![1.0 / k as f64; k])?;
    let mut step = INITIAL_STEP;
    let mut rejections = 0;
    let mut done = 0;
    let blocks = k + 1;
    while done < iters {
        let block = done % blocks;
        done += 1;
        let mut probe = best.probe.clone();
        let mut states = best.states.clone();
        if block == 0 {
            probe = perturb(&mut rng, &probe, step);
        } else {
            states[block - 1] = perturb(&mut rng, &states[block - 1], step);
        }
        let candidate = evaluate(gate, probe, states, &best.probs)?;
        if candidate.chi_nats > best.chi_nats {
            best = candidate;
            rejections = 0;
            continue;
        }
        rejections += 1;
        if rejections >= REJECTIONS_PER_HALVING {
            if step <= STEP_FLOOR {
                break;
            }
            step = (step / 2.0).max(STEP_FLOOR);
            rejections = 0;
        }
    }
    Ok((best, done))
}

/// Randomized multi-start search for a large backward Holevo quantity.
///
/// Start 0 is the two-eigenvector construction at the largest eigenphase
/// chord, start 1 the joint-eigenbasis start, and starts `2..restarts + 2`
/// are random with `m + 2` input states. Start `r` draws from the RNG seeded
/// with `seed + r`. Starts run in parallel; the best value wins, ties going
/// to the lowest index, so the result does not depend on scheduling.
pub fn search_backward_holevo(gate: &ControlledGate, options: &SearchOptions) -> Result<HolevoCertificate> {
    let total = options.restarts + STRUCTURED_STARTS;
    let results: Vec<Result<(Point, usize)>> = (0..total)
        .into_par_iter()
        .map(|r| ascend(gate, r, options.seed.wrapping_add(r as u64), options.iters))
        .collect();
    let mut best: Option<(usize, Point, usize)> = None;
    for (r, res) in results.into_iter().enumerate() {
        let (point, iterations) = res?;
        if best.as_ref().is_none_or(|(_, b, _)| point.chi_nats > b.chi_nats) {
            best = Some((r, point, iterations));
        }
    }
    let (restart, mut point, iterations) = best.expect("at least two starts always run");
    let outputs: Vec<DensityMatrix> =
        point.states.iter().map(|s| backward_output_unchecked(gate, &point.probe, s)).collect();
    let polished = optimize_prior_from(&outputs, &point.probs, POLISH_ITERS, POLISH_TOL)?;
    if polished.chi_nats >= point.chi_nats {
        point.probs = polished.probs;
    }
    let value = holevo(&outputs, &point.probs, options.units)?;
    Ok(HolevoCertificate {
        value,
        units: options.units,
        direction: Direction::Backward,
        probe: point.probe,
        ensemble: Ensemble::new(point.probs, point.states)?,
        iterations,
        seed: options.seed,
        restart,
    })
}
