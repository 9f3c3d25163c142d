use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::channels::ControlledGate;
use crate::error::{Error, Result};
use crate::numerics::random::{gaussian_c64, rng_from_seed};
use crate::numerics::{basis, herm_eig, normalized, CMatrix, HermEigen, Units, C64};

use super::finite::FiniteGroup;
use super::symmetric::{big_log, hook_degree, partitions};

/// Largest order for which the regular gate is built densely.
pub const REGULAR_GATE_MAX: usize = 256;
/// Largest order accepted by the spectral degree extractor.
pub const SPECTRAL_MAX: usize = 200;
/// Default relative clustering tolerance.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
const RESAMPLES: u64 = 5;

/// Controlled gate of the regular representation: `V_g|h⟩ = |gh⟩`.
pub fn regular_gate(group: &FiniteGroup) -> Result<ControlledGate> {
    let order = group.order();
    if order > REGULAR_GATE_MAX {
        return Err(Error::validation(format!("regular gate is capped at order {REGULAR_GATE_MAX}, got {order}")));
    }
    let controls = (0..order)
        .map(|g| {
            let mut v = CMatrix::zeros(order, order);
            for h in 0..order {
                v[(group.mul(g, h), h)] = C64::new(1.0, 0.0);
            }
            v
        })
        .collect();
    ControlledGate::new(controls)
}

/// `max_{g,h} ‖V_g V_h − V_{gh}‖_max` for a regular gate.
pub fn homomorphism_residual(group: &FiniteGroup, gate: &ControlledGate) -> f64 {
    let mut worst = 0.0_f64;
    for g in 0..group.order() {
        for h in 0..group.order() {
            let prod = gate.control(g) * gate.control(h);
            worst = worst.max(prod.max_abs_diff(gate.control(group.mul(g, h))));
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeSource {
    ExactHook,
    Spectral,
}

/// Degrees of the inequivalent irreducible representations, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrepDegrees {
    pub degrees: Vec<BigUint>,
    pub source: DegreeSource,
}

impl IrrepDegrees {
    /// `N = Σ d_r`.
    pub fn sum(&self) -> BigUint {
        self.degrees.iter().sum()
    }

    pub fn sum_of_squares(&self) -> BigUint {
        self.degrees.iter().map(|d| d * d).sum()
    }

    pub fn count(&self) -> usize {
        self.degrees.len()
    }

    pub fn as_u64(&self) -> Vec<u64> {
        self.degrees.iter().map(|d| d.iter_u64_digits().next().unwrap_or(0)).collect()
    }
}

/// Exact degrees of `S_n` from hook lengths.
pub fn symmetric_degrees(n: usize) -> Result<IrrepDegrees> {
    let mut degrees = partitions(n)?.iter().map(|l| hook_degree(l)).collect::<Result<Vec<_>>>()?;
    degrees.sort();
    Ok(IrrepDegrees { degrees, source: DegreeSource::ExactHook })
}

/// Random Hermitian element `Σ_g (z_g V_g + z̄_g V_g†)` of the group algebra
/// in the regular representation. Entry `(a, b)` collects `g = a b⁻¹`.
fn generic_hermitian(group: &FiniteGroup, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let z: Vec<C64> = (0..group.order()).map(|_| gaussian_c64(&mut rng)).collect();
    CMatrix::from_fn(group.order(), group.order(), |a, b| {
        z[group.mul(a, group.inverse(b))] + z[group.mul(b, group.inverse(a))].conj()
    })
}

/// Eigendecomposition of a generic algebra element with eigenvalues grouped
/// into clusters of (numerically) equal values.
struct Clusters {
    eig: HermEigen,
    /// Index ranges into the (descending) spectrum.
    ranges: Vec<std::ops::Range<usize>>,
}

fn cluster(values: &[f64], tol: f64) -> Result<Vec<std::ops::Range<usize>>> {
    let spread = values.first().copied().unwrap_or(0.0) - values.last().copied().unwrap_or(0.0);
    let merge = tol * spread;
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > merge {
            ranges.push(start..i);
            start = i;
        }
    }
    // every gap between clusters must dwarf the merge window
    for w in ranges.windows(2) {
        let gap = values[w[0].end - 1] - values[w[1].start];
        if gap <= 10.0 * merge {
            return Err(Error::Numerical(format!("ambiguous eigenvalue clustering (gap {gap:.3e}, window {merge:.3e})")));
        }
    }
    Ok(ranges)
}

fn degrees_from_clusters(ranges: &[std::ops::Range<usize>]) -> Result<Vec<BigUint>> {
    let mut by_mult: BTreeMap<usize, usize> = BTreeMap::new();
    for r in ranges {
        *by_mult.entry(r.len()).or_default() += 1;
    }
    let mut degrees = Vec::new();
    for (&mult, &count) in &by_mult {
        if count % mult != 0 {
            return Err(Error::Numerical(format!("{count} clusters of multiplicity {mult} cannot form irreps of degree {mult}")));
        }
        degrees.extend(std::iter::repeat_n(BigUint::from(mult), count / mult));
    }
    Ok(degrees)
}

fn spectral_attempt(group: &FiniteGroup, seed: u64, tol: f64, classes: usize) -> Result<(Clusters, IrrepDegrees)> {
    let eig = herm_eig(&generic_hermitian(group, seed))?;
    let ranges = cluster(eig.values.values(), tol)?;
    let degrees = IrrepDegrees { degrees: degrees_from_clusters(&ranges)?, source: DegreeSource::Spectral };
    if degrees.sum_of_squares() != BigUint::from(group.order()) {
        return Err(Error::Numerical(format!("squared degrees sum to {} instead of {}", degrees.sum_of_squares(), group.order())));
    }
    if degrees.count() != classes {
        return Err(Error::Numerical(format!("found {} irreps but {classes} conjugacy classes", degrees.count())));
    }
    Ok((Clusters { eig, ranges }, degrees))
}

fn spectral_clusters(group: &FiniteGroup, seed: u64, tol: f64) -> Result<(Clusters, IrrepDegrees)> {
    if group.order() > SPECTRAL_MAX {
        return Err(Error::validation(format!("spectral degrees are capped at order {SPECTRAL_MAX}, got {}", group.order())));
    }
    let classes = group.conjugacy_class_count();
    let mut last = None;
    for s in 0..RESAMPLES {
        match spectral_attempt(group, seed.wrapping_add(s), tol, classes) {
            Ok(found) => return Ok(found),
            Err(Error::Numerical(msg)) => last = Some(msg),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Numerical(format!(
        "degree extraction failed after {RESAMPLES} samples: {}",
        last.unwrap_or_default()
    )))
}

/// Irrep degrees from the eigenvalue multiplicities of a random Hermitian
/// element of the group algebra. Per irrep of degree `d` such an element
/// has `d` distinct eigenvalues, each of multiplicity `d`.
pub fn isotypic_degrees_spectral(group: &FiniteGroup, seed: u64, tol: f64) -> Result<IrrepDegrees> {
    spectral_clusters(group, seed, tol).map(|(_, d)| d)
}

/// `N` orthonormal inputs on `B` that the regular gate maps to orthogonal
/// outputs on `A` under the uniform probe: `P_c|𝟏⟩` for the spectral
/// projectors `P_c` of a generic algebra element.
pub fn block_basis_inputs(group: &FiniteGroup, seed: u64) -> Result<Vec<Vec<C64>>> {
    let (clusters, _) = spectral_clusters(group, seed, DEFAULT_CLUSTER_TOL)?;
    let one = basis(group.order(), group.identity());
    clusters
        .ranges
        .iter()
        .map(|r| {
            let mut v = vec![C64::new(0.0, 0.0); group.order()];
            for k in r.clone() {
                let e = clusters.eig.vector(k);
                let overlap = crate::numerics::inner(&e, &one);
                v.iter_mut().zip(&e).for_each(|(a, b)| *a += b * overlap);
            }
            normalized(&v).ok_or_else(|| Error::Numerical("spectral projector annihilates the identity".into()))
        })
        .collect()
}

/// Summary of a group's capacity pair `(log |G|, log N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub group: String,
    pub order: usize,
    pub class_count: usize,
    pub degree_source: DegreeSource,
    pub degrees: Vec<u64>,
    pub units: Units,
    pub log_order: f64,
    pub log_n: f64,
    pub ratio: f64,
    pub abelian: bool,
}

pub fn group_report(group: &FiniteGroup, degrees: &IrrepDegrees, units: Units) -> Result<GroupReport> {
    let log_order = units.log(group.order() as f64);
    let sum = degrees.sum();
    // equal integers must give bit-identical logs, so abelian groups land on ratio 1 exactly
    let log_n = if sum == BigUint::from(group.order()) { log_order } else { big_log(&sum, units)? };
    Ok(GroupReport {
        group: group.name().to_string(),
        order: group.order(),
        class_count: group.conjugacy_class_count(),
        degree_source: degrees.source,
        degrees: degrees.as_u64(),
        units,
        log_order,
        log_n,
        ratio: if group.order() == 1 { 1.0 } else { log_n / log_order },
        abelian: group.is_abelian(),
    })
}
