use crate::error::{Error, Result};
use crate::numerics::{check_distribution, check_unit, trace_norm, CMatrix, DensityMatrix, C64};

use super::gate::ControlledGate;

/// Diagonal tolerance for inputs of [`deform`].
pub const DEFORM_DIAG_TOL: f64 = 1e-10;

fn check_len(len: usize, expected: usize, what: &str) -> Result<()> {
    if len != expected {
        return Err(Error::dimension(format!("{what} has dimension {len}, expected {expected}")));
    }
    Ok(())
}

/// State of `A` after the gate acts on `|φ⟩ ⊗ |ψ⟩` with `|φ⟩ = Σ c_j |j⟩`:
/// `σ_ij = c_i c̄_j ⟨ψ|V_j† V_i|ψ⟩`, equal to `tr_B(U(|φ⟩⟨φ| ⊗ |ψ⟩⟨ψ|)U†)`.
///
/// The textbook formula `c̄_i c_j ⟨ψ|V_i†V_j|ψ⟩` is the transpose of this;
/// see [`backward_output_transposed`].
pub fn backward_output(gate: &ControlledGate, control: &[C64], target: &[C64]) -> Result<DensityMatrix> {
    check_len(control.len(), gate.n(), "control amplitude vector")?;
    check_len(target.len(), gate.m(), "target state")?;
    check_unit(control, "control amplitude vector")?;
    check_unit(target, "target state")?;
    Ok(backward_output_unchecked(gate, control, target))
}

pub(crate) fn backward_output_unchecked(gate: &ControlledGate, control: &[C64], target: &[C64]) -> DensityMatrix {
    let images: Vec<Vec<C64>> = gate.controls().iter().map(|v| v.mul_vec(target)).collect();
    let n = gate.n();
    let mut sigma = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let overlap: C64 = images[j].iter().zip(&images[i]).map(|(a, b)| a.conj() * b).sum();
            let z = control[i] * control[j].conj() * overlap;
            sigma[(i, j)] = z;
            sigma[(j, i)] = z.conj();
        }
        sigma[(i, i)].im = 0.0;
    }
    DensityMatrix::from_trusted(sigma)
}

/// `Σ_ij c̄_i c_j ⟨ψ|V_i†V_j|ψ⟩ |i⟩⟨j|`: the transpose of [`backward_output`],
/// with the same spectrum.
pub fn backward_output_transposed(gate: &ControlledGate, control: &[C64], target: &[C64]) -> Result<DensityMatrix> {
    backward_output(gate, control, target).map(|s| DensityMatrix::from_trusted(s.matrix().transpose()))
}

/// General backward channel `ρ_B ↦ tr_B(U(ρ_A ⊗ ρ_B)U†)`. Entry `(i, j)` is
/// `(ρ_A)_ij · tr(V_i ρ_B V_j†)`.
pub fn backward_channel(gate: &ControlledGate, rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    check_len(rho_a.dim(), gate.n(), "state of A")?;
    check_len(rho_b.dim(), gate.m(), "state of B")?;
    let images: Vec<CMatrix> = gate.controls().iter().map(|v| v * rho_b.matrix()).collect();
    let n = gate.n();
    let sigma = CMatrix::from_fn(n, n, |i, j| {
        // tr(V_i ρ V_j†) = Σ_kl (V_i ρ)_kl conj(V_j)_kl
        let t: C64 = images[i]
            .as_slice()
            .iter()
            .zip(gate.control(j).as_slice())
            .map(|(a, b)| a * b.conj())
            .sum();
        rho_a.matrix()[(i, j)] * t
    });
    Ok(DensityMatrix::from_trusted(sigma.hermitian_part()))
}

/// General forward channel `ρ_A ↦ tr_A(U(ρ_A ⊗ ρ_B)U†) = Σ_j (ρ_A)_jj V_j ρ_B V_j†`.
pub fn forward_channel(gate: &ControlledGate, rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    check_len(rho_a.dim(), gate.n(), "state of A")?;
    check_len(rho_b.dim(), gate.m(), "state of B")?;
    let m = gate.m();
    let mut acc = CMatrix::zeros(m, m);
    for (j, v) in gate.controls().iter().enumerate() {
        let w = rho_a.matrix()[(j, j)].re;
        if w != 0.0 {
            acc = &acc + &rho_b.matrix().conjugate_by(v).scale_real(w);
        }
    }
    Ok(DensityMatrix::from_trusted(acc.hermitian_part()))
}

/// `V_j |ψ⟩⟨ψ| V_j†`: the state of `B` when `A` is prepared in `|j⟩`.
pub fn forward_output(gate: &ControlledGate, control_index: usize, target: &[C64]) -> Result<DensityMatrix> {
    if control_index >= gate.n() {
        return Err(Error::validation(format!("control index {control_index} out of range 0..{}", gate.n())));
    }
    check_len(target.len(), gate.m(), "target state")?;
    check_unit(target, "target state")?;
    Ok(DensityMatrix::from_trusted(CMatrix::projector(&gate.control(control_index).mul_vec(target))))
}

/// Forward outputs for every computational basis input of `A`.
pub fn forward_basis_outputs(gate: &ControlledGate, target: &[C64]) -> Result<Vec<DensityMatrix>> {
    (0..gate.n()).map(|j| forward_output(gate, j, target)).collect()
}

/// Backward outputs for a fixed probe on `A` and a list of inputs on `B`.
pub fn backward_outputs(gate: &ControlledGate, probe: &[C64], inputs: &[Vec<C64>]) -> Result<Vec<DensityMatrix>> {
    inputs.iter().map(|psi| backward_output(gate, probe, psi)).collect()
}

/// How much the state of `A` after the gate depends on which of two states
/// `B` started in: `‖G(ρ_B) − G(ρ'_B)‖₁` for the backward channel `G` at
/// probe `ρ_A`. Zero for product gates.
pub fn backward_influence(
    gate: &ControlledGate,
    probe: &DensityMatrix,
    rho_b: &DensityMatrix,
    rho_b_prime: &DensityMatrix,
) -> Result<f64> {
    let a = backward_channel(gate, probe, rho_b)?;
    let b = backward_channel(gate, probe, rho_b_prime)?;
    trace_norm(&(a.matrix() - b.matrix()))
}

/// `σ ↦ DσD` with `D = diag(√(p_g |G|))`. Defined on states whose diagonal
/// is constant `1/|G|`; the image has diagonal `p`.
pub fn deform(sigma: &DensityMatrix, p: &[f64]) -> Result<DensityMatrix> {
    let dim = sigma.dim();
    check_len(p.len(), dim, "deformation distribution")?;
    check_distribution(p)?;
    let target = 1.0 / dim as f64;
    for (g, d) in sigma.matrix().diagonal().iter().enumerate() {
        if (d - C64::new(target, 0.0)).norm() > DEFORM_DIAG_TOL {
            return Err(Error::validation(format!(
                "deformation needs constant diagonal 1/{dim}; entry {g} is {:.12}",
                d.re
            )));
        }
    }
    let scale: Vec<f64> = p.iter().map(|&x| (x * dim as f64).sqrt()).collect();
    let out = CMatrix::from_fn(dim, dim, |i, j| sigma.matrix()[(i, j)] * (scale[i] * scale[j]));
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::gate::{cnot, ControlledGate};
    use crate::numerics::random::{random_distribution, random_ket, random_unitary, rng_from_seed};
    use crate::numerics::{basis, partial_trace_matrix, uniform_superposition, Keep};

    fn minus() -> Vec<C64> {
        let s = 1.0 / 2f64.sqrt();
        vec![C64::new(s, 0.0), C64::new(-s, 0.0)]
    }

    /// Brute force: conjugate the full product state by U and trace out B.
    fn oracle(gate: &ControlledGate, c: &[C64], psi: &[C64]) -> CMatrix {
        let u = gate.full_matrix();
        let joint: Vec<C64> = c.iter().flat_map(|&a| psi.iter().map(move |&b| a * b)).collect();
        let rho = CMatrix::projector(&joint).conjugate_by(&u);
        partial_trace_matrix(&rho, Keep::A, (gate.n(), gate.m())).unwrap()
    }

    #[test]
    fn basis_control_is_insensitive() {
        let g = cnot();
        let mut rng = rng_from_seed(1);
        for _ in 0..5 {
            let psi = random_ket(&mut rng, 2);
            let s = backward_output(&g, &basis(2, 0), &psi).unwrap();
            assert!(s.matrix().max_abs_diff(&CMatrix::projector(&basis(2, 0))) < 1e-15);
        }
    }

    #[test]
    fn cnot_phase_kickback() {
        let g = cnot();
        let plus = uniform_superposition(2);
        let s = backward_output(&g, &plus, &plus).unwrap();
        assert!(s.matrix().max_abs_diff(&oracle(&g, &plus, &plus)) < 1e-15);
        assert!(s.matrix().max_abs_diff(&CMatrix::projector(&plus)) < 1e-15);
        let s = backward_output(&g, &plus, &minus()).unwrap();
        assert!(s.matrix().max_abs_diff(&oracle(&g, &plus, &minus())) < 1e-15);
        assert!(s.matrix().max_abs_diff(&CMatrix::projector(&minus())) < 1e-15);
    }

    #[test]
    fn formula_matches_partial_trace_on_random_gates() {
        let mut rng = rng_from_seed(2);
        for n in 1..=5 {
            for m in 1..=5 {
                let g = ControlledGate::new((0..n).map(|_| random_unitary(&mut rng, m)).collect()).unwrap();
                let c = random_ket(&mut rng, n);
                let psi = random_ket(&mut rng, m);
                let s = backward_output(&g, &c, &psi).unwrap();
                assert!(s.matrix().max_abs_diff(&oracle(&g, &c, &psi)) < 1e-12);
                let t = backward_output_transposed(&g, &c, &psi).unwrap();
                assert!(t.matrix().max_abs_diff(&s.matrix().transpose()) == 0.0);
                let mixed = backward_channel(&g, &DensityMatrix::pure(&c).unwrap(), &DensityMatrix::pure(&psi).unwrap()).unwrap();
                assert!(mixed.matrix().max_abs_diff(s.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn forward_channel_matches_partial_trace() {
        let mut rng = rng_from_seed(3);
        let g = ControlledGate::new((0..3).map(|_| random_unitary(&mut rng, 2)).collect()).unwrap();
        let c = random_ket(&mut rng, 3);
        let psi = random_ket(&mut rng, 2);
        let joint: Vec<C64> = c.iter().flat_map(|&a| psi.iter().map(move |&b| a * b)).collect();
        let rho = CMatrix::projector(&joint).conjugate_by(&g.full_matrix());
        let want = partial_trace_matrix(&rho, Keep::B, (3, 2)).unwrap();
        let got = forward_channel(&g, &DensityMatrix::pure(&c).unwrap(), &DensityMatrix::pure(&psi).unwrap()).unwrap();
        assert!(got.matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn forward_outputs() {
        let g = cnot();
        let mut rng = rng_from_seed(4);
        let psi = random_ket(&mut rng, 2);
        let out = forward_output(&g, 0, &psi).unwrap();
        assert!(out.matrix().max_abs_diff(&CMatrix::projector(&psi)) < 1e-15);
        assert!(forward_output(&g, 2, &psi).is_err());
    }

    #[test]
    fn cnot_influence_is_maximal_for_x_eigenstates() {
        let g = cnot();
        let plus = DensityMatrix::pure(&uniform_superposition(2)).unwrap();
        let m = DensityMatrix::pure(&minus()).unwrap();
        let d = backward_influence(&g, &plus, &plus, &m).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
        assert_eq!(backward_influence(&g, &plus, &m, &m).unwrap(), 0.0);
    }

    #[test]
    fn product_gate_has_no_influence() {
        let mut rng = rng_from_seed(5);
        let y = random_unitary(&mut rng, 3);
        let controls = (0..4).map(|k| y.scale(C64::from_polar(1.0, 0.37 * k as f64))).collect();
        let g = ControlledGate::new(controls).unwrap();
        for _ in 0..10 {
            let probe = DensityMatrix::pure(&random_ket(&mut rng, 4)).unwrap();
            let a = DensityMatrix::pure(&random_ket(&mut rng, 3)).unwrap();
            let b = DensityMatrix::pure(&random_ket(&mut rng, 3)).unwrap();
            assert!(backward_influence(&g, &probe, &a, &b).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn deform_with_uniform_weights_is_identity() {
        let mut rng = rng_from_seed(6);
        let g = crate::channels::gate::shift_gate(4).unwrap();
        let sigma = backward_output(&g, &uniform_superposition(4), &random_ket(&mut rng, 4)).unwrap();
        let same = deform(&sigma, &[0.25; 4]).unwrap();
        assert!(same.matrix().max_abs_diff(sigma.matrix()) < 1e-15);
        let p = random_distribution(&mut rng, 4);
        let d = deform(&sigma, &p).unwrap();
        for (x, want) in d.matrix().diagonal().iter().zip(&p) {
            assert!((x.re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn deform_equals_probe_change() {
        // Deforming the uniform-probe output is the output for probe Σ √p_g |g⟩.
        let mut rng = rng_from_seed(7);
        let g = crate::channels::gate::shift_gate(5).unwrap();
        let psi = random_ket(&mut rng, 5);
        let p = random_distribution(&mut rng, 5);
        let sqrt_p: Vec<C64> = p.iter().map(|&x| C64::new(x.sqrt(), 0.0)).collect();
        let direct = backward_output(&g, &sqrt_p, &psi).unwrap();
        let uniform = backward_output(&g, &uniform_superposition(5), &psi).unwrap();
        assert!(deform(&uniform, &p).unwrap().matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn deform_rejects_nonconstant_diagonal() {
        let s = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        assert!(matches!(deform(&s, &[0.5, 0.5]), Err(Error::Validation(_))));
        let s = DensityMatrix::maximally_mixed(2);
        assert!(deform(&s, &[0.5, 0.6]).is_err());
    }
}
