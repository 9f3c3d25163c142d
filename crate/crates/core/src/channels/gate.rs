use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Unitarity tolerance for control operators (max-entry residual of `V†V - I`).
pub const UNITARY_TOL: f64 = 1e-9;

/// `U = Σ_j |j⟩⟨j| ⊗ V_j` on `C^n ⊗ C^m`: the controller `A` selects which
/// unitary acts on the target `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledGate {
    n: usize,
    m: usize,
    controls: Vec<CMatrix>,
}

impl ControlledGate {
    /// Validates the control unitaries. Errors name the first offending index.
    pub fn new(controls: Vec<CMatrix>) -> Result<Self> {
        let first = controls.first().ok_or_else(|| Error::validation("a controlled gate needs at least one control"))?;
        let m = first.rows();
        if m == 0 {
            return Err(Error::validation("control operators must have dimension >= 1"));
        }
        for (j, v) in controls.iter().enumerate() {
            if v.rows() != m || v.cols() != m {
                return Err(Error::dimension(format!("control {j} is {}x{}, expected {m}x{m}", v.rows(), v.cols())));
            }
            let residual = v.unitarity_residual();
            if residual > UNITARY_TOL {
                return Err(Error::NotUnitary { index: j, residual });
            }
        }
        Ok(ControlledGate { n: controls.len(), m, controls })
    }

    /// Control dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Target dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn controls(&self) -> &[CMatrix] {
        &self.controls
    }

    pub fn control(&self, j: usize) -> &CMatrix {
        &self.controls[j]
    }

    /// The full `nm × nm` matrix.
    pub fn full_matrix(&self) -> CMatrix {
        let (n, m) = (self.n, self.m);
        let mut u = CMatrix::zeros(n * m, n * m);
        for (j, v) in self.controls.iter().enumerate() {
            for k in 0..m {
                for l in 0..m {
                    u[(j * m + k, j * m + l)] = v[(k, l)];
                }
            }
        }
        u
    }

    /// `min(n, m)`, the largest rank a forward output mixture can have.
    pub fn k(&self) -> usize {
        self.n.min(self.m)
    }
}

fn real_perm(dim: usize, image: impl Fn(usize) -> usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        p[(image(i), i)] = C64::new(1.0, 0.0);
    }
    p
}

pub fn pauli_x() -> CMatrix {
    real_perm(2, |i| 1 - i)
}

/// Controlled-NOT with `A` as control.
pub fn cnot() -> ControlledGate {
    ControlledGate::new(vec![CMatrix::identity(2), pauli_x()]).expect("CNOT controls are unitary")
}

/// Cyclic shift `S = Σ_j |j⟩⟨j+1 mod n|`.
pub fn shift_operator(n: usize) -> CMatrix {
    // S|j+1⟩ = |j⟩
    real_perm(n, |i| (i + n - 1) % n)
}

/// Controlled powers of the shift, `Σ_j P_j ⊗ S^j`.
pub fn shift_gate(n: usize) -> Result<ControlledGate> {
    if n == 0 {
        return Err(Error::validation("shift gate needs n >= 1"));
    }
    let s = shift_operator(n);
    let mut controls = Vec::with_capacity(n);
    let mut power = CMatrix::identity(n);
    for _ in 0..n {
        controls.push(power.clone());
        power = &power * &s;
    }
    ControlledGate::new(controls)
}

/// Gate with `V_j|0⟩ = |j⟩`, `V_j|i⟩ = |i-1⟩` for `0 < i ≤ j` and
/// `V_j|i⟩ = |i⟩` for `i > j`: forward capacity `log n` with little
/// backaction.
pub fn harrow_shor_control(n: usize, j: usize) -> CMatrix {
    real_perm(n, |i| {
        if i == 0 {
            j
        } else if i <= j {
            i - 1
        } else {
            i
        }
    })
}

pub fn harrow_shor_gate(n: usize) -> Result<ControlledGate> {
    if n == 0 {
        return Err(Error::validation("Harrow-Shor gate needs n >= 1"));
    }
    ControlledGate::new((0..n).map(|j| harrow_shor_control(n, j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::basis;

    #[test]
    fn cnot_full_matrix() {
        let expected = CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        assert_eq!(cnot().full_matrix(), expected);
    }

    #[test]
    fn shift_sends_basis_states_around() {
        let n = 3;
        let g = shift_gate(n).unwrap();
        for j in 0..n {
            // S^j |0⟩ = |-j mod n⟩ with this orientation of S
            let out = g.control(j).mul_vec(&basis(n, 0));
            assert_eq!(out, basis(n, (n - j) % n));
        }
        let s = shift_operator(n);
        assert_eq!(s.mul_vec(&basis(n, 1)), basis(n, 0));
    }

    #[test]
    fn non_unitary_control_named() {
        let bad = CMatrix::from_real_diag(&[1.0, 0.5]);
        let err = ControlledGate::new(vec![CMatrix::identity(2), bad]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary { index: 1, .. }));
        let err = ControlledGate::new(vec![CMatrix::identity(2), CMatrix::identity(3)]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(ControlledGate::new(vec![]).is_err());
    }

    #[test]
    fn harrow_shor_controls() {
        let n = 5;
        let g = harrow_shor_gate(n).unwrap();
        for j in 0..n {
            assert_eq!(g.control(j).mul_vec(&basis(n, 0)), basis(n, j));
            assert_eq!(g.control(j).unitarity_residual(), 0.0);
            for i in 1..n {
                let expect = if i <= j { i - 1 } else { i };
                assert_eq!(g.control(j).mul_vec(&basis(n, i)), basis(n, expect));
            }
        }
    }

    #[test]
    fn phase_equivalent_controls_are_valid() {
        let e = C64::from_polar(1.0, 0.9);
        let g = ControlledGate::new(vec![CMatrix::identity(2), CMatrix::identity(2).scale(e)]).unwrap();
        assert_eq!((g.n(), g.m(), g.k()), (2, 2, 2));
    }
}
