//! Controlled gates, the channels they induce in both directions, and
//! Holevo quantities of their outputs.

mod gate;
mod holevo;
mod outputs;
mod search;
mod symmetry;

pub use gate::{
    cnot, harrow_shor_control, harrow_shor_gate, pauli_x, shift_gate, shift_operator, ControlledGate, UNITARY_TOL,
};
pub use holevo::{
    forward_basis_capacity, forward_basis_holevo, holevo, optimize_prior, optimize_prior_from, Ensemble, PriorOptimum, HOLEVO_NOISE_FLOOR,
};
pub use outputs::{
    backward_channel, backward_influence, backward_output, backward_output_transposed, backward_outputs, deform,
    forward_basis_outputs, forward_channel, forward_output, DEFORM_DIAG_TOL,
};
pub use search::{search_backward_holevo, Direction, HolevoCertificate, SearchOptions, STEP_FLOOR};
pub use symmetry::{diagonal_gate, diagonal_symmetry_spectra, SymmetrySpectra};
