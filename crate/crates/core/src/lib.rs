//! Quantifying how much a controlled quantum system talks back to its
//! controller.
//!
//! A bipartite gate `U = Σ_j |j⟩⟨j| ⊗ V_j` lets the controller `A` steer the
//! target `B`. The same gate unavoidably carries information the other way.
//! This crate computes both directions:
//!
//! * [`numerics`]: dense complex linear algebra (Jacobi eigensolver, entropies,
//!   norms, partial traces, operator Schmidt rank).
//! * [`channels`]: controlled gates, forward/backward output states, Holevo
//!   information, Blahut–Arimoto prior optimisation and a seeded search for
//!   certified lower bounds on the backward capacity.
//! * [`bounds`]: eigenphase spread of the controls and the resulting
//!   backward lower bounds and forward upper bounds.
//! * [`groups`]: finite groups, regular representations, irrep degrees
//!   (spectral and hook-length) and the `S_n` backward/forward ratio table.
//! * [`scenarios`]: reproducible worked examples emitting [`scenarios::CapacityReport`]s.

pub mod bounds;
pub mod channels;
mod error;
pub mod groups;
pub mod numerics;
pub mod scenarios;

pub use error::{Error, Result};
pub use numerics::{CMatrix, Units, C64};
