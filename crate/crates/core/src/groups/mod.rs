//! Finite groups, their regular representations, and the irrep degree sums
//! that set the backward capacity of the regular controlled gate.

mod finite;
mod regular;
mod symmetric;

pub use finite::{FiniteGroup, ASSOCIATIVITY_CHECK_MAX, SYMMETRIC_TABLE_MAX};
pub use regular::{
    block_basis_inputs, group_report, homomorphism_residual, isotypic_degrees_spectral, regular_gate,
    symmetric_degrees, DegreeSource, GroupReport, IrrepDegrees, DEFAULT_CLUSTER_TOL, REGULAR_GATE_MAX, SPECTRAL_MAX,
};
pub use symmetric::{
    big_log, degree_summary, factorial, for_each_partition, hook_degree, involution_count, max_degree_bound_check,
    partition_bound_holds, partitions, ratio_series, sn_capacity_pair, DegreeSummary, RatioRow, SN_MAX,
};
