use backaction::channels::{backward_outputs, holevo};
use backaction::groups::{
    block_basis_inputs, group_report, homomorphism_residual, involution_count, isotypic_degrees_spectral,
    partitions, regular_gate, symmetric_degrees, FiniteGroup, DEFAULT_CLUSTER_TOL,
};
use backaction::numerics::uniform_superposition;
use backaction::Units;
use num_bigint::BigUint;

fn families() -> Vec<FiniteGroup> {
    let mut gs = Vec::new();
    for n in 1..=24 {
        gs.push(FiniteGroup::cyclic(n).unwrap());
    }
    for n in 2..=12 {
        gs.push(FiniteGroup::dihedral(n).unwrap());
    }
    for n in 1..=4 {
        gs.push(FiniteGroup::symmetric(n).unwrap());
    }
    gs.push(FiniteGroup::quaternion());
    gs
}

#[test]
fn spectral_degrees_satisfy_the_sum_of_squares() {
    for g in families() {
        let d = isotypic_degrees_spectral(&g, 0, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.sum_of_squares(), BigUint::from(g.order()), "{}", g.name());
        assert_eq!(d.count(), g.conjugacy_class_count(), "{}", g.name());
    }
}

#[test]
fn abelian_iff_ratio_one() {
    for g in families() {
        let d = isotypic_degrees_spectral(&g, 1, DEFAULT_CLUSTER_TOL).unwrap();
        let r = group_report(&g, &d, Units::Bits).unwrap();
        assert_eq!(r.abelian, (r.ratio - 1.0).abs() < 1e-12, "{}: ratio {}", r.group, r.ratio);
        assert_eq!(r.abelian, d.sum() == BigUint::from(g.order()));
        assert!(r.ratio >= 0.5 - 1e-12, "{}: ratio {}", r.group, r.ratio);
    }
}

#[test]
fn symmetric_group_tables_agree_with_partitions() {
    for n in 1..=6 {
        let g = FiniteGroup::symmetric(n).unwrap();
        assert_eq!(g.conjugacy_class_count(), partitions(n).unwrap().len());
        let exact = symmetric_degrees(n).unwrap();
        assert_eq!(exact.sum(), involution_count(n));
        assert_eq!(exact.sum_of_squares(), BigUint::from(g.order()));
    }
    for n in [3, 4] {
        let g = FiniteGroup::symmetric(n).unwrap();
        let mut spectral = isotypic_degrees_spectral(&g, 7, DEFAULT_CLUSTER_TOL).unwrap().as_u64();
        let mut exact = symmetric_degrees(n).unwrap().as_u64();
        spectral.sort_unstable();
        exact.sort_unstable();
        assert_eq!(spectral, exact);
    }
}

#[test]
fn regular_gates_are_representations() {
    for g in families().into_iter().filter(|g| g.order() <= 24) {
        let gate = regular_gate(&g).unwrap();
        assert_eq!(homomorphism_residual(&g, &gate), 0.0, "{}", g.name());
    }
}

#[test]
fn block_inputs_reach_log_n() {
    for g in families().into_iter().filter(|g| g.order() <= 8) {
        let gate = regular_gate(&g).unwrap();
        let inputs = block_basis_inputs(&g, 2).unwrap();
        let outs = backward_outputs(&gate, &uniform_superposition(g.order()), &inputs).unwrap();
        let chi = holevo(&outs, &vec![1.0 / inputs.len() as f64; inputs.len()], Units::Bits).unwrap();
        let n = isotypic_degrees_spectral(&g, 0, DEFAULT_CLUSTER_TOL).unwrap().sum();
        let want = (n.to_string().parse::<f64>().unwrap()).log2();
        assert!((chi - want).abs() < 1e-8, "{}: {chi} vs {want}", g.name());
    }
}
