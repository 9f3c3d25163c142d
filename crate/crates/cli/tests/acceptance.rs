//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use backaction::bounds::{
    backward_lower_bound, best_pair_construction, forward_upper_bound, gate_phase_spread, ForwardVariant,
};
use backaction::channels::{
    backward_influence, backward_outputs, cnot, diagonal_symmetry_spectra, forward_basis_capacity, holevo,
    search_backward_holevo, ControlledGate, SearchOptions,
};
use backaction::groups::{
    degree_summary, group_report, involution_count, isotypic_degrees_spectral, ratio_series, symmetric_degrees,
    FiniteGroup, DEFAULT_CLUSTER_TOL,
};
use backaction::numerics::random::{
    random_diagonal_unitary, random_distribution, random_ket, random_unitary, rng_from_seed, Rng64,
};
use backaction::numerics::{binary_entropy, operator_schmidt_rank, DensityMatrix};
use backaction::scenarios::{run_s3_permutation, run_s3_regular, run_shift};
use backaction::{Units, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
}

/// Dimensions cycle through the grid `2..=top` so every shape gets used.
fn dims(i: usize, top: usize) -> (usize, usize) {
    let span = top - 1;
    (2 + i % span, 2 + (i / span) % span)
}

fn random_gate(rng: &mut Rng64, n: usize, m: usize) -> ControlledGate {
    ControlledGate::new((0..n).map(|_| random_unitary(rng, m)).collect()).expect("random unitaries are valid controls")
}

fn s3_regular() -> Outcome {
    let start = Instant::now();
    let r = run_s3_regular(Units::Bits).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((r.forward.value - 2.584963).abs() < 1e-6, || format!("forward {}", r.forward.value))?;
    ensure(r.backward.value == 2.0, || format!("backward {}", r.backward.value))?;
    let sigma: Vec<_> = r.checks.iter().filter(|c| c.name.contains("-output-sigma")).collect();
    ensure(sigma.len() == 8, || format!("expected 8 output checks, found {}", sigma.len()))?;
    for c in sigma.iter().chain(r.check("fourier-unitary").iter()).chain(r.check("block-diagonal").iter()) {
        ensure(c.residual < 1e-12, || format!("{} residual {:e}", c.name, c.residual))?;
    }
    ensure(r.all_passed(), || format!("failed: {:?}", r.failed_checks().map(|c| &c.name).collect::<Vec<_>>()))?;
    within(Duration::from_secs(1), elapsed)?;
    let worst = sigma.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(format!("forward {} bits, backward {} bits, worst sigma residual {worst:.1e}, {elapsed:.2?}", r.forward.value, r.backward.value))
}

fn ratio_table() -> Outcome {
    let start = Instant::now();
    let rows = ratio_series(64, Units::Bits).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(rows.len() == 63, || format!("{} rows", rows.len()))?;
    ensure(rows[0].ratio == 1.0, || format!("n = 2 ratio {}", rows[0].ratio))?;
    ensure((rows[1].ratio - 0.7737056).abs() < 1e-6, || format!("n = 3 ratio {}", rows[1].ratio))?;
    let r32 = rows[30].ratio;
    ensure(rows[30].n == 32 && (0.54..=0.552).contains(&r32), || format!("n = 32 ratio {r32}"))?;
    ensure(rows.iter().all(|r| r.ratio >= 0.5), || "a ratio fell below 1/2".into())?;
    for w in rows[..31].windows(2) {
        ensure(w[1].ratio < w[0].ratio, || format!("ratio not decreasing at n = {}", w[1].n))?;
    }
    within(Duration::from_secs(10), elapsed)?;
    // independent of the table run: degree sums against the involution recurrence
    for n in 2..=64 {
        let s = degree_summary(n).map_err(|e| e.to_string())?;
        ensure(s.sum == involution_count(n), || format!("n = {n}: degree sum != involution count"))?;
    }
    Ok(format!("63 rows, ratio(3) = {:.7}, ratio(32) = {r32:.6}, degree sums = I(n) for n <= 64, {elapsed:.2?}", rows[1].ratio))
}

fn diagonal_symmetry() -> Outcome {
    let mut rng = rng_from_seed(3003);
    let mut worst = 0.0_f64;
    for i in 0..200 {
        let (n, m) = (1 + i % 6, 1 + (i / 6) % 6);
        let gate = ControlledGate::new((0..n).map(|_| random_diagonal_unitary(&mut rng, m)).collect())
            .map_err(|e| e.to_string())?;
        let p = random_distribution(&mut rng, n);
        let psi = random_ket(&mut rng, m);
        let s = diagonal_symmetry_spectra(&gate, &p, &psi, Units::Bits).map_err(|e| e.to_string())?;
        worst = worst.max(s.spectrum_gap());
        ensure(s.spectrum_gap() <= 1e-10, || format!("gate {i}: gap {:e}", s.spectrum_gap()))?;
    }
    Ok(format!("200 diagonal gates, worst spectrum gap {worst:.1e}"))
}

fn backward_bound() -> Outcome {
    let mut rng = rng_from_seed(4004);
    let mut worst_pair = 0.0_f64;
    let mut min_margin = f64::INFINITY;
    for i in 0..100 {
        let (n, m) = dims(i, 5);
        let gate = random_gate(&mut rng, n, m);
        let d = gate_phase_spread(&gate).map_err(|e| e.to_string())?.d;
        let bound = backward_lower_bound(d, Units::Bits).map_err(|e| e.to_string())?;
        let opts = SearchOptions { seed: i as u64, restarts: 2, iters: 60, units: Units::Bits };
        let cert = search_backward_holevo(&gate, &opts).map_err(|e| e.to_string())?;
        min_margin = min_margin.min(cert.value - bound);
        ensure(cert.value >= bound - 1e-9, || format!("gate {i}: certificate {} < bound {bound}", cert.value))?;
        let pc = best_pair_construction(&gate).map_err(|e| e.to_string())?.ok_or("no control pair")?;
        let outs = backward_outputs(&gate, &pc.probe, &pc.states).map_err(|e| e.to_string())?;
        let achieved = holevo(&outs, &[0.5, 0.5], Units::Bits).map_err(|e| e.to_string())?;
        let err = (achieved - pc.predicted(Units::Bits).map_err(|e| e.to_string())?).abs();
        worst_pair = worst_pair.max(err);
        ensure(err <= 1e-10, || format!("gate {i}: two-eigenvector ensemble off by {err:e}"))?;
    }
    let gate = cnot();
    let strong = backward_lower_bound(gate_phase_spread(&gate).map_err(|e| e.to_string())?.d_max_pair, Units::Bits)
        .map_err(|e| e.to_string())?;
    let s = 1.0 / 2f64.sqrt();
    let plus = vec![C64::new(s, 0.0), C64::new(s, 0.0)];
    let minus = vec![C64::new(s, 0.0), C64::new(-s, 0.0)];
    let outs = backward_outputs(&gate, &plus, &[plus.clone(), minus]).map_err(|e| e.to_string())?;
    let achieved = holevo(&outs, &[0.5, 0.5], Units::Bits).map_err(|e| e.to_string())?;
    ensure((strong - achieved).abs() <= 1e-12 && (achieved - 1.0).abs() <= 1e-12, || {
        format!("CNOT strong bound {strong} vs achieved {achieved}")
    })?;
    Ok(format!(
        "100 gates, min certificate - bound {min_margin:.3e}, worst pair-ensemble error {worst_pair:.1e}, CNOT {achieved} = {strong}"
    ))
}

fn forward_bound() -> Outcome {
    let mut rng = rng_from_seed(5005);
    let mut min_slack = f64::INFINITY;
    for i in 0..200 {
        let (n, m) = dims(i, 6);
        let gate = random_gate(&mut rng, n, m);
        let d = gate_phase_spread(&gate).map_err(|e| e.to_string())?.d;
        let cap = forward_upper_bound(d, gate.k(), ForwardVariant::Corrected, Units::Bits).map_err(|e| e.to_string())?;
        let psi = random_ket(&mut rng, m);
        let forward = forward_basis_capacity(&gate, &psi, Units::Bits).map_err(|e| e.to_string())?;
        min_slack = min_slack.min(cap - forward);
        ensure(forward <= cap + 1e-9, || format!("gate {i}: forward {forward} > corrected bound {cap}"))?;
    }
    let gate = cnot();
    let d = gate_phase_spread(&gate).map_err(|e| e.to_string())?.d;
    let paper = forward_upper_bound(d, 2, ForwardVariant::Paper, Units::Bits).map_err(|e| e.to_string())?;
    let expected = binary_entropy(2f64.sqrt() / 2.0, Units::Bits).map_err(|e| e.to_string())?;
    let forward = forward_basis_capacity(&gate, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], Units::Bits)
        .map_err(|e| e.to_string())?;
    ensure((paper - expected).abs() <= 1e-12, || format!("uncorrected bound {paper}, expected H2(sqrt2/2) = {expected}"))?;
    ensure((forward - 1.0).abs() <= 1e-12 && forward > paper, || format!("CNOT forward {forward} vs uncorrected bound {paper}"))?;
    Ok(format!(
        "corrected bound holds on 200 gates (min slack {min_slack:.3e}); CNOT counterexample: {forward} bit > uncorrected bound {paper:.12} bits"
    ))
}

fn product_gate_proxy() -> Outcome {
    let mut rng = rng_from_seed(2002);
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let (n, m) = dims(i, 5);
        let y = random_unitary(&mut rng, m);
        let phases = random_distribution(&mut rng, n);
        let gate = ControlledGate::new(phases.iter().map(|&t| y.scale(C64::from_polar(1.0, 40.0 * t))).collect())
            .map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let probe = DensityMatrix::pure(&random_ket(&mut rng, n)).map_err(|e| e.to_string())?;
            let b1 = DensityMatrix::pure(&random_ket(&mut rng, m)).map_err(|e| e.to_string())?;
            let b2 = DensityMatrix::pure(&random_ket(&mut rng, m)).map_err(|e| e.to_string())?;
            let infl = backward_influence(&gate, &probe, &b1, &b2).map_err(|e| e.to_string())?;
            worst = worst.max(infl);
        }
        let fwd = forward_basis_capacity(&gate, &random_ket(&mut rng, m), Units::Bits).map_err(|e| e.to_string())?;
        worst = worst.max(fwd);
    }
    ensure(worst <= 1e-10, || format!("product gate leaked {worst:e}"))?;
    let mut weakest = f64::INFINITY;
    for i in 0..50 {
        let (n, m) = dims(i, 5);
        let gate = random_gate(&mut rng, n, m);
        let rank = operator_schmidt_rank(&gate.full_matrix(), (n, m), 1e-9).map_err(|e| e.to_string())?;
        ensure(rank > 1, || format!("gate {i} drew Schmidt rank 1"))?;
        let opts = SearchOptions { seed: 100 + i as u64, restarts: 2, iters: 60, units: Units::Bits };
        let v = search_backward_holevo(&gate, &opts).map_err(|e| e.to_string())?.value;
        weakest = weakest.min(v);
        ensure(v >= 1e-3, || format!("gate {i}: backward search found only {v}"))?;
    }
    Ok(format!("50 product gates max leakage {worst:.1e}; 50 entangling gates min backward {weakest:.4} bits"))
}

fn group_formulas() -> Outcome {
    let start = Instant::now();
    let sorted = |mut v: Vec<u64>| {
        v.sort_unstable();
        v
    };
    // degrees of D4 and Q8 are four 1s and one 2
    let cases: Vec<(FiniteGroup, Vec<u64>)> = vec![
        (FiniteGroup::symmetric(3).map_err(|e| e.to_string())?, symmetric_degrees(3).map_err(|e| e.to_string())?.as_u64()),
        (FiniteGroup::symmetric(4).map_err(|e| e.to_string())?, symmetric_degrees(4).map_err(|e| e.to_string())?.as_u64()),
        (FiniteGroup::dihedral(4).map_err(|e| e.to_string())?, vec![1, 1, 1, 1, 2]),
        (FiniteGroup::quaternion(), vec![1, 1, 1, 1, 2]),
    ];
    for (g, exact) in &cases {
        let spectral = isotypic_degrees_spectral(g, 0, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
        ensure(sorted(spectral.as_u64()) == sorted(exact.clone()), || format!("{}: {:?} vs {exact:?}", g.name(), spectral.as_u64()))?;
        let sq: u64 = exact.iter().map(|d| d * d).sum();
        ensure(sq as usize == g.order(), || format!("{}: sum of squares {sq}", g.name()))?;
    }
    let mut checked = 0;
    for n in 1..=24 {
        let mut family = vec![FiniteGroup::cyclic(n).map_err(|e| e.to_string())?];
        if n >= 2 && 2 * n <= 24 {
            family.push(FiniteGroup::dihedral(n).map_err(|e| e.to_string())?);
        }
        for g in family {
            let d = isotypic_degrees_spectral(&g, 1, DEFAULT_CLUSTER_TOL).map_err(|e| e.to_string())?;
            ensure(d.sum_of_squares() == g.order().into(), || format!("{}: sum of squares", g.name()))?;
            let r = group_report(&g, &d, Units::Bits).map_err(|e| e.to_string())?;
            ensure(r.abelian == (r.ratio == 1.0), || format!("{}: abelian {} ratio {}", r.group, r.abelian, r.ratio))?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(30), elapsed)?;
    Ok(format!("S3, S4, D4, Q8 spectral = exact; abelian <=> ratio 1 on {checked} cyclic/dihedral groups, {elapsed:.2?}"))
}

fn shift_and_permutation() -> Outcome {
    for n in 2..=8 {
        let r = run_shift(n, Units::Bits).map_err(|e| e.to_string())?;
        let want = (n as f64).log2();
        ensure((r.forward.value - want).abs() < 1e-8 && (r.backward.value - want).abs() < 1e-8, || {
            format!("shift {n}: forward {} backward {}", r.forward.value, r.backward.value)
        })?;
    }
    let p = run_s3_permutation(Units::Bits).map_err(|e| e.to_string())?;
    let want = 3f64.log2();
    ensure((p.forward.value - want).abs() < 1e-8 && (p.backward.value - want).abs() < 1e-8, || {
        format!("S3 permutation: forward {} backward {}", p.forward.value, p.backward.value)
    })?;
    ensure(p.all_passed(), || "S3 permutation report has failed checks".into())?;
    Ok(format!("shift n = 2..8 gives log n both ways; S3 permutation gives {} bits both ways", p.backward.value))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_backaction")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("backaction-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut rng = rng_from_seed(9009);
    let controls: Vec<Vec<Vec<[f64; 2]>>> = (0..3)
        .map(|_| {
            let u = random_unitary(&mut rng, 3);
            (0..3).map(|r| (0..3).map(|c| [u[(r, c)].re, u[(r, c)].im]).collect()).collect()
        })
        .collect();
    let gate_path = dir.join("gate.json");
    let text = serde_json::json!({ "n": 3, "m": 3, "controlled": controls }).to_string();
    std::fs::write(&gate_path, text).map_err(|e| e.to_string())?;
    let gate = gate_path.to_str().ok_or("temp path is not UTF-8")?;

    let commands: Vec<Vec<&str>> = vec![
        vec!["search", "--gate", gate, "--seed", "17", "--restarts", "4", "--iters", "80", "--format", "json"],
        vec!["demo", "harrow-shor:6", "--seed", "5", "--restarts", "3", "--iters", "60"],
        vec!["ratio", "--max-n", "20"],
        vec!["group", "--group", "dih:6", "--seed", "3", "--format", "json"],
    ];
    for cmd in &commands {
        let first = run_cli(cmd)?;
        for threads in ["1", "4"] {
            let mut with_threads = cmd.clone();
            with_threads.extend(["--threads", threads]);
            let again = run_cli(&with_threads)?;
            ensure(first == again, || format!("{} output differs with --threads {threads}", cmd[0]))?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical across reruns with 1 and 4 threads", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("s3-regular-scenario", s3_regular),
        ("ratio-table", ratio_table),
        ("diagonal-gate-symmetry", diagonal_symmetry),
        ("backward-lower-bound", backward_bound),
        ("forward-upper-bound", forward_bound),
        ("product-gate-proxy", product_gate_proxy),
        ("group-formulas", group_formulas),
        ("shift-and-s3-permutation", shift_and_permutation),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failures += 1;
                println!("FAIL {name}: {why} [{took:.2?}]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
