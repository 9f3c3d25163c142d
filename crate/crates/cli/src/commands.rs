use std::fmt::Write as _;
use std::path::Path;

use backaction::bounds::{BoundReport, ForwardVariant};
use backaction::channels::{forward_basis_capacity, search_backward_holevo, ControlledGate, HolevoCertificate, SearchOptions};
use backaction::groups::{
    group_report, isotypic_degrees_spectral, ratio_series, symmetric_degrees, FiniteGroup, GroupReport,
    DEFAULT_CLUSTER_TOL, SYMMETRIC_TABLE_MAX,
};
use backaction::numerics::basis;
use backaction::scenarios::{run_cnot, run_harrow_shor, run_s3_permutation, run_s3_regular, run_shift, CapacityReport};
use backaction::{Units, C64};

use crate::gatefile::GateFile;
use crate::output::{emit, sig12, to_json};
use crate::{CliError, ReportFormat, SearchArgs, TableFormat, VariantChoice};

pub const CSV_HEADER: &str = "n,log_forward,log_backward,ratio";

pub fn ratio(max_n: usize, units: Units, format: TableFormat, out: Option<&Path>) -> Result<(), CliError> {
    let rows = ratio_series(max_n, units)?;
    let text = match format {
        TableFormat::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.n, sig12(r.log_forward), sig12(r.log_backward), sig12(r.ratio));
            }
            s
        }
        TableFormat::Json => to_json(&rows)?,
    };
    emit(&text, out)
}

fn parse_size(spec: &str, arg: &str) -> Result<usize, CliError> {
    arg.parse().map_err(|_| CliError::Input(format!("'{spec}': '{arg}' is not a positive integer")))
}

pub fn parse_group(spec: &str) -> Result<FiniteGroup, CliError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let group = match kind {
        "cyc" => FiniteGroup::cyclic(parse_size(spec, arg)?)?,
        "dih" => FiniteGroup::dihedral(parse_size(spec, arg)?)?,
        "sym" => {
            let n = parse_size(spec, arg)?;
            if n > SYMMETRIC_TABLE_MAX {
                return Err(CliError::Input(format!(
                    "sym:{n} has no Cayley table here (n <= {SYMMETRIC_TABLE_MAX}); the ratio command covers n up to 64"
                )));
            }
            FiniteGroup::symmetric(n)?
        }
        "q8" if arg.is_empty() => FiniteGroup::quaternion(),
        "file" => {
            let path = Path::new(arg);
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read Cayley table {arg}: {e}")))?;
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
            FiniteGroup::parse_table(name, &text)?
        }
        _ => return Err(CliError::Input(format!("unknown group '{spec}' (expected cyc:n, dih:n, sym:n, q8 or file:path)"))),
    };
    Ok(group)
}

pub fn group_summary(spec: &str, seed: u64, units: Units) -> Result<GroupReport, CliError> {
    let group = parse_group(spec)?;
    let degrees = match spec.strip_prefix("sym:") {
        Some(n) => symmetric_degrees(parse_size(spec, n)?)?,
        None => isotypic_degrees_spectral(&group, seed, DEFAULT_CLUSTER_TOL)?,
    };
    Ok(group_report(&group, &degrees, units)?)
}

pub fn group(spec: &str, seed: u64, units: Units, format: ReportFormat) -> Result<(), CliError> {
    let r = group_summary(spec, seed, units)?;
    let text = match format {
        ReportFormat::Json => to_json(&r)?,
        ReportFormat::Text => {
            let degrees: Vec<String> = r.degrees.iter().map(u64::to_string).collect();
            let source = serde_json::to_value(r.degree_source).ok().and_then(|v| v.as_str().map(String::from));
            let mut s = String::new();
            let _ = writeln!(s, "group: {}", r.group);
            let _ = writeln!(s, "order: {}", r.order);
            let _ = writeln!(s, "classes: {}", r.class_count);
            let _ = writeln!(s, "degrees ({}): {}", source.unwrap_or_default(), degrees.join(" "));
            let _ = writeln!(s, "log_order: {} {units}", sig12(r.log_order));
            let _ = writeln!(s, "log_n: {} {units}", sig12(r.log_n));
            let _ = writeln!(s, "ratio: {}", sig12(r.ratio));
            let _ = writeln!(s, "abelian: {}", r.abelian);
            s
        }
    };
    emit(&text, None)
}

/// Best forward Holevo quantity over computational-basis targets; a lower
/// bound on the forward capacity.
fn forward_basis_best(gate: &ControlledGate, units: Units) -> Result<f64, CliError> {
    let mut best = 0.0_f64;
    for i in 0..gate.m() {
        best = best.max(forward_basis_capacity(gate, &basis(gate.m(), i), units)?);
    }
    Ok(best)
}

pub fn bounds_report(gate: &ControlledGate, units: Units) -> Result<BoundReport, CliError> {
    let forward = forward_basis_best(gate, units)?;
    Ok(BoundReport::new(gate, forward, units)?)
}

pub fn bounds(path: &Path, variant: VariantChoice, units: Units, format: ReportFormat) -> Result<(), CliError> {
    let gate = GateFile::load(path)?;
    let r = bounds_report(&gate, units)?;
    let paper = variant.includes(ForwardVariant::Paper);
    let corrected = variant.includes(ForwardVariant::Corrected);
    let text = match format {
        ReportFormat::Json => {
            let mut v = serde_json::to_value(&r).map_err(|e| CliError::Output(e.to_string()))?;
            if let Some(map) = v.as_object_mut() {
                if !paper {
                    map.remove("forward_upper_paper");
                }
                if !corrected {
                    map.remove("forward_upper_corrected");
                }
            }
            to_json(&v)?
        }
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "d: {}", sig12(r.d));
            let _ = writeln!(s, "d_max_pair: {}", sig12(r.d_max_pair));
            let _ = writeln!(s, "witness: {} {}", r.witness.0, r.witness.1);
            let _ = writeln!(s, "k: {}", r.k);
            let _ = writeln!(s, "backward_lower: {} {units}", sig12(r.backward_lower));
            let _ = writeln!(s, "backward_lower_strong: {} {units}", sig12(r.backward_lower_strong));
            if paper {
                let _ = writeln!(s, "forward_upper_paper: {} {units}", sig12(r.forward_upper_paper));
            }
            if corrected {
                let _ = writeln!(s, "forward_upper_corrected: {} {units}", sig12(r.forward_upper_corrected));
            }
            let _ = writeln!(s, "forward_basis: {} {units}", sig12(r.forward_input));
            let _ = writeln!(s, "chained_backward_lower: {} {units}", sig12(r.chained_backward_lower));
            s
        }
    };
    emit(&text, None)
}

fn options(args: &SearchArgs, units: Units) -> SearchOptions {
    SearchOptions { seed: args.seed, restarts: args.restarts, iters: args.iters, units }
}

pub fn scenario_report(name: &str, args: &SearchArgs, units: Units) -> Result<CapacityReport, CliError> {
    let (kind, arg) = name.split_once(':').unwrap_or((name, ""));
    let report = match (kind, arg.is_empty()) {
        ("s3", true) => run_s3_regular(units)?,
        ("s3perm", true) => run_s3_permutation(units)?,
        ("cnot", true) => run_cnot(units)?,
        ("shift", false) => run_shift(parse_size(name, arg)?, units)?,
        ("harrow-shor", false) => run_harrow_shor(parse_size(name, arg)?, &options(args, units))?,
        _ => {
            return Err(CliError::Input(format!(
                "unknown scenario '{name}' (expected s3, s3perm, cnot, shift:n or harrow-shor:n)"
            )))
        }
    };
    Ok(report)
}

pub fn demo(name: &str, args: &SearchArgs, units: Units, out: Option<&Path>) -> Result<(), CliError> {
    let report = scenario_report(name, args, units)?;
    emit(&to_json(&report)?, out)?;
    let failed: Vec<_> = report.failed_checks().collect();
    for c in &failed {
        eprintln!("check failed: {} (residual {:e} > tolerance {:e})", c.name, c.residual, c.tolerance);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed.len()))
    }
}

fn complex(z: C64) -> String {
    if z.im == 0.0 {
        return sig12(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", sig12(z.re), sig12(z.im.abs()))
}

fn vector(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|&z| complex(z)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn search(path: &Path, args: &SearchArgs, units: Units, format: ReportFormat) -> Result<(), CliError> {
    let gate = GateFile::load(path)?;
    let cert: HolevoCertificate = search_backward_holevo(&gate, &options(args, units))?;
    let text = match format {
        ReportFormat::Json => to_json(&cert)?,
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "value: {} {units} (certified)", sig12(cert.value));
            let _ = writeln!(s, "seed: {}", cert.seed);
            let _ = writeln!(s, "restart: {}", cert.restart);
            let _ = writeln!(s, "iterations: {}", cert.iterations);
            let _ = writeln!(s, "probe: {}", vector(&cert.probe));
            let _ = writeln!(s, "ensemble:");
            for (p, state) in cert.ensemble.probs.iter().zip(&cert.ensemble.states) {
                let _ = writeln!(s, "  {} {}", sig12(*p), vector(state));
            }
            s
        }
    };
    emit(&text, None)
}
