use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Units;

/// Largest `n` handled by the partition and hook-length routines.
pub const SN_MAX: usize = 64;

const PRIMES: [usize; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

fn check_n(n: usize) -> Result<()> {
    if n > SN_MAX {
        return Err(Error::validation(format!("n must be at most {SN_MAX}, got {n}")));
    }
    Ok(())
}

/// Calls `f` on every partition of `n` (parts nonincreasing) in ascending
/// lexicographic order, `(1, …, 1)` first and `(n)` last.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    let mut parts = Vec::with_capacity(n);
    partitions_rec(n, n, &mut parts, &mut f);
}

fn partitions_rec(remaining: usize, max_part: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if remaining == 0 {
        f(parts);
        return;
    }
    for first in 1..=remaining.min(max_part) {
        parts.push(first);
        partitions_rec(remaining - first, first, parts, f);
        parts.pop();
    }
}

pub fn partitions(n: usize) -> Result<Vec<Vec<usize>>> {
    check_n(n)?;
    let mut out = Vec::new();
    for_each_partition(n, |p| out.push(p.to_vec()));
    Ok(out)
}

fn check_partition(lambda: &[usize]) -> Result<usize> {
    if lambda.windows(2).any(|w| w[0] < w[1]) || lambda.contains(&0) {
        return Err(Error::validation(format!("{lambda:?} is not a partition (parts must be positive and nonincreasing)")));
    }
    let n = lambda.iter().sum();
    check_n(n)?;
    Ok(n)
}

/// Sparse prime factorizations of `1..=SN_MAX`: `(prime index, exponent)`.
struct FactorTable {
    factors: Vec<Vec<(usize, i32)>>,
}

impl FactorTable {
    fn new() -> Self {
        let factors = (0..=SN_MAX)
            .map(|mut h| {
                let mut f = Vec::new();
                if h < 2 {
                    return f;
                }
                for (i, &p) in PRIMES.iter().enumerate() {
                    let mut e = 0;
                    while h % p == 0 {
                        h /= p;
                        e += 1;
                    }
                    if e > 0 {
                        f.push((i, e));
                    }
                }
                f
            })
            .collect();
        FactorTable { factors }
    }

    /// Prime exponents of `n!`.
    fn factorial_exponents(&self, n: usize) -> [i32; PRIMES.len()] {
        let mut exps = [0i32; PRIMES.len()];
        for h in 2..=n {
            for &(i, e) in &self.factors[h] {
                exps[i] += e;
            }
        }
        exps
    }

    /// `d_λ = n!/Π hooks` as a product of prime powers, exactly. `base`
    /// holds the exponents of `n!`; `conj` is scratch space.
    fn hook_degree(&self, lambda: &[usize], base: &[i32; PRIMES.len()], conj: &mut Vec<usize>) -> Result<BigUint> {
        let mut exps = *base;
        // conjugate partition: column lengths
        conj.clear();
        conj.resize(lambda.first().copied().unwrap_or(0), 0);
        for &row in lambda {
            for c in conj.iter_mut().take(row) {
                *c += 1;
            }
        }
        for (i, &row) in lambda.iter().enumerate() {
            for (j, &col) in conj.iter().enumerate().take(row) {
                let hook = (row - j) + (col - i) - 1;
                for &(p, e) in &self.factors[hook] {
                    exps[p] -= e;
                }
            }
        }
        if let Some(p) = exps.iter().position(|&e| e < 0) {
            let n: usize = lambda.iter().sum();
            return Err(Error::Invariant(format!(
                "hook product of {lambda:?} does not divide {n}! (prime {})",
                PRIMES[p]
            )));
        }
        Ok(prime_power_product(&exps))
    }
}

fn prime_power_product(exps: &[i32; PRIMES.len()]) -> BigUint {
    let mut acc: Option<BigUint> = None;
    let mut chunk: u128 = 1;
    for (&p, &e) in PRIMES.iter().zip(exps) {
        for _ in 0..e {
            match chunk.checked_mul(p as u128) {
                Some(c) => chunk = c,
                None => {
                    acc = Some(match acc {
                        Some(a) => a * chunk,
                        None => BigUint::from(chunk),
                    });
                    chunk = p as u128;
                }
            }
        }
    }
    match acc {
        Some(a) => a * chunk,
        None => BigUint::from(chunk),
    }
}

/// Degree of the irreducible representation of `S_n` labelled by `λ`,
/// from the hook-length formula.
pub fn hook_degree(lambda: &[usize]) -> Result<BigUint> {
    let n = check_partition(lambda)?;
    let table = FactorTable::new();
    table.hook_degree(lambda, &table.factorial_exponents(n), &mut Vec::new())
}

/// `Σ_λ d_λ`, the largest `d_λ` and the number of partitions of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSummary {
    pub n: usize,
    pub sum: BigUint,
    pub max: BigUint,
    pub count: u64,
}

/// Enumerates all partitions of `n` once, split by first part across threads.
pub fn degree_summary(n: usize) -> Result<DegreeSummary> {
    check_n(n)?;
    let table = FactorTable::new();
    let base = table.factorial_exponents(n);
    if n == 0 {
        return Ok(DegreeSummary { n, sum: BigUint::from(1u32), max: BigUint::from(1u32), count: 1 });
    }
    let per_first: Vec<Result<(BigUint, BigUint, u64)>> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut sum = BigUint::from(0u32);
            let mut max = BigUint::from(0u32);
            let mut count = 0u64;
            let mut err = None;
            let mut parts = vec![first];
            let mut conj = Vec::with_capacity(n);
            partitions_rec(n - first, first, &mut parts, &mut |lambda: &[usize]| {
                if err.is_some() {
                    return;
                }
                match table.hook_degree(lambda, &base, &mut conj) {
                    Ok(d) => {
                        sum += &d;
                        if d > max {
                            max = d;
                        }
                        count += 1;
                    }
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok((sum, max, count)),
            }
        })
        .collect();
    let mut summary = DegreeSummary { n, sum: BigUint::from(0u32), max: BigUint::from(0u32), count: 0 };
    for r in per_first {
        let (s, m, c) = r?;
        summary.sum += s;
        summary.max = summary.max.max(m);
        summary.count += c;
    }
    Ok(summary)
}

/// Number of involutions in `S_n`: `I(k) = I(k−1) + (k−1) I(k−2)`.
pub fn involution_count(n: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::from(1u32), BigUint::from(1u32));
    for k in 2..=n {
        let next = &cur + &prev * (k as u64 - 1);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// Logarithm of a positive big integer from its leading 18 decimal digits
/// and its digit count.
pub fn big_log(x: &BigUint, units: Units) -> Result<f64> {
    if *x == BigUint::from(0u32) {
        return Err(Error::validation("logarithm of zero"));
    }
    let digits = x.to_str_radix(10);
    let lead_len = digits.len().min(18);
    let lead: f64 = digits[..lead_len].parse().expect("decimal digits parse");
    let ln = lead.ln() + (digits.len() - lead_len) as f64 * std::f64::consts::LN_10;
    Ok(units.from_nats(ln))
}

/// One row of the `S_n` ratio table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: usize,
    /// `log n!`
    pub log_forward: f64,
    /// `log Σ_λ d_λ`
    pub log_backward: f64,
    pub ratio: f64,
    /// `ln N − (ln √(2πn) + n ln n − n)`, in nats whatever the units.
    pub stirling_gap: f64,
}

/// Capacity pair `(log n!, log N)` of the regular representation of `S_n`.
/// `N` is checked against the involution count.
pub fn sn_capacity_pair(n: usize, units: Units) -> Result<RatioRow> {
    if !(2..=SN_MAX).contains(&n) {
        return Err(Error::validation(format!("n must satisfy 2 <= n <= {SN_MAX}, got {n}")));
    }
    let summary = degree_summary(n)?;
    row_from_summary(&summary, units)
}

fn row_from_summary(summary: &DegreeSummary, units: Units) -> Result<RatioRow> {
    let n = summary.n;
    let oracle = involution_count(n);
    if summary.sum != oracle {
        return Err(Error::Invariant(format!(
            "sum of degrees of S_{n} is {} but the involution count is {oracle}",
            summary.sum
        )));
    }
    let log_forward = big_log(&factorial(n), units)?;
    let log_backward = big_log(&summary.sum, units)?;
    let nf = n as f64;
    let stirling = 0.5 * (std::f64::consts::TAU * nf).ln() + nf * nf.ln() - nf;
    Ok(RatioRow {
        n,
        log_forward,
        log_backward,
        ratio: log_backward / log_forward,
        stirling_gap: big_log(&summary.sum, Units::Nats)? - stirling,
    })
}

/// Rows for `n = 2..=n_max`, checked against `1/2 ≤ ratio ≤ 1`.
pub fn ratio_series(n_max: usize, units: Units) -> Result<Vec<RatioRow>> {
    if !(2..=SN_MAX).contains(&n_max) {
        return Err(Error::validation(format!("max n must satisfy 2 <= n <= {SN_MAX}, got {n_max}")));
    }
    let rows = (2..=n_max).map(|n| sn_capacity_pair(n, units)).collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| !(0.5..=1.0).contains(&r.ratio)) {
        return Err(Error::Invariant(format!("ratio {} for n = {} is outside [1/2, 1]", r.ratio, r.n)));
    }
    Ok(rows)
}

/// `max_λ d_λ ≤ (2πn)^{1/4} (n/e)^{n/2}`, compared in log space.
pub fn max_degree_bound_check(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::validation("n must be at least 1"));
    }
    let summary = degree_summary(n)?;
    let nf = n as f64;
    let bound = 0.25 * (std::f64::consts::TAU * nf).ln() + 0.5 * nf * (nf.ln() - 1.0);
    Ok(big_log(&summary.max, Units::Nats)? <= bound)
}

/// `p(n) ≤ exp(π √(2n/3))`.
pub fn partition_bound_holds(n: usize, count: u64) -> bool {
    (count as f64).ln() <= std::f64::consts::PI * (2.0 * n as f64 / 3.0).sqrt()
}
