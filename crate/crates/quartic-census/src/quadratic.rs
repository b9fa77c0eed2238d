//! Orders of real quadratic fields: enumeration by discriminant, the
//! Gauss–Siegel sum of `hR` and the count of `h` by regulator.

use std::collections::BTreeMap;

use quartic_core::forms::{is_discriminant, quadratic_class_data, Sieve};
use rayon::prelude::*;

use crate::error::{CensusError, Result};
use crate::special::{exp_over_x, gauss_siegel_target, log_integral};
use crate::table::{geometric_checkpoints, linear_checkpoints, CensusRow, CensusTable};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRow {
    pub d: i64,
    /// Wide class number `|I(O_D)/F^×|`.
    pub h: u64,
    pub narrow_h: u64,
    /// `log ε` for the fundamental unit `ε > 1`.
    pub regulator: f64,
    pub unit_norm: i32,
}

impl QuadraticRow {
    /// `h⁺ R⁺`, with `R⁺` the regulator of totally positive units.
    pub fn narrow_product(&self) -> f64 {
        let reg_plus = if self.unit_norm == -1 { 2.0 * self.regulator } else { self.regulator };
        self.narrow_h as f64 * reg_plus
    }
}

/// Which class number and regulator enter `Σ hR`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Wide,
    Narrow,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convention::Wide => "wide",
            Convention::Narrow => "narrow",
        })
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

fn class_rows(discs: &[i64], threads: usize) -> Result<Vec<QuadraticRow>> {
    let max = discs.iter().copied().max().unwrap_or(5);
    let sieve = Sieve::new((max / 4 + 2) as usize);
    let rows: std::result::Result<Vec<_>, _> = pool(threads)?.install(|| {
        discs
            .par_iter()
            .map(|&d| {
                let data = quadratic_class_data(d, &sieve)?;
                Ok(QuadraticRow {
                    d,
                    h: data.h,
                    narrow_h: data.narrow_h,
                    regulator: data.regulator.expect("positive discriminant has a regulator"),
                    unit_norm: data.unit_norm.expect("positive discriminant has a unit"),
                })
            })
            .collect()
    });
    rows.map_err(CensusError::Core)
}

/// Every non-square `D ≡ 0, 1 mod 4` with `5 <= D <= limit_d`, ascending.
pub fn enumerate_quadratic(limit_d: i64, threads: usize) -> Result<Vec<QuadraticRow>> {
    if limit_d < 5 {
        return Err(CensusError::InvalidArgument(format!("limit_D = {limit_d} < 5")));
    }
    let discs: Vec<i64> = (5..=limit_d).filter(|&d| is_discriminant(d)).collect();
    class_rows(&discs, threads)
}

/// Partial sums of `h(O_D) R(O_D)` over `D <= x` at geometric checkpoints,
/// against `π² x^{3/2} / (18 ζ(3))`.
pub fn gauss_siegel_census(limit_x: i64, convention: Convention, threads: usize) -> Result<CensusTable> {
    let rows = enumerate_quadratic(limit_x, threads)?;
    let checkpoints = geometric_checkpoints(100.0_f64.min(limit_x as f64), limit_x as f64, 10f64.sqrt());
    let mut table = CensusTable::new("quadratic-gs").meta("limit_x", limit_x).meta("convention", convention);
    let mut sum = 0.0;
    let mut it = rows.iter().peekable();
    for x in checkpoints {
        while let Some(r) = it.next_if(|r| r.d as f64 <= x) {
            sum += match convention {
                Convention::Wide => r.h as f64 * r.regulator,
                Convention::Narrow => r.narrow_product(),
            };
        }
        table.rows.push(CensusRow::new(x, sum, gauss_siegel_target(x)));
    }
    Ok(table)
}

/// Discriminants whose order has a unit `(t + u√D)/2` of norm `±1` with
/// `log ε <= limit_r`, with the smallest such logarithm.
pub fn discriminants_by_regulator(limit_r: f64) -> BTreeMap<i64, f64> {
    let mut out: BTreeMap<i64, f64> = BTreeMap::new();
    // ε ≤ e^x forces t = ε ± 1/ε ≤ e^x + 1
    let t_max = (limit_r.exp() + 1.0).floor() as i64;
    let sieve = Sieve::new((t_max * t_max + 8) as usize);
    for t in 1..=t_max {
        for shift in [4i64, -4] {
            let m = t * t + shift;
            if m <= 0 {
                continue;
            }
            let reg = ((t as f64 + (m as f64).sqrt()) / 2.0).ln();
            if reg > limit_r {
                continue;
            }
            for u in square_divisor_roots(m as u64, &sieve) {
                let d = m / (u * u) as i64;
                if is_discriminant(d) {
                    let e = out.entry(d).or_insert(reg);
                    if reg < *e {
                        *e = reg;
                    }
                }
            }
        }
    }
    out
}

/// All `u >= 1` with `u² | n`.
fn square_divisor_roots(n: u64, sieve: &Sieve) -> Vec<u64> {
    let mut roots = vec![1u64];
    for (p, e) in sieve.factor(n) {
        let current = roots.clone();
        let mut pk = 1;
        for _ in 0..e / 2 {
            pk *= p;
            roots.extend(current.iter().map(|r| r * pk));
        }
    }
    roots.sort_unstable();
    roots
}

/// Partial sums of `h(O_D)` over orders with `R(O_D) <= x`, against `L(2x)`
/// and `e^{2x}/(2x)`.
pub fn sarnak_census(limit_r: f64, threads: usize) -> Result<CensusTable> {
    let by_reg = discriminants_by_regulator(limit_r);
    let discs: Vec<i64> = by_reg.keys().copied().collect();
    let mut rows = class_rows(&discs, threads)?;
    for r in &rows {
        let found = by_reg[&r.d];
        if (found - r.regulator).abs() > 1e-9 * found.max(1.0) {
            return Err(CensusError::Core(quartic_core::error::Error::NumericInconsistency(format!(
                "D = {}: regulator {} from Pell search vs {} from continued fractions",
                r.d, found, r.regulator
            ))));
        }
    }
    rows.sort_by(|a, b| a.regulator.total_cmp(&b.regulator).then(a.d.cmp(&b.d)));
    let mut table = CensusTable::new("quadratic-sarnak").meta("limit_r", limit_r).meta("orders", rows.len());
    let smallest = rows.first().map(|r| r.regulator);
    if smallest.is_none_or(|s| s > limit_r) {
        return Ok(table);
    }
    let checkpoints = if limit_r >= 1.0 { linear_checkpoints(1.0, limit_r, 0.5) } else { vec![limit_r] };
    let mut sum = 0.0;
    let mut it = rows.iter().peekable();
    for x in checkpoints {
        while let Some(r) = it.next_if(|r| r.regulator <= x) {
            sum += r.h as f64;
        }
        table.rows.push(CensusRow::new(x, sum, log_integral(2.0 * x)).with_alt(exp_over_x(2.0 * x)));
    }
    Ok(table)
}
