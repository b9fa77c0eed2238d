//! Acceptance criteria, one PASS/FAIL line each. Criterion 1 is a known
//! failure at this scale (see README); every other criterion must pass.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use quartic_core::arith::IntPoly;
use quartic_core::class_group::{class_group_ideals, DEFAULT_BOUND_CEILING};
use quartic_core::field::make_field_i64;
use quartic_core::forms::{class_group_structure, is_fundamental, Sieve};
use quartic_core::geodesic::check_correspondence;
use quartic_core::invariants::OrderInvariants;
use quartic_core::order::{maximal_order, Order};
use quartic_core::rep::{
    decompose_exterior, sigma_tilde_trace_both, verify_ak_identity, weyl_integral, KmType, Space, VirtualDecomposition,
};
use quartic_core::splitting::{FieldClass, PrimeSet};
use quartic_core::units::{fundamental_unit, nu_both, torsion_min_poly, QUARTIC_TORSION_ORDERS};
use quartic_census::csv_io::{emit_to_string, ingest_csv, recompute};
use quartic_census::quadratic::{gauss_siegel_census, sarnak_census, Convention};
use quartic_census::quartic::{
    box_polynomials, default_pi_checkpoints, pi_s_census, quartic_corpus, Corpus, CorpusConfig, PiKind,
};
use rayon::prelude::*;

/// Criteria that fail at desk scale for a documented reason.
const EXPECTED_FAILURES: [u32; 1] = [1];

/// Minimal polynomials of primitive roots of unity of degree 4.
const QUARTIC_CYCLOTOMIC: [&str; 4] = ["x^4+x^3+x^2+x+1", "x^4+1", "x^4-x^3+x^2-x+1", "x^4-x^2+1"];

const TORSION_ORDERS: [u32; 9] = [1, 2, 3, 4, 5, 6, 8, 10, 12];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn gauss_siegel() -> Outcome {
    let start = Instant::now();
    let wide = gauss_siegel_census(100_000, Convention::Wide, 1).unwrap();
    let elapsed = start.elapsed();
    let narrow = gauss_siegel_census(100_000, Convention::Narrow, 1).unwrap();
    let ratio = wide.at(1e5).unwrap().ratio;
    let narrow_ratio = narrow.at(1e5).unwrap().ratio;
    let trend: Vec<String> = wide.rows.iter().map(|r| format!("{:.0}:{:.4}", r.x, r.ratio)).collect();
    outcome(
        (0.95..=1.05).contains(&ratio) && elapsed < Duration::from_secs(600),
        format!(
            "Σ hR ratio at 1e5 = {ratio:.6} (wide h, R = log ε) in {}; narrow h⁺R⁺ ratio = {narrow_ratio:.6}; wide trend {}",
            secs(elapsed),
            trend.join(" ")
        ),
    )
}

fn sarnak() -> Outcome {
    let start = Instant::now();
    let table = sarnak_census(6.0, 1).unwrap();
    let elapsed = start.elapsed();
    let at6 = table.at(6.0).unwrap();
    let mut closer = true;
    let mut parts = Vec::new();
    for x in [5.0, 5.5, 6.0] {
        let r = table.at(x).unwrap();
        let alt = r.alt_ratio.unwrap();
        closer &= (r.ratio - 1.0).abs() < (alt - 1.0).abs();
        parts.push(format!("x={x}: L {:.4} vs e^2x/2x {alt:.4}", r.ratio));
    }
    outcome(
        (0.85..=1.15).contains(&at6.ratio) && closer && elapsed < Duration::from_secs(1800),
        format!("{}; {}", parts.join(", "), secs(elapsed)),
    )
}

fn corpus(threads: usize) -> (Corpus, Duration) {
    let cfg = CorpusConfig {
        coeff_bound: 8,
        s: PrimeSet::new(&[2, 3]).unwrap(),
        class_bound_ceiling: DEFAULT_BOUND_CEILING,
        threads,
    };
    let start = Instant::now();
    let c = quartic_corpus(&cfg, None).unwrap();
    (c, start.elapsed())
}

fn compact(p: &IntPoly) -> String {
    p.to_string().replace(' ', "")
}

fn structural(corpus: &Corpus) -> Outcome {
    let mut violations: Vec<String> = corpus.quarantine.iter().map(|q| format!("{}: quarantined ({})", q.field_key, q.reason)).collect();
    let mut checked = 0;
    let mut worst_nu = 0.0f64;
    let mut worst_norm = 0.0f64;
    for row in corpus.cc_rows() {
        checked += 1;
        let mut fail = |what: &str| violations.push(format!("{}: {what}", row.field_key));
        let Some(detail) = &row.detail else {
            fail("no unit data");
            continue;
        };
        // (a), (d) angle part, det and trace checks
        match check_correspondence(row) {
            Ok(rep) => worst_norm = worst_norm.max(rep.norm_rel_error),
            Err(e) => fail(&e.to_string()),
        }
        // (b)
        match nu_both(&detail.order, &detail.units) {
            Ok((product, closed)) => {
                worst_nu = worst_nu.max((product - closed).abs());
                if (product - closed).abs() > 1e-9 || row.nu.is_none_or(|nu| (nu - closed).abs() > 1e-9) {
                    fail(&format!("ν product {product} vs closed {closed}"));
                }
            }
            Err(e) => fail(&e.to_string()),
        }
        // (c)
        if detail.order.norm(&detail.units.fund_unit) != BigInt::from(1) {
            fail("N(ε) ≠ 1");
        }
        // (d)
        if !row.kappa.is_some_and(|k| [1, 2, 4].contains(&k)) {
            fail(&format!("κ = {:?}", row.kappa));
        }
        // (e)
        if !row.mu.is_some_and(|m| QUARTIC_TORSION_ORDERS.contains(&m)) {
            fail(&format!("μ = {:?}", row.mu));
        }
        if detail.torsion_poly.degree() == 4 && !QUARTIC_CYCLOTOMIC.contains(&compact(&detail.torsion_poly).as_str()) {
            fail(&format!("torsion polynomial {}", detail.torsion_poly));
        }
    }
    // (f) over all of C(S)
    for row in &corpus.rows {
        if let Some(detail) = &row.detail {
            if (row.class == Some(FieldClass::Cc)) != detail.weakly_neat {
                violations.push(format!("{}: class {:?} but weakly neat = {}", row.field_key, row.class, detail.weakly_neat));
            }
        }
    }
    let kappa2 = corpus.cc_rows().filter(|r| r.kappa == Some(2)).count();
    outcome(
        violations.is_empty() && checked > 0,
        format!(
            "{checked} C^c orders ({kappa2} with κ = 2), {} C(S) fields from {} polynomials; max |N(γ)e^-4R - 1| = {worst_norm:.1e}, max ν discrepancy = {worst_nu:.1e}; violations: {}",
            corpus.rows.len(),
            corpus.polynomials_scanned,
            if violations.is_empty() { "none".to_string() } else { violations.join("; ") }
        ),
    )
}

fn dec(pairs: &[(KmType, i64)]) -> VirtualDecomposition {
    VirtualDecomposition::from_pairs(pairs)
}

fn representations() -> Outcome {
    use KmType::*;
    let start = Instant::now();
    let pair = [(Pair(2, 0), 1), (Pair(0, 2), 1)];
    let pm = [
        dec(&[(Triv, 1)]),
        dec(&pair),
        dec(&[(Delta, 2), (Pair(2, 2), 1), (Pair(2, -2), 1)]),
        dec(&pair),
        dec(&[(Triv, 1)]),
    ];
    let middle = [(Triv, 1), (Delta, 2), (Pair(2, 0), 2), (Pair(0, 2), 2), (Pair(2, 2), 1), (Pair(2, -2), 1)];
    let m = [
        dec(&[(Triv, 1)]),
        dec(&[(Delta, 2), (Pair(2, 0), 1), (Pair(0, 2), 1)]),
        dec(&middle),
        dec(&[(Triv, 4), (Pair(2, 0), 2), (Pair(0, 2), 2), (Pair(2, 2), 2), (Pair(2, -2), 2)]),
        dec(&middle),
        dec(&[(Delta, 2), (Pair(2, 0), 1), (Pair(0, 2), 1)]),
        dec(&[(Triv, 1)]),
    ];
    let mut bad = Vec::new();
    for (space, table) in [(Space::PM, &pm[..]), (Space::M, &m[..])] {
        for (n, want) in table.iter().enumerate() {
            let got = decompose_exterior(space, n).unwrap();
            if &got != want {
                bad.push(format!("Λ^{n} {space:?} = {got}, expected {want}"));
            }
        }
    }
    let ak = verify_ak_identity().unwrap();
    let weyl = weyl_integral(100).unwrap();
    let mut worst = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let (a, b) = sigma_tilde_trace_both(PI * i as f64 / 99.0, PI * j as f64 / 99.0).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && ak.holds() && (weyl - 2.0).abs() < 1e-12 && worst < 1e-12 && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} exterior-power lines, {} mismatches{}; a_k residuals {:?}; Weyl integral {weyl:.15}; σ̃ two-method max gap {worst:.1e} on 100×100; {}",
            pm.len() + m.len(),
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(" ({})", bad.join("; ")) },
            ak.residuals,
            secs(elapsed)
        ),
    )
}

fn quadratic_order(d: i64) -> Order {
    let coeffs = if d.rem_euclid(4) == 1 { [(1 - d) / 4, -1, 1] } else { [-d / 4, 0, 1] };
    maximal_order(Arc::new(make_field_i64(&coeffs).unwrap())).unwrap()
}

/// Distinct totally complex quartic fields of `|disc| <= bound` among
/// polynomials with coefficients at most 5, one entry per isomorphism class.
fn smallest_fields(bound: i64) -> Vec<BigInt> {
    let polys = box_polynomials(5);
    let mut found: Vec<(BigInt, IntPoly)> = polys
        .par_iter()
        .filter_map(|p| {
            if !p.is_squarefree() || p.count_real_roots().ok()? != 0 {
                return None;
            }
            let field = Arc::new(quartic_core::field::make_field(p.coeffs()).ok()?);
            let order = maximal_order(field).ok()?;
            (order.disc() <= &BigInt::from(bound)).then(|| (order.disc().clone(), p.clone()))
        })
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.coeffs().cmp(b.1.coeffs())));
    let mut reps: Vec<(BigInt, Arc<quartic_core::field::NumberField>)> = Vec::new();
    for (disc, poly) in found {
        let mut seen = false;
        for (d, f) in &reps {
            if *d == disc && quartic_core::units::isomorphic(f, &poly).unwrap() {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push((disc, Arc::new(quartic_core::field::make_field(poly.coeffs()).unwrap())));
        }
    }
    reps.into_iter().map(|(d, _)| d).collect()
}

fn class_numbers() -> Outcome {
    let start = Instant::now();
    let sieve = Sieve::new(2600);
    let discs: Vec<i64> = (5..=10_000).filter(|&d| is_fundamental(d)).collect();
    let mismatches: Vec<String> = discs
        .par_iter()
        .filter_map(|&d| {
            let forms = class_group_structure(d, &sieve).unwrap();
            let ideals = class_group_ideals(&quadratic_order(d), DEFAULT_BOUND_CEILING).unwrap().invariants;
            (forms != ideals).then(|| format!("D={d}: forms {forms:?}, ideals {ideals:?}"))
        })
        .collect();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/quartic_reference.csv");
    let reference = ingest_csv(std::fs::File::open(path).unwrap()).unwrap();
    let mut ref_bad = Vec::new();
    for row in &reference {
        let computed: OrderInvariants = recompute(row, DEFAULT_BOUND_CEILING).unwrap();
        if computed.h != row.h || computed.disc != row.disc {
            ref_bad.push(format!("{}: computed h={:?} disc={}, table h={:?}", row.field_key, computed.h, computed.disc, row.h));
        }
    }
    let table_discs: Vec<BigInt> = reference.iter().map(|r| r.disc.clone()).collect();
    let enumerated = smallest_fields(576);
    let complete = enumerated == table_discs;
    outcome(
        mismatches.is_empty() && ref_bad.is_empty() && complete,
        format!(
            "{} fundamental D ≤ 1e4: {} forms/ideals mismatches; {} reference quartic rows, {} h mismatches; table covers the {} fields of |disc| ≤ 576: {complete}; {}",
            discs.len(),
            mismatches.len(),
            reference.len(),
            ref_bad.len(),
            enumerated.len(),
            secs(start.elapsed())
        ),
    )
}

fn torsion_units(order: &Order, gen: &[BigInt], mu: u32, seen: &mut BTreeSet<String>, bad: &mut Vec<String>) {
    let one = order.one();
    let mut zeta = one.clone();
    for _ in 0..mu {
        let mut power = zeta.clone();
        let mut ord = 1;
        while power != one && ord <= 12 {
            power = order.mul(&power, &zeta);
            ord += 1;
        }
        if !TORSION_ORDERS.contains(&ord) {
            bad.push(format!("{}: torsion unit of order {ord}", order.field().key()));
        }
        let poly = torsion_min_poly(order, &zeta);
        if poly.degree() == 4 {
            let s = compact(&poly);
            if !QUARTIC_CYCLOTOMIC.contains(&s.as_str()) {
                bad.push(format!("{}: quartic torsion polynomial {s}", order.field().key()));
            }
            seen.insert(s);
        }
        zeta = order.mul(&zeta, gen);
    }
}

fn torsion(corpus: &Corpus) -> Outcome {
    let mut seen = BTreeSet::new();
    let mut bad = Vec::new();
    let mut units = 0;
    for row in &corpus.rows {
        let Some(detail) = &row.detail else {
            bad.push(format!("{}: no unit data", row.field_key));
            continue;
        };
        torsion_units(&detail.order, &detail.units.torsion_gen, detail.units.mu, &mut seen, &mut bad);
        units += detail.units.mu;
    }
    let corpus_seen = seen.clone();
    // ℚ(ζ8) has 2 and 3 decomposed, so it is checked separately
    let zeta8 = maximal_order(Arc::new(make_field_i64(&[1, 0, 0, 0, 1]).unwrap())).unwrap();
    let u = fundamental_unit(&zeta8).unwrap();
    torsion_units(&zeta8, &u.torsion_gen, u.mu, &mut seen, &mut bad);
    let all_listed = QUARTIC_CYCLOTOMIC.iter().all(|p| seen.contains(*p));
    outcome(
        bad.is_empty() && all_listed,
        format!(
            "{units} torsion units over {} fields, orders ⊂ {TORSION_ORDERS:?}; quartic minimal polynomials in corpus {:?}, with ℚ(ζ8) {:?}; violations: {}",
            corpus.rows.len(),
            corpus_seen,
            seen,
            if bad.is_empty() { "none".to_string() } else { bad.join("; ") }
        ),
    )
}

fn quartic_outputs(corpus: &Corpus) -> String {
    let xs = default_pi_checkpoints(corpus);
    let plain = pi_s_census(corpus, &corpus.s, &xs, PiKind::Plain).unwrap();
    let tilde = pi_s_census(corpus, &corpus.s, &xs, PiKind::Tilde).unwrap();
    format!("{}{}{}", emit_to_string(&corpus.rows).unwrap(), plain.to_csv_string().unwrap(), tilde.to_csv_string().unwrap())
}

fn determinism(single: &Corpus) -> Outcome {
    let (many, elapsed) = corpus(8);
    let quartic_same = quartic_outputs(single) == quartic_outputs(&many);
    let gs = |t| gauss_siegel_census(100_000, Convention::Wide, t).unwrap().to_csv_string().unwrap();
    let sarnak = |t| sarnak_census(6.0, t).unwrap().to_csv_string().unwrap();
    let gs_same = gs(1) == gs(8);
    let sarnak_same = sarnak(1) == sarnak(8);
    outcome(
        quartic_same && gs_same && sarnak_same,
        format!(
            "threads 1 vs 8 byte-identical: quartic invariants + π_S + π̃_S {quartic_same}, Gauss–Siegel {gs_same}, Sarnak {sarnak_same}; 8-thread corpus {}",
            secs(elapsed)
        ),
    )
}

fn main() -> ExitCode {
    let (corpus1, elapsed) = corpus(1);
    println!("quartic corpus: coeff_bound 8, S = {{2,3}}, threads 1, built in {}", secs(elapsed));
    let results: Vec<(u32, Outcome)> = vec![
        (1, gauss_siegel()),
        (2, sarnak()),
        (3, structural(&corpus1)),
        (4, representations()),
        (5, class_numbers()),
        (6, torsion(&corpus1)),
        (7, determinism(&corpus1)),
    ];
    let mut unexpected = 0;
    for (id, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && EXPECTED_FAILURES.contains(id) { " [known failure]" } else { "" };
        println!("{tag} criterion {id}{note}: {}", o.detail);
        if !o.pass && !EXPECTED_FAILURES.contains(id) {
            unexpected += 1;
        }
    }
    for (id, o) in &results {
        if o.pass && EXPECTED_FAILURES.contains(id) {
            println!("note: criterion {id} now passes; drop it from the known failures");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
