//! The quartic corpus: enumeration of monic quartics in a coefficient box,
//! isomorphism dedup, invariants of the maximal orders, and the `π_S`
//! counting functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use quartic_core::arith::primes::primes_up_to;
use quartic_core::arith::IntPoly;
use quartic_core::error::Error as CoreError;
use quartic_core::field::{coefficient_height, make_field, NumberField};
use quartic_core::invariants::{compute_invariants, OrderInvariants};
use quartic_core::order::maximal_order;
use quartic_core::splitting::{classify_order, decomposed_mod_p, splitting_type, FieldClass, PrimeSet};
use quartic_core::units::isomorphic;
use rayon::prelude::*;

use crate::cache::Cache;
use crate::error::{CensusError, Result};
use crate::table::{linear_checkpoints, CensusRow, CensusTable};

/// Primes whose splitting types key the isomorphism prefilter.
const PREFILTER_PRIME_BOUND: u64 = 50;

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub coeff_bound: i64,
    pub s: PrimeSet,
    pub class_bound_ceiling: f64,
    pub threads: usize,
}

/// A field that could not be processed, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct Quarantined {
    pub field_key: String,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    /// One row per isomorphism class of fields in `C(S)`, maximal orders only.
    pub rows: Vec<OrderInvariants>,
    pub quarantine: Vec<Quarantined>,
    pub polynomials_scanned: usize,
    pub coeff_bound: i64,
    pub s: PrimeSet,
}

impl Corpus {
    pub fn cc_rows(&self) -> impl Iterator<Item = &OrderInvariants> {
        self.rows.iter().filter(|r| r.class == Some(FieldClass::Cc))
    }

    /// Largest `x` such that every C^c field with `R <= x` has a defining
    /// polynomial in the box: its fundamental unit generates the field and
    /// the unit's characteristic polynomial has coefficients bounded by the
    /// elementary symmetric functions of `e^{±R/2}`.
    pub fn certified_regulator(&self) -> f64 {
        certified_regulator(self.coeff_bound)
    }
}

/// See [`Corpus::certified_regulator`].
pub fn certified_regulator(coeff_bound: i64) -> f64 {
    let fits = |x: f64| {
        let r = (x / 2.0).exp();
        let e1 = 2.0 * (r + 1.0 / r);
        let e2 = r * r + 4.0 + 1.0 / (r * r);
        e1.max(e2) <= coeff_bound as f64
    };
    if !fits(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 50.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Monic quartics with `|cᵢ| <= bound`, `c₀ != 0`, one of each pair
/// `f(x), f(-x)`.
pub fn box_polynomials(bound: i64) -> Vec<IntPoly> {
    let mut out = Vec::new();
    for c0 in -bound..=bound {
        if c0 == 0 {
            continue;
        }
        for c1 in -bound..=bound {
            for c2 in -bound..=bound {
                for c3 in 0..=bound {
                    if c3 == 0 && c1 < 0 {
                        continue;
                    }
                    out.push(IntPoly::from_i64(&[c0, c1, c2, c3, 1]));
                }
            }
        }
    }
    out
}

/// Splitting types at the primes below [`PREFILTER_PRIME_BOUND`].
type Fingerprint = Vec<Vec<(u32, u32)>>;

/// Screened field: in `C(S)` with its maximal-order discriminant and the
/// splitting fingerprint used to bucket isomorphism candidates.
struct Candidate {
    poly: IntPoly,
    field: Arc<NumberField>,
    disc: BigInt,
    fingerprint: Fingerprint,
}

enum Screen {
    Rejected,
    Kept(Box<Candidate>),
    Failed(Quarantined),
}

fn screen(poly: &IntPoly, s: &PrimeSet) -> Screen {
    let attempt = || -> std::result::Result<Option<Candidate>, CoreError> {
        if !poly.is_squarefree() || poly.count_real_roots()? != 0 {
            return Ok(None);
        }
        for p in s.primes() {
            if decomposed_mod_p(poly, p)? {
                return Ok(None);
            }
        }
        let field = match make_field(poly.coeffs()) {
            Ok(f) => Arc::new(f),
            Err(CoreError::NotAField(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let order = maximal_order(field.clone())?;
        if classify_order(&order, s)? == FieldClass::NotInC {
            return Ok(None);
        }
        let fingerprint = primes_up_to(PREFILTER_PRIME_BOUND)
            .into_iter()
            .map(|p| splitting_type(&order, p).map(|t| t.pairs))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Some(Candidate { poly: poly.clone(), field, disc: order.disc().clone(), fingerprint }))
    };
    match attempt() {
        Ok(Some(c)) => Screen::Kept(Box::new(c)),
        Ok(None) => Screen::Rejected,
        Err(e) => Screen::Failed(Quarantined { field_key: poly.key(), reason: e.to_string() }),
    }
}

/// Representatives of the isomorphism classes among `cands`, preferring
/// small height and then the smaller key.
fn dedupe(mut cands: Vec<Candidate>) -> Result<Vec<Candidate>> {
    cands.sort_by(|a, b| {
        (a.disc.clone(), coefficient_height(&a.poly), a.poly.coeffs().to_vec())
            .cmp(&(b.disc.clone(), coefficient_height(&b.poly), b.poly.coeffs().to_vec()))
    });
    let mut buckets: BTreeMap<(BigInt, Fingerprint), Vec<Candidate>> = BTreeMap::new();
    for c in cands {
        let bucket = buckets.entry((c.disc.clone(), c.fingerprint.clone())).or_default();
        let mut seen = false;
        for rep in bucket.iter() {
            if isomorphic(&rep.field, &c.poly)? {
                seen = true;
                break;
            }
        }
        if !seen {
            bucket.push(c);
        }
    }
    Ok(buckets.into_values().flatten().collect())
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

/// Builds the corpus from the coefficient box.
pub fn quartic_corpus(cfg: &CorpusConfig, cache: Option<&mut Cache>) -> Result<Corpus> {
    if cfg.coeff_bound < 1 {
        return Err(CensusError::InvalidArgument(format!("coeff_bound = {} < 1", cfg.coeff_bound)));
    }
    corpus_from_polynomials(&box_polynomials(cfg.coeff_bound), cfg, cache)
}

/// Builds a corpus from explicit monic quartics.
pub fn corpus_from_polynomials(polys: &[IntPoly], cfg: &CorpusConfig, mut cache: Option<&mut Cache>) -> Result<Corpus> {
    if let Some(p) = polys.iter().find(|p| p.degree() != 4 || !p.is_monic()) {
        return Err(CensusError::InvalidArgument(format!("{p} is not a monic quartic")));
    }
    let pool = pool(cfg.threads)?;
    let screened: Vec<Screen> = pool.install(|| polys.par_iter().map(|p| screen(p, &cfg.s)).collect());
    let mut quarantine = Vec::new();
    let mut cands = Vec::new();
    for s in screened {
        match s {
            Screen::Kept(c) => cands.push(*c),
            Screen::Failed(q) => quarantine.push(q),
            Screen::Rejected => {}
        }
    }
    let reps = dedupe(cands)?;
    let mut todo = Vec::new();
    let mut rows = Vec::new();
    for rep in &reps {
        match cache.as_deref().and_then(|c| c.get(&rep.poly.key())) {
            Some(row) if row.disc != rep.disc => {
                return Err(CensusError::DataConflict {
                    field_key: row.field_key,
                    column: "disc".into(),
                    detail: format!("cached {}, recomputed {}", row.disc, rep.disc),
                })
            }
            Some(row) => rows.push(row),
            None => todo.push(rep),
        }
    }
    let computed: Vec<std::result::Result<OrderInvariants, Quarantined>> = pool.install(|| {
        todo.par_iter()
            .map(|rep| {
                compute_invariants(rep.field.clone(), &cfg.s, cfg.class_bound_ceiling)
                    .map_err(|e| Quarantined { field_key: rep.poly.key(), reason: e.to_string() })
            })
            .collect()
    });
    for c in computed {
        match c {
            Ok(row) => {
                if let Some(cache) = cache.as_deref_mut() {
                    cache.append(&row)?;
                }
                rows.push(row);
            }
            Err(q) => quarantine.push(q),
        }
    }
    rows.sort_by(|a, b| (&a.disc, &a.field_key).cmp(&(&b.disc, &b.field_key)));
    quarantine.sort_by(|a, b| a.field_key.cmp(&b.field_key));
    Ok(Corpus { rows, quarantine, polynomials_scanned: polys.len(), coeff_bound: cfg.coeff_bound, s: cfg.s.clone() })
}

/// Which weighted count a `π_S` table sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiKind {
    /// `Σ λ_S h` against `e^{4x}/(8x)`.
    Plain,
    /// `Σ ν λ_S h` against `e^{4x}/(2x)`.
    Tilde,
}

/// `π_S(x)` or `π̃_S(x)` over the C^c rows at the given checkpoints.
pub fn pi_s_census(corpus: &Corpus, s: &PrimeSet, checkpoints: &[f64], kind: PiKind) -> Result<CensusTable> {
    if *s != corpus.s {
        return Err(CensusError::InvalidArgument(format!("corpus built for S = {}, asked for S = {s}", corpus.s)));
    }
    let name = match kind {
        PiKind::Plain => "pi_S",
        PiKind::Tilde => "pi_tilde_S",
    };
    let cert = corpus.certified_regulator();
    let mut table = CensusTable::new(name)
        .meta("S", s)
        .meta("coeff_bound", corpus.coeff_bound)
        .meta("orders", "maximal")
        .meta("certified_regulator", crate::csv_io::fmt_real(cert));
    let mut cc: Vec<&OrderInvariants> = corpus.cc_rows().filter(|r| r.regulator.is_some()).collect();
    cc.sort_by(|a, b| a.regulator.unwrap().total_cmp(&b.regulator.unwrap()).then(a.field_key.cmp(&b.field_key)));
    for &x in checkpoints {
        let mut sum = 0.0;
        let mut inconclusive = 0;
        for r in cc.iter().take_while(|r| r.regulator.unwrap() <= x) {
            match (r.h, r.lambda_s, r.nu) {
                (Some(h), Some(l), Some(nu)) => {
                    let w = (h * l) as f64;
                    sum += match kind {
                        PiKind::Plain => w,
                        PiKind::Tilde => nu * w,
                    };
                }
                _ => inconclusive += 1,
            }
        }
        let target = match kind {
            PiKind::Plain => (4.0 * x).exp() / (8.0 * x),
            PiKind::Tilde => (4.0 * x).exp() / (2.0 * x),
        };
        let mut row = CensusRow::new(x, sum, target);
        row.lower_bound = x > cert || inconclusive > 0;
        row.inconclusive = inconclusive;
        table.rows.push(row);
    }
    Ok(table)
}

/// Checkpoints `0.5, 1.0, ...` up to the largest C^c regulator.
pub fn default_pi_checkpoints(corpus: &Corpus) -> Vec<f64> {
    let top = corpus.cc_rows().filter_map(|r| r.regulator).fold(0.5, f64::max);
    linear_checkpoints(0.5, (2.0 * top).ceil() / 2.0, 0.5)
}

/// Invariants of the maximal order of one field.
pub fn invariants_for(poly: &IntPoly, s: &PrimeSet, ceiling: f64) -> Result<OrderInvariants> {
    let field = Arc::new(make_field(poly.coeffs())?);
    Ok(compute_invariants(field, s, ceiling)?)
}
