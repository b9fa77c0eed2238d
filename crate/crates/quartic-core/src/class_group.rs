//! Class groups of orders: reduced forms for quadratic orders, relations
//! over a Minkowski factor base for maximal orders of degree 2 and 4.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::linalg::{smith_normal_form, HermiteLattice};
use crate::arith::primes::primes_up_to;
use crate::error::{Error, Result};
use crate::forms::{self, Sieve};
use crate::geometry::{combine, Minkowski};
use crate::ideal::{prime_decomposition, Ideal, PrimeIdeal};
use crate::lattice::short_vectors;
use crate::order::{Coords, Order};
use crate::units::{fundamental_unit, unit_groups, UnitData};

/// Largest Minkowski bound handled by the ideal route unless configured.
pub const DEFAULT_BOUND_CEILING: f64 = 60.0;

/// Finite abelian group by its invariant factors `d₁ | d₂ | ...`, all > 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub h: u64,
    pub invariants: Vec<u64>,
}

impl ClassGroup {
    fn from_invariants(invariants: Vec<u64>) -> ClassGroup {
        ClassGroup { h: invariants.iter().product(), invariants }
    }

    pub fn trivial() -> ClassGroup {
        ClassGroup { h: 1, invariants: Vec::new() }
    }
}

/// `(4/π)^s · n!/nⁿ · √|disc|`.
pub fn minkowski_bound(degree: usize, complex_places: usize, disc: &BigInt) -> Result<f64> {
    if disc.is_zero() {
        return Err(Error::PreconditionViolated("discriminant must be nonzero".into()));
    }
    if degree == 0 {
        return Err(Error::PreconditionViolated("degree must be positive".into()));
    }
    let n = degree as f64;
    let factorial: f64 = (1..=degree).map(|k| k as f64).product();
    let abs = disc.abs().to_f64().unwrap_or(f64::INFINITY);
    Ok((4.0 / std::f64::consts::PI).powi(complex_places as i32) * factorial / n.powi(degree as i32) * abs.sqrt())
}

pub fn order_minkowski_bound(order: &Order) -> Result<f64> {
    minkowski_bound(order.degree(), order.field().signature().1, order.disc())
}

/// Class group of the order: reduced forms for quadratic orders, the ideal
/// route for maximal quartic orders with Minkowski bound at most `ceiling`.
pub fn class_group(order: &Order, ceiling: f64) -> Result<ClassGroup> {
    match order.degree() {
        2 => {
            let d = order
                .disc()
                .to_i64()
                .filter(|d| d.unsigned_abs() < 1 << 40)
                .ok_or_else(|| Error::Unsupported("quadratic discriminant too large".into()))?;
            let sieve = Sieve::new((d.unsigned_abs() / 4 + 1) as usize);
            Ok(ClassGroup::from_invariants(forms::class_group_structure(d, &sieve)?))
        }
        4 => class_group_ideals(order, ceiling),
        n => Err(Error::UnsupportedDegree(n)),
    }
}

pub fn class_number(order: &Order, ceiling: f64) -> Result<u64> {
    class_group(order, ceiling).map(|g| g.h)
}

/// Searches for a generator of a principal ideal. Every generator is a unit
/// multiple of one whose log-embedding lies in a fundamental window for the
/// unit group, so the search is exhaustive.
pub struct PrincipalSearch<'a> {
    order: &'a Order,
    units: Option<UnitData>,
    group_a: Vec<usize>,
    mk: Minkowski<'a>,
    delta: f64,
    max_points: usize,
}

impl<'a> PrincipalSearch<'a> {
    pub fn new(order: &'a Order) -> Result<Self> {
        let field = order.field();
        let (units, group_a) = match field.unit_rank() {
            0 => (None, Vec::new()),
            1 => (Some(fundamental_unit(order)?), unit_groups(field)?.0),
            r => return Err(Error::Unsupported(format!("unit rank {r}"))),
        };
        Ok(PrincipalSearch { order, units, group_a, mk: Minkowski::new(order), delta: 0.25, max_points: 200_000 })
    }

    fn weights(&self, center: f64) -> Vec<f64> {
        (0..self.order.degree())
            .map(|k| if self.group_a.contains(&k) { (-2.0 * center).exp() } else { (2.0 * center).exp() })
            .collect()
    }

    /// Window centers covering `[-ρ/2, ρ/2]`, walked outward from `0` so
    /// that each reduction starts from a nearby reduced basis.
    fn centers(&self) -> (Vec<f64>, Vec<f64>) {
        let Some(u) = &self.units else { return (vec![0.0], Vec::new()) };
        let half = u.rho / 2.0;
        let mut up = vec![0.0];
        while up.last().unwrap() + self.delta < half {
            up.push(up.last().unwrap() + 2.0 * self.delta);
        }
        let down = up.iter().skip(1).map(|c| -c).collect();
        (up, down)
    }

    /// A generator of `ideal`, or `None` when it is not principal.
    pub fn generator(&mut self, ideal: &Ideal) -> Result<Option<Coords>> {
        let n = self.order.degree();
        let norm = ideal.norm();
        let norm_f = norm.to_f64().unwrap_or(f64::INFINITY);
        let stretch = if self.units.is_some() { (2.0 * self.delta).cosh() } else { 1.0 };
        let bound = n as f64 * norm_f.powf(2.0 / n as f64) * stretch * (1.0 + 1e-9) + 1e-9;
        let start: Vec<Coords> = ideal.basis().clone();
        let (up, down) = self.centers();
        for branch in [up, down] {
            let mut rows = start.clone();
            for center in branch {
                let weights = self.weights(center);
                let g = self.mk.reduce(&mut rows, &weights)?;
                let cands = short_vectors(&g, bound, self.max_points)
                    .ok_or_else(|| Error::Inconclusive("principality search exceeded its point budget".into()))?;
                for x in cands {
                    let c = combine(&x, &rows);
                    if self.order.norm(&c).abs() == norm {
                        return Ok(Some(c));
                    }
                }
            }
        }
        Ok(None)
    }
}

pub fn is_principal(order: &Order, ideal: &Ideal) -> Result<Option<Coords>> {
    PrincipalSearch::new(order)?.generator(ideal)
}

/// Relation search state over a factor base of prime ideals.
struct Relations<'a> {
    order: &'a Order,
    base: Vec<PrimeIdeal>,
    primes: Vec<u64>,
    lattice: HermiteLattice,
}

impl<'a> Relations<'a> {
    fn exponent_vector(&self, alpha: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = self.order.norm(alpha).abs();
        if rest.is_zero() {
            return None;
        }
        let mut touched = BTreeSet::new();
        for &p in &self.primes {
            let bp = BigInt::from(p);
            while rest.is_multiple_of(&bp) {
                rest /= &bp;
                touched.insert(p);
            }
        }
        if !rest.is_one() {
            return None;
        }
        Some(
            self.base
                .iter()
                .map(|q| if touched.contains(&q.p) { BigInt::from(q.valuation(self.order, alpha)) } else { BigInt::zero() })
                .collect(),
        )
    }

    /// Adds the relations of small elements of each factor-base ideal (and
    /// of the order), enumerated under the form weighted at `center`.
    fn harvest(&mut self, search: &mut PrincipalSearch, scale: f64, center: f64) -> Result<()> {
        let n = self.order.degree();
        let mut sources: Vec<Ideal> = vec![Ideal::unit(self.order)];
        sources.extend(self.base.iter().map(|q| q.ideal.clone()));
        for ideal in sources {
            let norm = ideal.norm().to_f64().unwrap_or(f64::INFINITY);
            let bound = n as f64 * norm.powf(2.0 / n as f64) * scale;
            let mut rows = ideal.basis().clone();
            let weights = search.weights(center);
            let g = search.mk.reduce(&mut rows, &weights)?;
            let Some(cands) = short_vectors(&g, bound, 400) else { continue };
            for x in cands {
                if let Some(v) = self.exponent_vector(&combine(&x, &rows)) {
                    self.lattice.insert(v);
                }
            }
        }
        Ok(())
    }
}

/// Class group of a maximal order by the ideal route (degree 2 or 4).
pub fn class_group_ideals(order: &Order, ceiling: f64) -> Result<ClassGroup> {
    if !order.is_globally_maximal() {
        return Err(Error::Unsupported("ideal route needs a maximal order".into()));
    }
    let bound = order_minkowski_bound(order)?;
    if bound > ceiling {
        return Err(Error::Inconclusive(format!("Minkowski bound {bound:.2} exceeds the ceiling {ceiling}")));
    }
    let primes = primes_up_to(bound.floor() as u64);
    if primes.is_empty() {
        return Ok(ClassGroup::trivial());
    }
    let mut base = Vec::new();
    for &p in &primes {
        base.extend(prime_decomposition(order, p)?);
    }
    let k = base.len();
    let mut rel = Relations { order, base, primes: primes.clone(), lattice: HermiteLattice::new(k) };
    // (p) = ∏ P^e
    let mut offset = 0;
    for &p in &primes {
        let above = rel.base.iter().filter(|q| q.p == p).count();
        let mut v = vec![BigInt::zero(); k];
        for (i, q) in rel.base.iter().enumerate().skip(offset).take(above) {
            v[i] = BigInt::from(q.e);
        }
        rel.lattice.insert(v);
        offset += above;
    }
    let mut search = PrincipalSearch::new(order)?;
    let centers = harvest_centers(&search);
    let mut stable_rounds = 0;
    let mut last_det: Option<BigInt> = None;
    let mut scale = 1.5;
    for _round in 0..40 {
        for &c in &centers {
            rel.harvest(&mut search, scale, c)?;
        }
        scale *= 1.4;
        let det = rel.lattice.determinant();
        if det.is_some() && det == last_det {
            stable_rounds += 1;
        } else {
            stable_rounds = 0;
        }
        last_det = det.clone();
        if let Some(d) = &det {
            if d.is_one() {
                return Ok(ClassGroup::trivial());
            }
            if stable_rounds >= 2 {
                if let Some(group) = certify(&mut rel, &mut search)? {
                    return Ok(group);
                }
                stable_rounds = 0;
                last_det = rel.lattice.determinant();
            }
        }
    }
    Err(Error::Inconclusive(match last_det {
        Some(d) => format!("relation search stopped at a multiple {d} of h"),
        None => "relation lattice never reached full rank".into(),
    }))
}

fn harvest_centers(search: &PrincipalSearch) -> Vec<f64> {
    match &search.units {
        None => vec![0.0],
        Some(u) if u.rho > 2.0 => vec![0.0, 0.5, -0.5],
        Some(_) => vec![0.0],
    }
}

/// Class of each factor-base prime in `⊕ ℤ/dᵢ`.
struct ClassMap {
    diag: Vec<BigInt>,
    images: Vec<Vec<BigInt>>,
}

impl ClassMap {
    fn new(lattice: &HermiteLattice) -> ClassMap {
        let (diag, v) = smith_normal_form(&lattice.basis());
        let images = v
            .iter()
            .map(|row| row.iter().zip(&diag).map(|(x, d)| x.mod_floor(d)).collect())
            .collect();
        ClassMap { diag, images }
    }
}

/// Proves the relation lattice complete, or adds a missing relation and
/// returns `None`. A missing relation would leave a nontrivial kernel of
/// `ℤ^k/L → Cl`, hence an element of prime order ℓ | det in it; every
/// cyclic subgroup of order ℓ is shown to map injectively.
fn certify(rel: &mut Relations, search: &mut PrincipalSearch) -> Result<Option<ClassGroup>> {
    let map = ClassMap::new(&rel.lattice);
    let h: BigInt = map.diag.iter().product();
    let h64 = h.to_u64().ok_or_else(|| Error::Inconclusive(format!("candidate class number {h} too large")))?;
    for (ell, _) in crate::arith::primes::factor_u64(h64) {
        let bell = BigInt::from(ell);
        let slots: Vec<usize> = (0..map.diag.len()).filter(|&i| map.diag[i].is_multiple_of(&bell)).collect();
        for coeffs in projective_points(slots.len(), ell) {
            let mut g = vec![BigInt::zero(); map.diag.len()];
            for (&i, c) in slots.iter().zip(&coeffs) {
                g[i] = (&map.diag[i] / &bell) * BigInt::from(*c);
            }
            let multiples: Vec<Vec<BigInt>> = (1..ell)
                .map(|m| g.iter().zip(&map.diag).map(|(x, d)| (x * BigInt::from(m)).mod_floor(d)).collect())
                .collect();
            let Some(exps) = small_representative(rel, &map, &multiples) else {
                return Err(Error::Inconclusive(format!("no small ideal represents a class of order {ell}")));
            };
            let ideal = exps
                .iter()
                .fold(Ideal::unit(rel.order), |acc, &i| acc.mul(&rel.base[i].ideal, rel.order));
            if search.generator(&ideal)?.is_some() {
                let mut v = vec![BigInt::zero(); rel.base.len()];
                for &i in &exps {
                    v[i] += 1;
                }
                rel.lattice.insert(v);
                return Ok(None);
            }
        }
    }
    let invariants: Vec<u64> = map.diag.iter().filter(|d| !d.is_one()).map(|d| d.to_u64().unwrap()).collect();
    Ok(Some(ClassGroup::from_invariants(normalize_invariants(invariants))))
}

/// Smallest-norm product of at most four factor-base primes whose class is
/// one of `targets`, preferring fewer factors.
fn small_representative(rel: &Relations, map: &ClassMap, targets: &[Vec<BigInt>]) -> Option<Vec<usize>> {
    let k = rel.base.len();
    let class_of = |idx: &[usize]| -> Vec<BigInt> {
        (0..map.diag.len())
            .map(|t| idx.iter().fold(BigInt::zero(), |acc, &i| acc + &map.images[i][t]).mod_floor(&map.diag[t]))
            .collect()
    };
    for size in 1..=4 {
        let mut best: Option<(BigInt, Vec<usize>)> = None;
        for idx in multisets(k, size) {
            let nm: BigInt = idx.iter().map(|&i| rel.base[i].norm()).product();
            if best.as_ref().is_some_and(|(b, _)| &nm >= b) {
                continue;
            }
            if targets.contains(&class_of(&idx)) {
                best = Some((nm, idx));
            }
        }
        if let Some((_, idx)) = best {
            return Some(idx);
        }
    }
    None
}

/// Non-decreasing index sequences of the given length over `0..k`.
fn multisets(k: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut head in multisets(k, size - 1) {
        let from = head.last().copied().unwrap_or(0);
        for i in from..k {
            head.push(i);
            out.push(head.clone());
            head.pop();
        }
    }
    out
}

/// Representatives of the lines of `𝔽_ℓ^r`: first nonzero coordinate 1.
fn projective_points(r: usize, ell: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        let count = ell.pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0u64; r];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = code % ell;
                code /= ell;
            }
            out.push(v);
        }
    }
    out
}

/// Invariant factors from any cyclic decomposition.
fn normalize_invariants(cyclic: Vec<u64>) -> Vec<u64> {
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    for c in cyclic {
        for (p, e) in crate::arith::primes::factor_u64(c) {
            match parts.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(e),
                None => parts.push((p, vec![e])),
            }
        }
    }
    let rank = parts.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; rank];
    for (p, mut v) in parts {
        v.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in v.into_iter().enumerate() {
            out[rank - 1 - i] *= p.pow(e);
        }
    }
    out.retain(|&x| x > 1);
    out
}
