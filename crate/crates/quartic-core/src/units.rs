//! Torsion and fundamental units of orders of unit rank one, and the
//! unit-derived invariants κ and ν.
//!
//! Fundamental units are found by scanning log-windows: a unit with
//! `log|τ_A(u)| = s` satisfies `Q_t(u) = n cosh(2(s - t))` for the form
//! `Q_t = e^{-2t} Σ_A |τ|² + e^{2t} Σ_B |τ|²`, so every unit with
//! `|s - t| <= δ` is a lattice point of `Q_t` below `n cosh(2δ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::fixed::Fx;
use crate::arith::{complex_roots, IntPoly};
use crate::error::{Error, Result};
use crate::field::{interpolate, reconstruct, NumberField};
use crate::geometry::{combine, Minkowski};
use crate::lattice::short_vectors;
use crate::order::{Coords, Order};

/// Orders of roots of unity that can occur in a quartic field.
pub const QUARTIC_TORSION_ORDERS: [u32; 6] = [2, 4, 6, 8, 10, 12];

#[derive(Clone, Debug)]
pub struct UnitData {
    /// Number of roots of unity in the order.
    pub mu: u32,
    pub torsion_gen: Coords,
    pub fund_unit: Coords,
    /// `|log|τ(ε)||` for the first embedding.
    pub rho: f64,
    /// `2ρ` for quartic orders, `ρ` for quadratic orders.
    pub regulator: f64,
    /// Arguments of the two embedding pairs, each in `[0, π]` (quartic only).
    pub angles: Option<(f64, f64)>,
}

impl UnitData {
    /// `a = |τ_1(ε)| = e^{-ρ}` for quartic orders.
    pub fn modulus(&self) -> f64 {
        (-self.rho).exp()
    }
}

/// Search parameters for the window scan.
#[derive(Clone, Debug)]
pub struct UnitSearch {
    /// Half-width of each log-window.
    pub delta: f64,
    /// Largest `ρ` searched before giving up.
    pub max_log: f64,
    /// Lattice points tolerated per window.
    pub max_points: usize,
}

impl Default for UnitSearch {
    fn default() -> Self {
        UnitSearch { delta: 0.25, max_log: 200.0, max_points: 200_000 }
    }
}


fn neg(c: &[BigInt]) -> Coords {
    c.iter().map(|x| -x).collect()
}

fn is_one(order: &Order, c: &[BigInt]) -> bool {
    *c == order.one()[..]
}

/// Multiplicative order of a torsion element, if at most `limit`.
fn torsion_order(order: &Order, c: &[BigInt], limit: u32) -> Option<u32> {
    let mut acc = c.to_vec();
    for k in 1..=limit {
        if is_one(order, &acc) {
            return Some(k);
        }
        acc = order.mul(&acc, c);
    }
    None
}

/// Roots of unity in the order: their number and a generator.
pub fn torsion_units(order: &Order) -> Result<(u32, Coords)> {
    let field = order.field();
    if field.signature().0 > 0 {
        return Ok((2, neg(&order.one())));
    }
    let n = order.degree();
    let mut rows: Vec<Coords> = (0..n).map(|i| order.unit_vector(i)).collect();
    let mut mk = Minkowski::new(order);
    let g = mk.reduce(&mut rows, &vec![1.0; n])?;
    let cands = short_vectors(&g, n as f64 + 1e-6, 10_000)
        .ok_or_else(|| Error::Internal("too many elements of minimal T2".into()))?;
    let limit = if n == 4 { 12 } else { 6 };
    let mut roots = Vec::new();
    for x in cands {
        let c = combine(&x, &rows);
        if order.norm(&c).abs() != BigInt::one() {
            continue;
        }
        for v in [c.clone(), neg(&c)] {
            if let Some(k) = torsion_order(order, &v, limit) {
                roots.push((k, v));
            }
        }
    }
    let mu = roots.len() as u32;
    let allowed: &[u32] = if n == 4 { &QUARTIC_TORSION_ORDERS } else { &[2, 4, 6] };
    if !allowed.contains(&mu) {
        return Err(Error::Internal(format!("impossible torsion count {mu}")));
    }
    let (_, gen) = roots
        .into_iter()
        .filter(|(k, _)| *k == mu)
        .min_by(|a, b| a.1.cmp(&b.1))
        .ok_or_else(|| Error::Internal("torsion is not cyclic".into()))?;
    Ok((mu, gen))
}

/// Exact inverse of a unit of the order.
pub fn unit_inverse(order: &Order, u: &[BigInt]) -> Result<Coords> {
    order
        .inverse_in_field(u)
        .and_then(|x| order.from_field(&x))
        .ok_or_else(|| Error::InvalidArgument("element is not a unit".into()))
}

/// Embedding groups `(A, B)` whose log-absolute values are negatives of each
/// other on units.
pub(crate) fn unit_groups(field: &NumberField) -> Result<(Vec<usize>, Vec<usize>)> {
    match (field.degree(), field.signature()) {
        (4, (0, 2)) => Ok((vec![0, 1], vec![2, 3])),
        (2, (2, 0)) => Ok((vec![0], vec![1])),
        _ => Err(Error::PreconditionViolated(format!(
            "unit rank one requires a real quadratic or totally complex quartic field, got signature {:?}",
            field.signature()
        ))),
    }
}

pub fn fundamental_unit(order: &Order) -> Result<UnitData> {
    fundamental_unit_with(order, &UnitSearch::default())
}

pub fn fundamental_unit_with(order: &Order, search: &UnitSearch) -> Result<UnitData> {
    let field = order.field();
    let (group_a, _) = unit_groups(field)?;
    let n = order.degree();
    let quartic = n == 4;
    let reg_factor = if quartic { 2.0 } else { 1.0 };
    let (mu, torsion_gen) = torsion_units(order)?;
    let mut mk = Minkowski::new(order);
    let mut rows: Vec<Coords> = (0..n).map(|i| order.unit_vector(i)).collect();
    let delta = search.delta;
    let bound = n as f64 * (2.0 * delta).cosh() * (1.0 + 1e-9) + 1e-9;
    let mut best: Option<(f64, Coords)> = None;
    let mut center = delta;
    loop {
        if let Some((s, _)) = &best {
            if center - delta > *s + 1e-9 {
                break;
            }
        }
        if center - delta > search.max_log {
            return Err(Error::SearchBudgetExhausted { lower_bound: reg_factor * (center - delta) });
        }
        let weights: Vec<f64> = (0..n)
            .map(|k| if group_a.contains(&k) { (-2.0 * center).exp() } else { (2.0 * center).exp() })
            .collect();
        let g = mk.reduce(&mut rows, &weights)?;
        let cands = short_vectors(&g, bound, search.max_points)
            .ok_or(Error::SearchBudgetExhausted { lower_bound: reg_factor * (center - delta) })?;
        for x in cands {
            let c = combine(&x, &rows);
            if order.norm(&c).abs() != BigInt::one() {
                continue;
            }
            let s = mk.values(&c)[group_a[0]].ln_abs();
            if s.abs() < 1e-9 {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _)| s.abs() < b - 1e-9) {
                best = Some((s.abs(), if s > 0.0 { c } else { unit_inverse(order, &c)? }));
            }
        }
        center += 2.0 * delta;
    }
    let (_, mut eps) = best.expect("loop exits only with a unit");
    // eps has |τ_A| > 1 here
    if quartic {
        eps = unit_inverse(order, &eps)?;
    } else {
        let last = mk.values(&eps)[n - 1].clone();
        if last.ln_abs() < 0.0 {
            eps = unit_inverse(order, &eps)?;
        }
        if mk.values(&eps)[n - 1].re.is_negative() {
            eps = neg(&eps);
        }
    }
    let vals = mk.values(&eps);
    let rho = vals[0].ln_abs().abs();
    let angles = quartic.then(|| (vals[0].arg().abs(), vals[2].arg().abs()));
    Ok(UnitData { mu, torsion_gen, fund_unit: eps, rho, regulator: reg_factor * rho, angles })
}

/// Images `σ(θ)` (power-basis coordinates) of all automorphisms of the field.
pub fn automorphisms(field: &NumberField) -> Result<Vec<Vec<BigRational>>> {
    roots_in(field, field.min_poly())
}

/// Roots in the field of an irreducible polynomial of the same degree, in
/// power-basis coordinates, sorted. Nonempty exactly when `ℚ[x]/g ≅ F`.
pub fn roots_in(field: &NumberField, g: &IntPoly) -> Result<Vec<Vec<BigRational>>> {
    let n = field.degree();
    if g.degree() != n || !g.is_monic() {
        return Ok(Vec::new());
    }
    let bits = 512;
    let roots = field.roots(bits);
    let g_roots: Vec<Fx> = if g == field.min_poly() {
        roots.clone()
    } else {
        complex_roots(g, 2f64.powi(-(bits as i32) - 8))?.iter().map(|b| b.center(bits)).collect()
    };
    let den = field.min_poly().discriminant()?.abs();
    let g_rat: Vec<BigRational> = g.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for perm in permutations(n) {
        let values: Vec<Fx> = perm.iter().map(|&m| g_roots[m].clone()).collect();
        let coeffs = interpolate(&roots, &values);
        let Some(x) = reconstruct(&coeffs, &den) else { continue };
        if field.eval_poly_at(&g_rat, &x).iter().all(Zero::is_zero) && !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort();
    Ok(out)
}

/// Whether `ℚ[x]/f ≅ ℚ[x]/g` for irreducible `f` (the field) and `g`.
pub fn isomorphic(field: &NumberField, g: &IntPoly) -> Result<bool> {
    Ok(!roots_in(field, g)?.is_empty())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Applies the automorphism `θ ↦ g` to an order element.
pub fn apply_automorphism(order: &Order, g: &[BigRational], u: &[BigInt]) -> Vec<BigRational> {
    order.field().eval_poly_at(&order.to_field(u), g)
}

/// Number of automorphisms `σ` with `σ(ε) ∈ O`.
pub fn kappa(order: &Order, units: &UnitData) -> Result<u32> {
    let autos = automorphisms(order.field())?;
    let k = autos
        .iter()
        .filter(|g| order.from_field(&apply_automorphism(order, g, &units.fund_unit)).is_some())
        .count() as u32;
    if ![1, 2, 4].contains(&k) {
        return Err(Error::Internal(format!("κ = {k} is not in {{1, 2, 4}}")));
    }
    Ok(k)
}

/// One term of ν: the squared-phase product over the four embeddings and the
/// closed form in the two angles.
fn nu_term(vals: &[Fx]) -> (f64, f64) {
    let mut prod = (1.0f64, 0.0f64);
    for z in vals {
        let a = 2.0 * z.arg();
        let t = (1.0 - a.cos(), -a.sin());
        prod = (prod.0 * t.0 - prod.1 * t.1, prod.0 * t.1 + prod.1 * t.0);
    }
    let (th, ph) = (vals[0].arg(), vals[2].arg());
    let closed = 4.0 * (1.0 - (2.0 * th).cos()) * (1.0 - (2.0 * ph).cos());
    (prod.0, closed)
}

/// `ν(O)`: the average over the `2μ` fundamental units `ζ ε^{±1}`.
pub fn nu(order: &Order, units: &UnitData) -> Result<f64> {
    let (product, closed) = nu_both(order, units)?;
    if (product - closed).abs() > 1e-9 {
        return Err(Error::NumericInconsistency(format!("ν: product {product} vs closed form {closed}")));
    }
    if !(-1e-12..=16.0 + 1e-12).contains(&closed) {
        return Err(Error::NumericInconsistency(format!("ν = {closed} outside [0, 16]")));
    }
    Ok(closed)
}

/// `ν(O)` twice: from the squared-phase product over the four embeddings,
/// and from `4(1 - cos 2θ)(1 - cos 2φ)`.
pub fn nu_both(order: &Order, units: &UnitData) -> Result<(f64, f64)> {
    if order.degree() != 4 || !order.field().is_totally_complex() {
        return Err(Error::PreconditionViolated("ν needs a totally complex quartic order".into()));
    }
    let inv = unit_inverse(order, &units.fund_unit)?;
    let mut fund = Vec::new();
    let mut zeta = order.one();
    for _ in 0..units.mu {
        fund.push(order.mul(&zeta, &units.fund_unit));
        fund.push(order.mul(&zeta, &inv));
        zeta = order.mul(&zeta, &units.torsion_gen);
    }
    let mut sorted = fund.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != fund.len() {
        return Err(Error::Internal("fundamental units ζε^{±1} are not distinct".into()));
    }
    let mut mk = Minkowski::new(order);
    let (mut product, mut closed) = (0.0, 0.0);
    for u in &fund {
        let (p, c) = nu_term(&mk.values(u));
        product += p;
        closed += c;
    }
    let n = (2 * units.mu) as f64;
    Ok((product / n, closed / n))
}

/// `Some(q)` when `p = q²` for a monic integer quadratic `q`.
pub(crate) fn square_root_quartic(p: &IntPoly) -> Option<IntPoly> {
    if p.degree() != 4 || !p.is_monic() {
        return None;
    }
    let a3 = p.coeff(3);
    if a3.is_odd() {
        return None;
    }
    let b: BigInt = &a3 / 2;
    let t = p.coeff(2) - &b * &b;
    if t.is_odd() {
        return None;
    }
    let c = t / 2;
    let q = IntPoly::new(vec![c, b, BigInt::one()]);
    (&q * &q == *p).then_some(q)
}

/// Whether some `ζ ε^k` with `1 <= k <= 24` lies in a real quadratic subfield.
pub fn has_real_unit_power(order: &Order, units: &UnitData) -> Result<bool> {
    if order.degree() != 4 {
        return Err(Error::UnsupportedDegree(order.degree()));
    }
    let torsion: Vec<Coords> = (0..units.mu)
        .scan(order.one(), |z, _| {
            let cur = z.clone();
            *z = order.mul(z, &units.torsion_gen);
            Some(cur)
        })
        .collect();
    let mut power = order.one();
    for _ in 1..=24 {
        power = order.mul(&power, &units.fund_unit);
        for z in &torsion {
            let u = order.mul(z, &power);
            if let Some(q) = square_root_quartic(&order.charpoly(&u)) {
                let disc = q.coeff(1) * q.coeff(1) - BigInt::from(4) * q.coeff(0);
                if disc.is_positive() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Minimal polynomial of a torsion generator (for the degree-4 cases).
pub fn torsion_min_poly(order: &Order, gen: &[BigInt]) -> IntPoly {
    let cp = order.charpoly(gen);
    square_root_quartic(&cp).unwrap_or(cp)
}
