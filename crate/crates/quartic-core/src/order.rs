//! Orders in a number field: ℤ-lattices of full rank containing 1 and closed
//! under multiplication, stored by a Hermite basis in power-basis coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::fixed::Fx;
use crate::arith::linalg::{
    charpoly, clear_denominators, det_bigint, det_rational, inverse_rational, modp, vec_mat_rational,
    HermiteLattice, IntMatrix, RatMatrix,
};
use crate::arith::modp as fp;
use crate::arith::primes::{factor_bigint, is_prime, valuation};
use crate::arith::{factor_mod_p, IntPoly};
use crate::error::{Error, Result};
use crate::field::NumberField;

/// Integer coordinates of an order element in the order's basis.
pub type Coords = Vec<BigInt>;

#[derive(Clone)]
pub struct Order {
    field: Arc<NumberField>,
    basis: RatMatrix,
    basis_inv: RatMatrix,
    table: Vec<Vec<Coords>>,
    disc: BigInt,
    maximal_at: BTreeSet<u64>,
    globally_maximal: bool,
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Order")
            .field("field", &self.field.key())
            .field("disc", &self.disc)
            .field("maximal_at", &self.maximal_at)
            .field("globally_maximal", &self.globally_maximal)
            .finish()
    }
}

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        self.field.key() == other.field.key() && self.basis == other.basis
    }
}

fn hermite_basis(n: usize, gens: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let (ints, den) = clear_denominators(gens);
    let lat = HermiteLattice::from_rows(n, &ints);
    if !lat.is_full_rank() {
        return None;
    }
    Some(
        lat.basis()
            .into_iter()
            .map(|row| row.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
            .collect(),
    )
}

impl Order {
    /// The ring generated by `gens` (power-basis coordinates) together with 1.
    pub fn from_generators(field: Arc<NumberField>, gens: &[Vec<BigRational>]) -> Result<Order> {
        let n = field.degree();
        let mut all: Vec<Vec<BigRational>> = gens.to_vec();
        all.push(field.one());
        let mut basis = hermite_basis(n, &all)
            .ok_or_else(|| Error::InvalidArgument("generators do not span the field".into()))?;
        loop {
            let mut grown = basis.clone();
            for i in 0..n {
                for j in i..n {
                    grown.push(field.mul(&basis[i], &basis[j]));
                }
            }
            let next = hermite_basis(n, &grown).expect("full rank is preserved");
            if next == basis {
                break;
            }
            basis = next;
        }
        Self::from_ring_basis(field, basis)
    }

    fn from_ring_basis(field: Arc<NumberField>, basis: RatMatrix) -> Result<Order> {
        let n = field.degree();
        let basis_inv = inverse_rational(&basis).ok_or_else(|| Error::Internal("singular order basis".into()))?;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = field.mul(&basis[i], &basis[j]);
                let c = vec_mat_rational(&prod, &basis_inv);
                if c.iter().any(|x| !x.is_integer()) {
                    return Err(Error::Internal("basis is not closed under multiplication".into()));
                }
                table[i][j] = c.into_iter().map(|x| x.to_integer()).collect();
            }
        }
        let det = det_rational(&basis);
        let d2 = &det * &det;
        let fd = BigRational::from_integer(field.min_poly().discriminant()?) * d2;
        if !fd.is_integer() {
            return Err(Error::Internal("order discriminant is not integral".into()));
        }
        let disc = fd.to_integer();
        let globally_maximal = field.field_disc().is_some_and(|d| *d == disc);
        Ok(Order {
            field,
            basis,
            basis_inv,
            table,
            disc,
            maximal_at: BTreeSet::new(),
            globally_maximal,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Basis rows in power-basis coordinates.
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn maximal_at(&self) -> &BTreeSet<u64> {
        &self.maximal_at
    }

    pub fn is_globally_maximal(&self) -> bool {
        self.globally_maximal
    }

    pub fn is_maximal_at(&self, p: u64) -> bool {
        self.globally_maximal || self.maximal_at.contains(&p)
    }

    pub fn is_equation_order(&self) -> bool {
        let n = self.degree();
        (0..n).all(|i| (0..n).all(|j| self.basis[i][j] == BigRational::from_integer(BigInt::from((i == j) as i32))))
    }

    /// `ω_i ω_j` in coordinates.
    pub fn table(&self) -> &[Vec<Coords>] {
        &self.table
    }

    pub fn one(&self) -> Coords {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = BigInt::one();
        v
    }

    pub fn unit_vector(&self, i: usize) -> Coords {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[i] = BigInt::one();
        v
    }

    pub fn from_int(&self, k: &BigInt) -> Coords {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = k.clone();
        v
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Coords {
        let n = self.degree();
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o += &xy * t;
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[BigInt], mut k: u64) -> Coords {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Power-basis coordinates.
    pub fn to_field(&self, a: &[BigInt]) -> Vec<BigRational> {
        let v: Vec<BigRational> = a.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        vec_mat_rational(&v, &self.basis)
    }

    /// Coordinates of a field element, `None` when it is not in the order.
    pub fn from_field(&self, x: &[BigRational]) -> Option<Coords> {
        let c = vec_mat_rational(x, &self.basis_inv);
        c.iter()
            .all(BigRational::is_integer)
            .then(|| c.into_iter().map(|v| v.to_integer()).collect())
    }

    /// Rational coordinates of a field element.
    pub fn field_coords(&self, x: &[BigRational]) -> Vec<BigRational> {
        vec_mat_rational(x, &self.basis_inv)
    }

    /// Row `j` holds the coordinates of `a ω_j`.
    pub fn mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        (0..self.degree()).map(|j| self.mul(a, &self.unit_vector(j))).collect()
    }

    pub fn norm(&self, a: &[BigInt]) -> BigInt {
        det_bigint(&self.mult_matrix(a))
    }

    pub fn trace(&self, a: &[BigInt]) -> BigInt {
        let m = self.mult_matrix(a);
        (0..self.degree()).fold(BigInt::zero(), |acc, i| acc + &m[i][i])
    }

    pub fn charpoly(&self, a: &[BigInt]) -> IntPoly {
        charpoly(&self.mult_matrix(a))
    }

    /// Inverse in the field, in power-basis coordinates; `None` for zero.
    pub fn inverse_in_field(&self, a: &[BigInt]) -> Option<Vec<BigRational>> {
        let m: RatMatrix = self
            .mult_matrix(a)
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = inverse_rational(&m)?;
        let one: Vec<BigRational> = self.one().into_iter().map(BigRational::from_integer).collect();
        Some(self.to_field_rat(&vec_mat_rational(&one, &inv)))
    }

    fn to_field_rat(&self, c: &[BigRational]) -> Vec<BigRational> {
        vec_mat_rational(c, &self.basis)
    }

    /// Embedding values of an order element.
    pub fn embed(&self, a: &[BigInt], bits: u32) -> Vec<Fx> {
        self.field.embed(&self.to_field(a), bits)
    }

    /// Embedding values of every basis element: `out[j][k] = τ_k(ω_j)`.
    pub fn basis_embeddings(&self, bits: u32) -> Vec<Vec<Fx>> {
        self.basis.iter().map(|row| self.field.embed(row, bits)).collect()
    }

    /// `[other : self]` for `self ⊆ other`, as a rational.
    pub fn index_in(&self, other: &Order) -> BigRational {
        (det_rational(&self.basis) / det_rational(&other.basis)).abs()
    }

    pub fn contains_order(&self, other: &Order) -> bool {
        other.basis.iter().all(|row| self.from_field(row).is_some())
    }

    fn with_maximal_at(mut self, primes: impl IntoIterator<Item = u64>) -> Self {
        self.maximal_at.extend(primes);
        self
    }

    /// Reduced multiplication table modulo `p`.
    pub fn table_mod(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        let bp = BigInt::from(p);
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.iter().map(|x| x.mod_floor(&bp).to_u64().unwrap()).collect())
                    .collect()
            })
            .collect()
    }
}

/// Product in `O / pO` given the reduced table.
pub fn mul_mod(table: &[Vec<Vec<u64>>], a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let xy = x * y % p;
            for (o, &t) in out.iter_mut().zip(&table[i][j]) {
                *o = (*o + xy * t) % p;
            }
        }
    }
    out
}

pub fn pow_mod(table: &[Vec<Vec<u64>>], a: &[u64], e: &BigUint, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut acc = vec![0u64; n];
    acc[0] = 1;
    for bit in (0..e.bits()).rev() {
        acc = mul_mod(table, &acc, &acc, p);
        if e.bit(bit) {
            acc = mul_mod(table, &acc, a, p);
        }
    }
    acc
}

/// Basis (mod p) of the radical of `pO` inside `O / pO`: the kernel of
/// `x ↦ x^(p^j)` with `p^j >= n`.
pub fn radical_mod_p(order: &Order, p: u64) -> Vec<Vec<u64>> {
    let n = order.degree();
    let table = order.table_mod(p);
    let mut q = BigUint::from(p);
    while q < BigUint::from(n) {
        q *= p;
    }
    // rows: images of basis vectors
    let images: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            pow_mod(&table, &e, &q, p)
        })
        .collect();
    // left kernel of images = right kernel of transpose
    let transpose: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| images[i][j]).collect()).collect();
    modp::kernel(&transpose, n, p)
}

/// Integer basis (order coordinates) of `pO + lift(vectors)`.
pub fn lift_with_p(order: &Order, vectors: &[Vec<u64>], p: u64) -> IntMatrix {
    let n = order.degree();
    let mut rows: IntMatrix = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(p);
            v
        })
        .collect();
    rows.extend(vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()));
    HermiteLattice::from_rows(n, &rows).basis()
}

/// Dedekind criterion for the equation order at `p`: true when `ℤ[θ]` is
/// `p`-maximal.
pub fn dedekind_criterion(f: &IntPoly, p: u64) -> Result<bool> {
    let fac = factor_mod_p(f, p)?;
    let g: IntPoly = fac
        .factors
        .iter()
        .fold(IntPoly::constant(BigInt::one()), |acc, (q, _)| &acc * q);
    let fp_f = fp::reduce(f, p);
    let fp_g = fp::reduce(&g, p);
    let (h, r) = fp::divrem(&fp_f, &fp_g, p);
    debug_assert!(r.is_empty());
    let h_int = fp::lift(&h);
    let diff = &(&g * &h_int) - f;
    let bp = BigInt::from(p);
    let big_f = IntPoly::new(diff.coeffs().iter().map(|c| c / &bp).collect());
    let fbar = fp::reduce(&big_f, p);
    let z = fp::gcd(&fp::gcd(&fbar, &fp_g, p), &h, p);
    Ok(z.len() <= 1)
}

/// The `p`-maximal order containing `order` (Round 2 iteration).
pub fn p_maximal_order(order: &Order, p: u64) -> Result<Order> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if order.is_maximal_at(p) {
        return Ok(order.clone());
    }
    if valuation(order.disc(), p) < 2
        || (order.is_equation_order() && dedekind_criterion(order.field().min_poly(), p)?)
    {
        return Ok(order.clone().with_maximal_at([p]));
    }
    let mut current = order.clone();
    loop {
        let n = current.degree();
        let radical = radical_mod_p(&current, p);
        let ip = lift_with_p(&current, &radical, p);
        let ip_rat: RatMatrix = ip
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let ip_inv = inverse_rational(&ip_rat).ok_or_else(|| Error::Internal("radical lattice singular".into()))?;
        let bp = BigInt::from(p);
        // phi: x ↦ (coords of x γ_k in I_p) mod p, k = 0..n
        let phi: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let e = current.unit_vector(i);
                let mut row = Vec::with_capacity(n * n);
                for gamma in &ip {
                    let prod: Vec<BigRational> = current
                        .mul(&e, gamma)
                        .into_iter()
                        .map(BigRational::from_integer)
                        .collect();
                    for c in vec_mat_rational(&prod, &ip_inv) {
                        debug_assert!(c.is_integer());
                        row.push(c.to_integer().mod_floor(&bp).to_u64().unwrap());
                    }
                }
                row
            })
            .collect();
        let transpose: Vec<Vec<u64>> = (0..n * n).map(|j| (0..n).map(|i| phi[i][j]).collect()).collect();
        let kernel = modp::kernel(&transpose, n, p);
        let inv_p = BigRational::new(BigInt::one(), bp.clone());
        let mut gens: Vec<Vec<BigRational>> = current.basis().clone();
        for v in &kernel {
            let c: Coords = v.iter().map(|&x| BigInt::from(x)).collect();
            gens.push(current.to_field(&c).into_iter().map(|x| x * &inv_p).collect());
        }
        let next = Order::from_generators(current.field().clone(), &gens)?;
        if next.disc() == current.disc() {
            let primes = current.maximal_at.iter().copied().chain([p]).collect::<Vec<_>>();
            return Ok(current.with_maximal_at(primes));
        }
        let primes = current.maximal_at.clone();
        current = next.with_maximal_at(primes);
    }
}

pub fn equation_order(field: Arc<NumberField>) -> Result<Order> {
    let n = field.degree();
    let gens: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from((i == j) as i32)))
                .collect()
        })
        .collect();
    Order::from_generators(field, &gens)
}

/// Primes whose square divides the polynomial discriminant: the only places
/// where the equation order can fail to be maximal.
pub fn index_primes(field: &NumberField) -> Result<Vec<u64>> {
    let d = field.min_poly().discriminant()?;
    Ok(factor_bigint(&d)?
        .into_iter()
        .filter(|&(_, e)| e >= 2)
        .map(|(p, _)| p)
        .collect())
}

/// The maximal order (`global`) or the order that is maximal at every prime
/// of `primes`, starting from the equation order.
pub fn order_maximal_at(field: Arc<NumberField>, primes: &[u64], global: bool) -> Result<Order> {
    let mut order = equation_order(field.clone())?;
    let mut todo: Vec<u64> = primes.to_vec();
    if global {
        todo.extend(index_primes(&field)?);
    }
    todo.sort_unstable();
    todo.dedup();
    for p in todo {
        order = p_maximal_order(&order, p)?;
    }
    if global {
        field.set_field_disc(order.disc().clone());
        order.globally_maximal = true;
    }
    Ok(order)
}

pub fn maximal_order(field: Arc<NumberField>) -> Result<Order> {
    order_maximal_at(field, &[], true)
}
