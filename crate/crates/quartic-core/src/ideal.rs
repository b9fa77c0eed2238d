//! Integral ideals of an order and decomposition of rational primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::linalg::{modp, HermiteLattice, IntMatrix};
use crate::arith::modp as fp;
use crate::arith::primes::exact_sqrt;
use crate::arith::{factor_mod_p, IntPoly};
use crate::error::{Error, Result};
use crate::order::{lift_with_p, mul_mod, pow_mod, radical_mod_p, Coords, Order};

/// Full-rank sublattice of an order closed under multiplication by the
/// order, kept as a Hermite basis in order coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    basis: IntMatrix,
}

impl Ideal {
    /// The ideal generated by `gens` as an `O`-module.
    pub fn from_generators(order: &Order, gens: &[Coords]) -> Result<Ideal> {
        let n = order.degree();
        let mut lat = HermiteLattice::new(n);
        for g in gens {
            for j in 0..n {
                lat.insert(order.mul(g, &order.unit_vector(j)));
            }
        }
        if !lat.is_full_rank() {
            return Err(Error::InvalidArgument("ideal generators span a degenerate lattice".into()));
        }
        Ok(Ideal { basis: lat.basis() })
    }

    /// Wraps a Hermite basis already known to be an ideal.
    pub fn from_hnf(basis: IntMatrix) -> Ideal {
        Ideal { basis }
    }

    pub fn principal(order: &Order, a: &[BigInt]) -> Result<Ideal> {
        Self::from_generators(order, &[a.to_vec()])
    }

    pub fn unit(order: &Order) -> Ideal {
        Self::principal(order, &order.one()).expect("1 generates the order")
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Index in the order.
    pub fn norm(&self) -> BigInt {
        self.basis
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, row)| acc * &row[i])
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        HermiteLattice::from_rows(self.basis.len(), &self.basis).contains(x)
    }

    pub fn mul(&self, other: &Ideal, order: &Order) -> Ideal {
        let n = order.degree();
        let mut lat = HermiteLattice::new(n);
        for a in &self.basis {
            for b in &other.basis {
                lat.insert(order.mul(a, b));
            }
        }
        Ideal { basis: lat.basis() }
    }

    pub fn pow(&self, k: u32, order: &Order) -> Ideal {
        let mut acc = Ideal::unit(order);
        for _ in 0..k {
            acc = acc.mul(self, order);
        }
        acc
    }

    /// Smallest positive integer in the ideal.
    pub fn minimum(&self) -> BigInt {
        self.basis[0][0].clone()
    }
}

/// A prime ideal above `p` with its ramification index and residue degree.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub ideal: Ideal,
    /// Element of `p P^{-1}` outside `pO`, used for valuations.
    anti_uniformizer: Coords,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ideal == other.ideal
    }
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }

    /// `v_P(x)` for nonzero `x` in the order.
    pub fn valuation(&self, order: &Order, x: &[BigInt]) -> u32 {
        debug_assert!(x.iter().any(|c| !c.is_zero()));
        let bp = BigInt::from(self.p);
        let mut y = x.to_vec();
        let mut v = 0;
        loop {
            let z = order.mul(&y, &self.anti_uniformizer);
            if z.iter().any(|c| !c.is_multiple_of(&bp)) {
                return v;
            }
            y = z.into_iter().map(|c| c / &bp).collect();
            v += 1;
        }
    }
}

fn anti_uniformizer(order: &Order, ideal: &Ideal, p: u64) -> Result<Coords> {
    let n = order.degree();
    let table = order.table_mod(p);
    let gens: Vec<Vec<u64>> = ideal.basis().iter().map(|g| reduce_vec(g, p)).collect();
    // y ↦ (y γ mod p) for every generator γ
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            gens.iter().flat_map(|g| mul_mod(&table, &e, g, p)).collect()
        })
        .collect();
    let kernel = modp::kernel(&transpose(&rows), n, p);
    kernel
        .into_iter()
        .next()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .ok_or_else(|| Error::Internal(format!("no anti-uniformizer above {p}")))
}

fn reduce_vec(v: &[BigInt], p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    v.iter().map(|x| x.mod_floor(&bp).to_u64().unwrap()).collect()
}

fn transpose(m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// `[O : ℤ[θ]]`.
pub fn equation_index(order: &Order) -> Result<BigInt> {
    let fd = order.field().min_poly().discriminant()?;
    let q = BigRational::new(fd, order.disc().clone());
    if !q.is_integer() {
        return Err(Error::Internal("order does not contain the equation order".into()));
    }
    exact_sqrt(&q.to_integer()).ok_or_else(|| Error::Internal("discriminant ratio is not a square".into()))
}

fn finish(order: &Order, p: u64, mut primes: Vec<(u32, u32, Ideal)>) -> Result<Vec<PrimeIdeal>> {
    primes.sort_by(|a, b| (a.1, a.0, &a.2.basis).cmp(&(b.1, b.0, &b.2.basis)));
    primes
        .into_iter()
        .map(|(e, f, ideal)| {
            if ideal.norm() != BigInt::from(p).pow(f) {
                return Err(Error::Internal(format!("prime above {p} has wrong norm")));
            }
            let anti_uniformizer = anti_uniformizer(order, &ideal, p)?;
            Ok(PrimeIdeal { p, e, f, ideal, anti_uniformizer })
        })
        .collect()
}

/// Decomposition read from the factorization of the minimal polynomial mod
/// `p`; valid only when `p` does not divide `[O : ℤ[θ]]`.
pub fn decomposition_dedekind(order: &Order, p: u64) -> Result<Vec<PrimeIdeal>> {
    if equation_index(order)?.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::PreconditionViolated(format!("{p} divides the equation-order index")));
    }
    let field = order.field();
    let fac = factor_mod_p(field.min_poly(), p)?;
    let mut out = Vec::new();
    for (g, e) in &fac.factors {
        let g_rat: Vec<BigRational> = g.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let g_theta = field.eval_poly_at(&g_rat, &field.generator());
        let g_coords = order
            .from_field(&g_theta)
            .ok_or_else(|| Error::Internal("θ is not in the order".into()))?;
        let ideal = Ideal::from_generators(order, &[order.from_int(&BigInt::from(p)), g_coords])?;
        out.push((*e as u32, g.degree() as u32, ideal));
    }
    finish(order, p, out)
}

/// Semisimple quotient `A = (O/pO)/J` with `J` the radical, represented by
/// the complement of the pivot columns of `J`'s echelon basis.
struct Quotient<'a> {
    p: u64,
    n: usize,
    table: &'a [Vec<Vec<u64>>],
    radical: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl Quotient<'_> {
    fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v = x.to_vec();
        for (row, &c) in self.radical.iter().zip(&self.pivots) {
            let k = v[c];
            if k != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = (*a + p - k * b % p) % p;
                }
            }
        }
        self.free.iter().map(|&c| v[c]).collect()
    }

    fn lift(&self, a: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.n];
        for (&c, &x) in self.free.iter().zip(a) {
            v[c] = x;
        }
        v
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce(&mul_mod(self.table, &self.lift(a), &self.lift(b), self.p))
    }

    fn dim(&self) -> usize {
        self.free.len()
    }

    fn rank_of_mult(&self, a: &[u64]) -> usize {
        let rows: Vec<Vec<u64>> = (0..self.dim())
            .map(|i| {
                let mut e = vec![0u64; self.dim()];
                e[i] = 1;
                self.mul(a, &e)
            })
            .collect();
        modp::rank(&rows, self.p)
    }
}

/// Minimal polynomial (monic, ascending coefficients) of `w` inside `eA`.
fn min_poly_in(q: &Quotient, e: &[u64], w: &[u64]) -> Vec<u64> {
    let p = q.p;
    let mut powers = vec![e.to_vec()];
    loop {
        let next = q.mul(powers.last().unwrap(), w);
        powers.push(next);
        let d = powers.len();
        if modp::rank(&powers, p) < d {
            let kernel = modp::kernel(&transpose(&powers), d, p);
            let c = &kernel[0];
            let lead = modp::inv(c[d - 1], p);
            return c.iter().map(|x| x * lead % p).collect();
        }
    }
}

/// Decomposition from the idempotents of `(O/pO)/J`; valid whenever the order
/// is `p`-maximal.
pub fn decomposition_radical(order: &Order, p: u64) -> Result<Vec<PrimeIdeal>> {
    let n = order.degree();
    let table = order.table_mod(p);
    let mut radical = modp::row_basis(&radical_mod_p(order, p), p);
    radical.retain(|r| r.iter().any(|&x| x != 0));
    let pivots: Vec<usize> = radical.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let q = Quotient { p, n, table: &table, radical, pivots, free };
    let dim = q.dim();
    let one = q.reduce(&{
        let mut v = vec![0u64; n];
        v[0] = 1;
        v
    });
    // Frobenius-fixed subalgebra ≅ 𝔽_p^k, k = number of primes above p
    let frob_rows: Vec<Vec<u64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0u64; dim];
            e[i] = 1;
            let fr = q.reduce(&pow_mod(&table, &q.lift(&e), &num_bigint::BigUint::from(p), p));
            fr.iter().zip(&e).map(|(a, b)| (a + p - b) % p).collect()
        })
        .collect();
    let fixed = modp::kernel(&transpose(&frob_rows), dim, p);
    let k = fixed.len();
    let mut idempotents = vec![one];
    for v in &fixed {
        if idempotents.len() == k {
            break;
        }
        let mut next = Vec::new();
        for e in &idempotents {
            let w = q.mul(v, e);
            let m = min_poly_in(&q, e, &w);
            let fac = factor_mod_p(&fp::lift(&m), p)?;
            let roots: Vec<u64> = fac
                .factors
                .iter()
                .map(|(g, _)| {
                    debug_assert_eq!(g.degree(), 1);
                    (p - g.coeff(0).to_u64().unwrap() % p) % p
                })
                .collect();
            if roots.len() == 1 {
                next.push(e.clone());
                continue;
            }
            for &a in &roots {
                let mut acc = e.clone();
                for &b in roots.iter().filter(|&&b| b != a) {
                    let shifted: Vec<u64> = w.iter().zip(e).map(|(x, y)| (x + p - b * y % p) % p).collect();
                    let scale = modp::inv((a + p - b) % p, p);
                    acc = q.mul(&acc, &shifted).into_iter().map(|x| x * scale % p).collect();
                }
                next.push(acc);
            }
        }
        idempotents = next;
    }
    if idempotents.len() != k {
        return Err(Error::Internal(format!("idempotent splitting above {p} incomplete")));
    }
    let mut out = Vec::new();
    for ea in &idempotents {
        let f = q.rank_of_mult(ea);
        // lift to an idempotent of O/pO
        let mut e = q.lift(ea);
        loop {
            let e2 = mul_mod(&table, &e, &e, p);
            if e2 == e {
                break;
            }
            let e3 = mul_mod(&table, &e2, &e, p);
            e = e2.iter().zip(&e3).map(|(a, b)| (3 * a + 2 * (p - b)) % p).collect();
        }
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut x = vec![0u64; n];
                x[i] = 1;
                mul_mod(&table, &x, &e, p)
            })
            .collect();
        let ef = modp::rank(&rows, p);
        // P = {x : x e ∈ J}
        let images: Vec<Vec<u64>> = rows.iter().map(|r| q.reduce(r)).collect();
        let kernel = modp::kernel(&transpose(&images), n, p);
        let ideal = Ideal::from_hnf(lift_with_p(order, &kernel, p));
        out.push(((ef / f) as u32, f as u32, ideal));
    }
    finish(order, p, out)
}

/// Prime ideals above `p` in an order that is `p`-maximal.
pub fn prime_decomposition(order: &Order, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !order.is_maximal_at(p) {
        return Err(Error::PreconditionViolated(format!("order not certified {p}-maximal")));
    }
    if equation_index(order)?.is_multiple_of(&BigInt::from(p)) {
        decomposition_radical(order, p)
    } else {
        decomposition_dedekind(order, p)
    }
}

/// Polynomial of `θ` as order coordinates.
pub fn poly_in_order(order: &Order, g: &IntPoly) -> Option<Coords> {
    let field = order.field();
    let g_rat: Vec<BigRational> = g.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    order.from_field(&field.eval_poly_at(&g_rat, &field.generator()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_i64;
    use crate::order::maximal_order;
    use std::sync::Arc;

    fn max_order(c: &[i64]) -> Order {
        maximal_order(Arc::new(make_field_i64(c).unwrap())).unwrap()
    }

    fn ef(ps: &[PrimeIdeal]) -> Vec<(u32, u32)> {
        ps.iter().map(|q| (q.e, q.f)).collect()
    }

    #[test]
    fn both_paths_agree_off_the_index() {
        for coeffs in [&[1, 1, 1, 1, 1][..], &[1, 0, 0, 0, 1], &[1, 0, -1, 0, 1], &[3, 1, 0, 0, 1]] {
            let o = max_order(coeffs);
            for p in [2u64, 3, 5, 7, 11, 13] {
                let a = decomposition_dedekind(&o, p).unwrap();
                let b = decomposition_radical(&o, p).unwrap();
                assert_eq!(ef(&a), ef(&b), "{coeffs:?} at {p}");
                let mut ia: Vec<_> = a.iter().map(|q| q.ideal.clone()).collect();
                let mut ib: Vec<_> = b.iter().map(|q| q.ideal.clone()).collect();
                ia.sort_by(|x, y| x.basis().cmp(y.basis()));
                ib.sort_by(|x, y| x.basis().cmp(y.basis()));
                assert_eq!(ia, ib);
            }
        }
    }

    #[test]
    fn index_prime_uses_radical_path() {
        // ℚ(√5, √-2): 2 divides the index of ℤ[θ]
        let o = max_order(&[4, 0, 6, 0, 1]);
        assert!(equation_index(&o).unwrap().is_multiple_of(&BigInt::from(2)));
        let ps = prime_decomposition(&o, 2).unwrap();
        let total: u32 = ps.iter().map(|q| q.e * q.f).sum();
        assert_eq!(total, 4);
        // 2 ramifies in ℚ(√-2) and is inert in ℚ(√5)
        assert_eq!(ef(&ps), vec![(2, 2)]);
    }

    #[test]
    fn product_of_primes_recovers_p() {
        let o = max_order(&[1, 0, -1, 0, 1]);
        for p in [2u64, 3, 13] {
            let ps = prime_decomposition(&o, p).unwrap();
            let prod = ps
                .iter()
                .fold(Ideal::unit(&o), |acc, q| acc.mul(&q.ideal.pow(q.e, &o), &o));
            assert_eq!(prod, Ideal::principal(&o, &o.from_int(&BigInt::from(p))).unwrap());
        }
    }

    #[test]
    fn valuations_of_p() {
        let o = max_order(&[1, 0, 0, 0, 1]);
        let ps = prime_decomposition(&o, 2).unwrap();
        assert_eq!(ef(&ps), vec![(4, 1)]);
        let two = o.from_int(&BigInt::from(2));
        assert_eq!(ps[0].valuation(&o, &two), 4);
        let theta_minus_one = poly_in_order(&o, &IntPoly::from_i64(&[-1, 1])).unwrap();
        assert_eq!(ps[0].valuation(&o, &theta_minus_one), 1);
    }
}
