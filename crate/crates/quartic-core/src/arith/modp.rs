//! Polynomials over 𝔽_p and their factorization into irreducibles.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::linalg::modp::inv;
use super::poly::IntPoly;
use super::primes::is_prime;
use crate::error::{Error, Result};

/// Polynomial over 𝔽_p as coefficient vector (constant first, trimmed).
pub type Fp = Vec<u64>;

pub fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn reduce(f: &IntPoly, p: u64) -> Fp {
    let bp = BigInt::from(p);
    trim(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c % &bp;
                let r = if r < BigInt::zero() { r + &bp } else { r };
                r.to_u64().unwrap()
            })
            .collect(),
    )
}

pub fn lift(a: &[u64]) -> IntPoly {
    IntPoly::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

fn deg(a: &[u64]) -> usize {
    a.len().saturating_sub(1)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = deg(b);
    let il = inv(*b.last().unwrap(), p);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * il % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &y) in b.iter().enumerate() {
            r[i - db + j] = (r[i - db + j] + p - c * y % p) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let il = inv(l, p);
            a.iter().map(|&c| c * il % p).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

pub fn powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Fp {
    let mut acc: Fp = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
    }
    acc
}

/// `x^(p^k) mod m` by repeated p-th powering.
fn frobenius_x(k: usize, m: &[u64], p: u64) -> Fp {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = powmod(&x, &BigUint::from(p), m, p);
    }
    x
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
/// `f = prod g^e`, each `g` squarefree.
fn squarefree_decomposition(f: &[u64], p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let fp = derivative(f, p);
    if fp.is_empty() {
        // f = g(x^p); over 𝔽_p the p-th root acts on exponents only
        let g: Fp = f.iter().step_by(p as usize).copied().collect();
        for (h, e) in squarefree_decomposition(&g, p) {
            out.push((h, e * p as usize));
        }
        return out;
    }
    let mut c = gcd(f, &fp, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1;
    while deg(&w) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z) > 0 {
            out.push((monic(&z, p), i));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if deg(&c) > 0 {
        for (h, e) in squarefree_decomposition(&c, p) {
            out.push((h, e));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut d = 1;
    let mut xp = rem(&[0, 1], &rest, p);
    while deg(&rest) >= 2 * d {
        xp = powmod(&xp, &BigUint::from(p), &rest, p);
        let g = gcd(&rest, &sub(&xp, &[0, 1], p), p);
        if deg(&g) > 0 {
            out.push((g.clone(), d));
            rest = divrem(&rest, &g, p).0;
            xp = rem(&xp, &rest, p);
        }
        d += 1;
    }
    if deg(&rest) > 0 {
        let dr = deg(&rest);
        out.push((monic(&rest, p), dr));
    }
    out
}

/// Deterministic sequence of trial splitting polynomials: the base-p digits
/// of `index` as coefficients.
fn trial_poly(index: u64, p: u64) -> Fp {
    let mut out = Vec::new();
    let mut k = index;
    while k > 0 {
        out.push(k % p);
        k /= p;
    }
    trim(out)
}

/// Equal-degree splitting of a squarefree monic product of degree-`d`
/// irreducibles.
fn equal_degree(f: &[u64], d: usize, p: u64) -> Vec<Fp> {
    if deg(f) == d {
        return vec![f.to_vec()];
    }
    let mut index = p; // start at x
    loop {
        let t = trial_poly(index, p);
        index += 1;
        if deg(&t) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map t + t^2 + ... + t^(2^(d-1))
            let mut acc = rem(&t, f, p);
            let mut cur = acc.clone();
            for _ in 1..d {
                cur = rem(&mul(&cur, &cur, p), f, p);
                acc = add(&acc, &cur, p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            sub(&powmod(&t, &e, f, p), &[1], p)
        };
        let g = gcd(f, &candidate, p);
        if deg(&g) > 0 && deg(&g) < deg(f) {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p);
            out.extend(equal_degree(&monic(&h, p), d, p));
            return out;
        }
    }
}

/// Irreducibility test over 𝔽_p (Rabin).
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = deg(f);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = monic(f, p);
    if frobenius_x(n, &f, p) != rem(&[0, 1], &f, p) {
        return false;
    }
    super::primes::factor_u64(n as u64).iter().all(|&(q, _)| {
        let h = sub(&frobenius_x(n / q as usize, &f, p), &[0, 1], p);
        gcd(&f, &h, p) == vec![1]
    })
}

/// Factorization of `f mod p` into monic irreducibles with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPFactorization {
    pub p: u64,
    /// Leading coefficient of `f mod p`.
    pub unit: u64,
    /// Monic irreducible factors (coefficients in `0..p`) with multiplicities,
    /// ordered by degree, then lexicographically on coefficients.
    pub factors: Vec<(IntPoly, usize)>,
}

impl ModPFactorization {
    /// Reassembles `unit * prod g^e mod p`.
    pub fn product(&self) -> IntPoly {
        let mut acc: Fp = vec![self.unit];
        for (g, e) in &self.factors {
            let gp = reduce(g, self.p);
            for _ in 0..*e {
                acc = mul(&acc, &gp, self.p);
            }
        }
        lift(&acc)
    }
}

/// Factors `f` over 𝔽_p.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<ModPFactorization> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p >= 1 << 31 {
        return Err(Error::InvalidArgument(format!("prime {p} too large")));
    }
    let fp = reduce(f, p);
    if fp.is_empty() {
        return Err(Error::InvalidArgument(format!("{f} vanishes mod {p}")));
    }
    let unit = *fp.last().unwrap();
    let fm = monic(&fp, p);
    let mut factors: Vec<(Fp, usize)> = Vec::new();
    for (g, e) in squarefree_decomposition(&fm, p) {
        for (h, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, d, p) {
                match factors.iter_mut().find(|(x, _)| *x == irr) {
                    Some((_, m)) => *m += e,
                    None => factors.push((irr, e)),
                }
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| deg(a).cmp(&deg(b)).then_with(|| a.cmp(b)));
    Ok(ModPFactorization {
        p,
        unit,
        factors: factors.into_iter().map(|(g, e)| (lift(&g), e)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = deg(f);
        // try every monic divisor of degree 1..=n/2
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for k in 0..count {
                let mut g = trial_poly(k, p);
                g.resize(d, 0);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        n > 0
    }

    #[test]
    fn cyclotomic_five_is_inert_at_two() {
        let fac = factor_mod_p(&p(&[1, 1, 1, 1, 1]), 2).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1, 1, 1, 1]), 1)]);
        assert!(brute_irreducible(&[1, 1, 1, 1, 1], 2));
    }

    #[test]
    fn x4_plus_1_mod_2_is_fourth_power() {
        let fac = factor_mod_p(&p(&[1, 0, 0, 0, 1]), 2).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 4)]);
    }

    #[test]
    fn x2_minus_1_mod_5() {
        let fac = factor_mod_p(&p(&[-1, 0, 1]), 5).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 1), (p(&[4, 1]), 1)]);
    }

    #[test]
    fn x4_plus_1_mod_3_splits_in_quadratics() {
        let fac = factor_mod_p(&p(&[1, 0, 0, 0, 1]), 3).unwrap();
        assert_eq!(fac.factors, vec![(p(&[2, 1, 1]), 1), (p(&[2, 2, 1]), 1)]);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(factor_mod_p(&p(&[1, 1]), 4).is_err());
    }

    #[test]
    fn factors_are_irreducible_by_brute_force() {
        for (f, q) in [
            (p(&[3, 1, 4, 1, 5, 9, 2]), 7u64),
            (p(&[1, 0, 1, 0, 0, 0, 0, 0, 1]), 2),
            (p(&[2, 3, 0, 1, 1]), 3),
            (p(&[1, 1, 1, 1, 1, 1, 1]), 13),
        ] {
            let fac = factor_mod_p(&f, q).unwrap();
            assert_eq!(fac.product(), lift(&reduce(&f, q)));
            for (g, _) in &fac.factors {
                let gp = reduce(g, q);
                assert!(brute_irreducible(&gp, q));
                assert!(is_irreducible(&gp, q));
            }
        }
    }
}
