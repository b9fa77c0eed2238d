//! Splitting of rational primes and the non-decomposition filter.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{factor_mod_p, IntPoly};
use crate::arith::primes::is_prime;
use crate::error::{Error, Result};
use crate::field::{quadratic_subfields, NumberField};
use crate::ideal::{equation_index, prime_decomposition};
use crate::order::{order_maximal_at, Order};

/// `(e, f)` pairs of the primes above `p`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub p: u64,
    pub pairs: Vec<(u32, u32)>,
}

impl SplittingType {
    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|(e, f)| e * f).sum()
    }

    pub fn is_non_decomposed(&self) -> bool {
        self.pairs.len() == 1
    }

    pub fn is_ramified(&self) -> bool {
        self.pairs.iter().any(|&(e, _)| e > 1)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(e, g)| format!("{e}^{g}")).collect();
        write!(f, "{}:[{}]", self.p, parts.join(","))
    }
}

/// Splitting of `p` in the `p`-maximal order.
pub fn splitting_type(order: &Order, p: u64) -> Result<SplittingType> {
    let mut pairs: Vec<(u32, u32)> = prime_decomposition(order, p)?.iter().map(|q| (q.e, q.f)).collect();
    pairs.sort_unstable();
    Ok(SplittingType { p, pairs })
}

/// Splitting read from the factorization of the minimal polynomial; valid
/// when `p` does not divide the equation-order index.
pub fn splitting_type_from_polynomial(order: &Order, p: u64) -> Result<SplittingType> {
    if equation_index(order)?.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::PreconditionViolated(format!("{p} divides the equation-order index")));
    }
    let fac = factor_mod_p(order.field().min_poly(), p)?;
    let mut pairs: Vec<(u32, u32)> = fac.factors.iter().map(|(g, e)| (*e as u32, g.degree() as u32)).collect();
    pairs.sort_unstable();
    Ok(SplittingType { p, pairs })
}

pub fn is_non_decomposed(order: &Order, p: u64) -> Result<bool> {
    Ok(splitting_type(order, p)?.is_non_decomposed())
}

/// Whether `f mod p` has two distinct irreducible factors. Coprime factors
/// lift to `ℤ_p`, so `p` then has at least two primes above it in every
/// order of `ℚ[x]/f`.
pub fn decomposed_mod_p(f: &IntPoly, p: u64) -> Result<bool> {
    Ok(factor_mod_p(f, p)?.factors.len() > 1)
}

/// Validated set of primes: nonempty, even cardinality, distinct primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSet(BTreeSet<u64>);

impl PrimeSet {
    pub fn new(primes: &[u64]) -> Result<PrimeSet> {
        let set: BTreeSet<u64> = primes.iter().copied().collect();
        if set.len() != primes.len() {
            return Err(Error::InvalidS(format!("repeated prime in {primes:?}")));
        }
        if let Some(q) = set.iter().find(|&&q| !is_prime(q)) {
            return Err(Error::InvalidS(format!("{q} is not prime")));
        }
        if set.is_empty() || set.len() % 2 == 1 {
            return Err(Error::InvalidS(format!("S must have even positive size, got {}", set.len())));
        }
        Ok(PrimeSet(set))
    }

    pub fn primes(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.contains(&p)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `∏_{p ∈ S} f_p` over the unique primes above each `p ∈ S`.
pub fn lambda_s(order: &Order, s: &PrimeSet) -> Result<u64> {
    let mut acc = 1u64;
    for p in s.primes() {
        let st = splitting_type(order, p)?;
        if !st.is_non_decomposed() {
            return Err(Error::FieldNotInC(p));
        }
        acc *= st.pairs[0].1 as u64;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldClass {
    /// No real quadratic subfield.
    Cc,
    /// Contains a real quadratic subfield.
    Cr,
    NotInC,
}

impl fmt::Display for FieldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldClass::Cc => "Cc",
            FieldClass::Cr => "Cr",
            FieldClass::NotInC => "NotInC",
        })
    }
}

pub fn classify_field(field: &Arc<NumberField>, s: &PrimeSet) -> Result<FieldClass> {
    if field.degree() != 4 {
        return Err(Error::UnsupportedDegree(field.degree()));
    }
    if !field.is_totally_complex() {
        return Ok(FieldClass::NotInC);
    }
    let order = order_maximal_at(field.clone(), &s.primes(), false)?;
    classify_order(&order, s)
}

/// Same as [`classify_field`] for an order already maximal at `S`.
pub fn classify_order(order: &Order, s: &PrimeSet) -> Result<FieldClass> {
    let field = order.field();
    if field.degree() != 4 {
        return Err(Error::UnsupportedDegree(field.degree()));
    }
    if !field.is_totally_complex() {
        return Ok(FieldClass::NotInC);
    }
    for p in s.primes() {
        if !is_non_decomposed(order, p)? {
            return Ok(FieldClass::NotInC);
        }
    }
    Ok(if quadratic_subfields(field)?.iter().any(|d| d > &BigInt::from(0)) {
        FieldClass::Cr
    } else {
        FieldClass::Cc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_i64;
    use crate::order::maximal_order;

    fn max_order(c: &[i64]) -> Order {
        maximal_order(Arc::new(make_field_i64(c).unwrap())).unwrap()
    }

    #[test]
    fn cyclotomic_splitting() {
        let z5 = max_order(&[1, 1, 1, 1, 1]);
        assert_eq!(splitting_type(&z5, 2).unwrap().pairs, vec![(1, 4)]);
        let z8 = max_order(&[1, 0, 0, 0, 1]);
        assert_eq!(splitting_type(&z8, 2).unwrap().pairs, vec![(4, 1)]);
        let q5 = max_order(&[-5, 0, 1]);
        assert_eq!(splitting_type(&q5, 11).unwrap().pairs, vec![(1, 1), (1, 1)]);
        assert!(!is_non_decomposed(&q5, 11).unwrap());
    }

    #[test]
    fn hensel_prefilter_agrees() {
        for c in [[1i64, 0, 0, 0, 1], [1, 1, 1, 1, 1], [2, 0, 0, 0, 1], [3, 1, 0, 0, 1], [7, -2, 3, 1, 1]] {
            let f = IntPoly::from_i64(&c);
            let o = max_order(&c);
            for p in [2u64, 3, 5, 7] {
                if decomposed_mod_p(&f, p).unwrap() {
                    assert!(!is_non_decomposed(&o, p).unwrap(), "{c:?} at {p}");
                }
            }
        }
    }

    #[test]
    fn lambda_values() {
        let s = PrimeSet::new(&[2, 3]).unwrap();
        assert_eq!(lambda_s(&max_order(&[1, 1, 1, 1, 1]), &s).unwrap(), 16);
        // 3 splits into two primes of degree 2 in ℚ(ζ8)
        let z8 = max_order(&[1, 0, 0, 0, 1]);
        assert_eq!(splitting_type(&z8, 3).unwrap().pairs, vec![(1, 2), (1, 2)]);
        assert!(matches!(lambda_s(&z8, &s), Err(Error::FieldNotInC(3))));
        assert!(matches!(PrimeSet::new(&[2]), Err(Error::InvalidS(_))));
        assert!(matches!(PrimeSet::new(&[]), Err(Error::InvalidS(_))));
        assert!(matches!(PrimeSet::new(&[2, 4]), Err(Error::InvalidS(_))));
        // the first decomposed prime is reported
        let z12 = max_order(&[1, 0, -1, 0, 1]);
        assert_eq!(splitting_type(&z12, 13).unwrap().pairs, vec![(1, 1); 4]);
        let s = PrimeSet::new(&[2, 13]).unwrap();
        assert!(matches!(lambda_s(&z12, &s), Err(Error::FieldNotInC(13))));
        assert_eq!(lambda_s(&z12, &PrimeSet::new(&[2, 3]).unwrap()).unwrap(), 4);
    }

    #[test]
    fn unmaximized_order_is_rejected() {
        let k = Arc::new(make_field_i64(&[-5, 0, 1]).unwrap());
        let eq = crate::order::equation_order(k).unwrap();
        assert!(matches!(splitting_type(&eq, 2), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn classification() {
        let s = PrimeSet::new(&[2, 3]).unwrap();
        let z5 = Arc::new(make_field_i64(&[1, 1, 1, 1, 1]).unwrap());
        assert_eq!(classify_field(&z5, &s).unwrap(), FieldClass::Cr);
        let z12 = Arc::new(make_field_i64(&[1, 0, -1, 0, 1]).unwrap());
        // biquadratic: only the ramified primes 2 and 3 are non-decomposed
        assert_eq!(classify_field(&z12, &s).unwrap(), FieldClass::Cr);
        assert_eq!(classify_field(&z12, &PrimeSet::new(&[5, 7]).unwrap()).unwrap(), FieldClass::NotInC);
        let real = Arc::new(make_field_i64(&[-2, 0, 0, 0, 1]).unwrap());
        assert_eq!(classify_field(&real, &s).unwrap(), FieldClass::NotInC);
    }
}
