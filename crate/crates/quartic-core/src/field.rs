//! Number fields of degree 2 and 4 given by a monic integer polynomial.
//!
//! Embeddings are ordered real roots first (ascending), then conjugate pairs
//! by real part, each pair as `(z, conj z)` with `Im z > 0`.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::ball::{complex_roots, CertifiedBall};
use crate::arith::fixed::Fx;
use crate::arith::primes::{exact_sqrt, factor_bigint, squarefree_part};
use crate::arith::IntPoly;
use crate::error::{Error, Result};

/// Bits carried by the embeddings computed at construction.
const BASE_BITS: u32 = 640;

#[derive(Debug)]
pub struct NumberField {
    min_poly: IntPoly,
    signature: (usize, usize),
    embeddings: Vec<CertifiedBall>,
    field_disc: OnceLock<BigInt>,
    refined: Mutex<Vec<Fx>>,
}

impl NumberField {
    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    /// `(r, s)`: real embeddings and complex pairs.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_totally_complex(&self) -> bool {
        self.signature.0 == 0
    }

    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }

    pub fn embeddings(&self) -> &[CertifiedBall] {
        &self.embeddings
    }

    pub fn key(&self) -> String {
        self.min_poly.key()
    }

    pub fn field_disc(&self) -> Option<&BigInt> {
        self.field_disc.get()
    }

    /// Records the discriminant of the maximal order (first value wins).
    pub fn set_field_disc(&self, d: BigInt) {
        let _ = self.field_disc.set(d);
    }

    /// Root approximations with at least `bits` correct bits, in embedding
    /// order.
    pub fn roots(&self, bits: u32) -> Vec<Fx> {
        if bits + 8 <= BASE_BITS {
            return self.embeddings.iter().map(|b| b.center(bits)).collect();
        }
        let mut cache = self.refined.lock().unwrap();
        if cache.first().is_none_or(|r| r.prec < bits) {
            let target = 2f64.powi(-(bits as i32 + 8).min(1000));
            let fresh = if bits + 8 > 1000 {
                refine_beyond_f64(&self.min_poly, &self.embeddings, bits + 8)
            } else {
                complex_roots(&self.min_poly, target)
                    .map(|r| match_order(&self.embeddings, r))
                    .unwrap_or_else(|_| refine_beyond_f64(&self.min_poly, &self.embeddings, bits + 8))
            };
            *cache = fresh.iter().map(|b| b.center(bits)).collect();
        }
        cache.iter().map(|z| z.with_prec(bits)).collect()
    }

    /// Values of the power-basis element `coords` under every embedding.
    pub fn embed(&self, coords: &[BigRational], bits: u32) -> Vec<Fx> {
        let roots = self.roots(bits);
        roots
            .iter()
            .map(|r| {
                let mut acc = Fx::zero(bits);
                for c in coords.iter().rev() {
                    acc = acc.mul(r).add(&Fx::from_rational(c, bits));
                }
                acc
            })
            .collect()
    }

    /// Product in the power basis.
    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, fc) in self.min_poly.coeffs()[..n].iter().enumerate() {
                prod[k - n + i] -= &c * BigRational::from_integer(fc.clone());
            }
        }
        prod.truncate(n);
        prod
    }

    /// `g(θ)` for an integer or rational polynomial given by coefficients.
    pub fn eval_poly_at(&self, poly: &[BigRational], elem: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut acc = vec![BigRational::zero(); n];
        for c in poly.iter().rev() {
            acc = self.mul(&acc, elem);
            acc[0] += c;
        }
        acc
    }

    pub fn one(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = BigRational::one();
        v
    }

    /// Power-basis coordinates of `θ`.
    pub fn generator(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[1] = BigRational::one();
        v
    }
}

fn match_order(reference: &[CertifiedBall], fresh: Vec<CertifiedBall>) -> Vec<CertifiedBall> {
    reference
        .iter()
        .map(|r| {
            fresh
                .iter()
                .min_by(|a, b| {
                    let da = (&a.re - &r.re).abs() + (&a.im - &r.im).abs();
                    let db = (&b.re - &r.re).abs() + (&b.im - &r.im).abs();
                    da.cmp(&db)
                })
                .unwrap()
                .clone()
        })
        .collect()
}

/// Newton refinement from certified starting balls when the requested
/// accuracy is below f64 range; each root is refined independently.
fn refine_beyond_f64(f: &IntPoly, start: &[CertifiedBall], bits: u32) -> Vec<CertifiedBall> {
    let work = bits + 32;
    let df = f.derivative();
    let eval = |g: &IntPoly, x: &Fx| {
        let mut acc = Fx::zero(work);
        for c in g.coeffs().iter().rev() {
            acc = acc.mul(x).add(&Fx::from_int(c, work));
        }
        acc
    };
    start
        .iter()
        .map(|b| {
            let mut z = b.center(work);
            let mut good = b.prec.max(64);
            while good < work {
                let step = eval(f, &z).div(&eval(&df, &z));
                z = z.sub(&step);
                good *= 2;
            }
            let step = eval(f, &z).div(&eval(&df, &z));
            z = z.sub(&step);
            if b.im.is_zero() {
                z.im = BigInt::zero();
            }
            let (re, im) = z.with_prec(bits).to_rational_pair();
            CertifiedBall { re, im, radius: b.radius.clone(), prec: bits }
        })
        .collect()
}

fn order_embeddings(roots: Vec<CertifiedBall>) -> Vec<CertifiedBall> {
    let mut reals: Vec<CertifiedBall> = roots.iter().filter(|b| b.is_real()).cloned().collect();
    reals.sort_by(|a, b| a.re.cmp(&b.re));
    let mut upper: Vec<CertifiedBall> = roots.into_iter().filter(|b| b.im.is_positive()).collect();
    upper.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
    let mut out = reals;
    for z in upper {
        out.push(z.clone());
        out.push(z.conj());
    }
    out
}

/// Positive divisors of `|n|`, ascending.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factor_bigint(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// Integer roots of a monic integer polynomial.
fn integer_roots(f: &IntPoly) -> Result<Vec<BigInt>> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        let mut r = integer_roots(&IntPoly::new(f.coeffs()[1..].to_vec()))?;
        r.push(BigInt::zero());
        r.sort();
        r.dedup();
        return Ok(r);
    }
    let mut out = Vec::new();
    for d in divisors(&c0)? {
        for cand in [d.clone(), -d] {
            if f.eval(&cand).is_zero() {
                out.push(cand);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Whether a monic integer quartic with no rational root splits into two
/// monic integer quadratics.
fn has_quadratic_factor(f: &IntPoly) -> Result<bool> {
    let c: Vec<BigInt> = (0..4).map(|i| f.coeff(i)).collect();
    let (c0, c1, c2, c3) = (&c[0], &c[1], &c[2], &c[3]);
    // (x^2 + a x + b)(x^2 + e x + d), b d = c0
    for db in divisors(c0)? {
        for b in [db.clone(), -db] {
            let d = c0 / &b;
            let candidates: Vec<BigInt> = if d != b {
                let num = c1 - &b * c3;
                let den = &d - &b;
                if (&num % &den).is_zero() {
                    vec![num / den]
                } else {
                    vec![]
                }
            } else {
                if *c1 != &b * c3 {
                    continue;
                }
                // a^2 - c3 a + (c2 - 2b) = 0
                let disc = c3 * c3 - BigInt::from(4) * (c2 - BigInt::from(2) * &b);
                match exact_sqrt(&disc) {
                    Some(r) => {
                        let mut v = Vec::new();
                        for s in [&r, &-r.clone()] {
                            let t = c3 + s;
                            if (&t % 2u32).is_zero() {
                                v.push(t / 2);
                            }
                        }
                        v
                    }
                    None => vec![],
                }
            };
            for a in candidates {
                let e = c3 - &a;
                if &b + &d + &a * &e == *c2 && &a * &d + &b * &e == *c1 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Builds the field defined by `coeffs` (constant term first).
pub fn make_field(coeffs: &[BigInt]) -> Result<NumberField> {
    let f = IntPoly::new(coeffs.to_vec());
    let n = f.degree();
    if f.is_zero() || (n != 2 && n != 4) {
        return Err(Error::UnsupportedDegree(n));
    }
    let f = f.canonical();
    if !f.is_monic() {
        return Err(Error::InvalidArgument(format!("{f} is not monic")));
    }
    if !integer_roots(&f)?.is_empty() {
        return Err(Error::NotAField(format!("{f} has a rational root")));
    }
    if n == 4 && has_quadratic_factor(&f)? {
        return Err(Error::NotAField(format!("{f} has a quadratic factor")));
    }
    let r = f.count_real_roots()?;
    let roots = complex_roots(&f, 2f64.powi(-(BASE_BITS as i32)))?;
    let embeddings = order_embeddings(roots);
    Ok(NumberField {
        signature: (r, (n - r) / 2),
        min_poly: f,
        embeddings,
        field_disc: OnceLock::new(),
        refined: Mutex::new(Vec::new()),
    })
}

pub fn make_field_i64(coeffs: &[i64]) -> Result<NumberField> {
    make_field(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
}

/// Squarefree `d` with `ℚ(√d) ⊂ F`, ascending. Two independent methods are
/// run and must agree.
pub fn quadratic_subfields(field: &NumberField) -> Result<Vec<BigInt>> {
    if field.degree() != 4 {
        return Err(Error::UnsupportedDegree(field.degree()));
    }
    let by_resolvent = subfields_by_resolvent(field)?;
    let by_embeddings = subfields_by_embeddings(field)?;
    if by_resolvent != by_embeddings {
        return Err(Error::NumericInconsistency(format!(
            "subfields of {}: resolvent {:?} vs embeddings {:?}",
            field.min_poly(),
            by_resolvent,
            by_embeddings
        )));
    }
    Ok(by_resolvent.into_iter().collect())
}

/// Rational roots `t` of the resolvent cubic correspond to the invariant
/// pairings of the roots; the subfield is `ℚ(r1 + r2)` or `ℚ(r1 r2)`.
pub fn subfields_by_resolvent(field: &NumberField) -> Result<BTreeSet<BigInt>> {
    let f = field.min_poly();
    let (a, b, c, d) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    let four = BigInt::from(4);
    let resolvent = IntPoly::new(vec![
        -(&a * &a * &d - &four * &b * &d + &c * &c),
        &a * &c - &four * &d,
        -b.clone(),
        BigInt::one(),
    ]);
    let mut out = BTreeSet::new();
    for t in integer_roots(&resolvent)? {
        let d1 = &a * &a - &four * (&b - &t);
        let d2 = &t * &t - &four * &d;
        let disc = if exact_sqrt(&d1).is_none() {
            d1
        } else if exact_sqrt(&d2).is_none() {
            d2
        } else {
            return Err(Error::Internal(format!("{f}: both pairing discriminants are squares")));
        };
        out.insert(squarefree_part(&disc)?);
    }
    Ok(out)
}

/// Solves the Vandermonde system `Σ c_k r_m^k = v_m` for real `c`.
pub(crate) fn interpolate(roots: &[Fx], values: &[Fx]) -> Vec<Fx> {
    let n = roots.len();
    let mut rows: Vec<Vec<Fx>> = roots
        .iter()
        .zip(values)
        .map(|(r, v)| {
            let mut row = crate::arith::fixed::powers(r, n);
            row.push(v.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| rows[i][col].abs_sqr_f64().total_cmp(&rows[j][col].abs_sqr_f64()))
            .unwrap();
        rows.swap(col, piv);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = x.div(&p);
        }
        for i in 0..n {
            if i != col {
                let f = rows[i][col].clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..=n {
                    let v = rows[col][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&v);
                }
            }
        }
    }
    rows.into_iter().map(|r| r[n].clone()).collect()
}

/// Rational reconstruction of a numerically real vector whose entries have
/// denominators dividing `den`.
pub(crate) fn reconstruct(values: &[Fx], den: &BigInt) -> Option<Vec<BigRational>> {
    let prec = values.first()?.prec;
    let tol = BigInt::one() << (prec as usize / 2);
    values
        .iter()
        .map(|v| {
            if v.im.abs() > tol {
                return None;
            }
            let scaled = &v.re * den;
            let half = BigInt::one() << (prec as usize - 1);
            let k = (&scaled + &half) >> prec as usize;
            let err = scaled - (&k << prec as usize);
            (err.abs() <= tol).then(|| BigRational::new(k, den.clone()))
        })
        .collect()
}

/// Independent check: for each pairing of the four embeddings, test whether
/// `τ ↦ r_τ + r_partner(τ)` (or the product) is a rational quadratic element
/// of `F`, verified exactly.
pub fn subfields_by_embeddings(field: &NumberField) -> Result<BTreeSet<BigInt>> {
    let bits = 512;
    let roots = field.roots(bits);
    let f = field.min_poly();
    let den = f.discriminant()?.abs();
    let mut out = BTreeSet::new();
    let pairings = [[1usize, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    for partner in pairings {
        for use_product in [false, true] {
            let values: Vec<Fx> = (0..4)
                .map(|m| {
                    if use_product {
                        roots[m].mul(&roots[partner[m]])
                    } else {
                        roots[m].add(&roots[partner[m]])
                    }
                })
                .collect();
            let coeffs = interpolate(&roots, &values);
            let Some(x) = reconstruct(&coeffs, &den) else { continue };
            if x[1..].iter().all(Zero::is_zero) {
                continue;
            }
            // exact check: x^2 + p x + q = 0 with p, q rational
            let x2 = field.mul(&x, &x);
            let Some((p, q)) = quadratic_relation(&x, &x2) else { continue };
            let disc = &p * &p - BigRational::from_integer(BigInt::from(4)) * &q;
            let num = disc.numer() * disc.denom();
            if exact_sqrt(&num).is_some() {
                continue;
            }
            out.insert(squarefree_part(&num)?);
            break;
        }
    }
    Ok(out)
}

/// `(p, q)` with `x^2 + p x + q = 0` when `1, x, x^2` are ℚ-dependent.
fn quadratic_relation(x: &[BigRational], x2: &[BigRational]) -> Option<(BigRational, BigRational)> {
    // find k >= 1 with x[k] != 0; p = -x2[k] / x[k]
    let k = (1..x.len()).find(|&k| !x[k].is_zero())?;
    let p = -&x2[k] / &x[k];
    for j in 1..x.len() {
        if x2[j].clone() + &p * &x[j] != BigRational::zero() {
            return None;
        }
    }
    let q = -(&x2[0] + &p * &x[0]);
    Some((p, q))
}

/// Largest absolute coefficient, used for canonical representative choice.
pub fn coefficient_height(f: &IntPoly) -> u64 {
    f.coeffs()
        .iter()
        .map(|c| c.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn signatures() {
        assert_eq!(make_field_i64(&[1, 0, 0, 0, 1]).unwrap().signature(), (0, 2));
        assert_eq!(make_field_i64(&[-5, 0, 1]).unwrap().signature(), (2, 0));
        assert_eq!(make_field_i64(&[1, 0, -1, 0, 1]).unwrap().signature(), (0, 2));
        assert_eq!(make_field_i64(&[-2, 0, 0, 0, 1]).unwrap().signature(), (2, 1));
    }

    #[test]
    fn rejects_reducible_and_bad_degree() {
        assert!(matches!(make_field_i64(&[-1, 0, 1]), Err(Error::NotAField(_))));
        // (x^2 + 1)(x^2 + 2)
        assert!(matches!(make_field_i64(&[2, 0, 3, 0, 1]), Err(Error::NotAField(_))));
        // (x^2 + x + 1)(x^2 - x + 2)
        let f = &IntPoly::from_i64(&[1, 1, 1]) * &IntPoly::from_i64(&[2, -1, 1]);
        assert!(matches!(make_field(f.coeffs()), Err(Error::NotAField(_))));
        assert!(matches!(make_field_i64(&[1, 1, 0, 1]), Err(Error::UnsupportedDegree(3))));
        assert!(matches!(make_field_i64(&[1, 0, 2]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn embeddings_pair_conjugates() {
        let k = make_field_i64(&[1, 1, 1, 1, 1]).unwrap();
        let e = k.embeddings();
        assert_eq!(e[1], e[0].conj());
        assert_eq!(e[3], e[2].conj());
        assert!(e[0].im.is_positive() && e[2].im.is_positive());
        assert!(e[0].re < e[2].re);
    }

    #[test]
    fn subfields_of_cyclotomic_fields() {
        let z8 = make_field_i64(&[1, 0, 0, 0, 1]).unwrap();
        assert_eq!(quadratic_subfields(&z8).unwrap(), ints(&[-2, -1, 2]));
        let z5 = make_field_i64(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(quadratic_subfields(&z5).unwrap(), ints(&[5]));
        let z12 = make_field_i64(&[1, 0, -1, 0, 1]).unwrap();
        assert_eq!(quadratic_subfields(&z12).unwrap(), ints(&[-3, -1, 3]));
    }

    #[test]
    fn s4_quartic_has_no_quadratic_subfield() {
        // x^4 + x + 1: resolvent cubic y^3 - 4y - 1 irreducible
        let k = make_field_i64(&[1, 1, 0, 0, 1]).unwrap();
        assert!(quadratic_subfields(&k).unwrap().is_empty());
    }

    #[test]
    fn refined_roots_agree() {
        let k = make_field_i64(&[2, 0, 1, 0, 1]).unwrap();
        let lo = k.roots(256);
        let hi = k.roots(2048);
        for (a, b) in lo.iter().zip(&hi) {
            assert!((a.re_f64() - b.re_f64()).abs() < 1e-15);
            assert!((a.im_f64() - b.im_f64()).abs() < 1e-15);
        }
    }
}
