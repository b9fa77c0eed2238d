//! Fixed-point complex numbers at an explicit binary precision.
//!
//! Values are `(re + i im) / 2^prec` with integer `re`, `im`. Arithmetic
//! truncates, so results are approximations; certified statements are made
//! elsewhere with exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx {
    pub re: BigInt,
    pub im: BigInt,
    pub prec: u32,
}

/// `x / 2^shift` as f64 without overflow in the intermediate conversion.
pub fn scaled_to_f64(x: &BigInt, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits() as i64;
    let drop = (bits - 62).max(0);
    let top = (x >> drop as usize).to_f64().unwrap();
    let e = drop - shift;
    top * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

/// `(m, k)` with `|x| = m 2^k`, `m` in `[1, 2)`, for nonzero `x`.
fn mantissa_exponent(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    let drop = (bits - 62).max(0);
    let top = (x.abs() >> drop as usize).to_f64().unwrap();
    let k = bits - 1;
    (top / 2f64.powi((k - drop) as i32), k)
}

impl Fx {
    pub fn zero(prec: u32) -> Self {
        Fx { re: BigInt::zero(), im: BigInt::zero(), prec }
    }

    pub fn from_int(x: &BigInt, prec: u32) -> Self {
        Fx { re: x << prec as usize, im: BigInt::zero(), prec }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        Fx {
            re: (x.numer() << prec as usize) / x.denom(),
            im: BigInt::zero(),
            prec,
        }
    }

    pub fn from_rational_pair(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        Fx {
            re: (re.numer() << prec as usize) / re.denom(),
            im: (im.numer() << prec as usize) / im.denom(),
            prec,
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let conv = |v: f64| {
            let r = BigRational::from_float(v).unwrap_or_else(BigRational::zero);
            (r.numer() << prec as usize) / r.denom()
        };
        Fx { re: conv(re), im: conv(im), prec }
    }

    /// Same value at another precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let shift = |x: &BigInt| {
            if prec >= self.prec {
                x << (prec - self.prec) as usize
            } else {
                x >> (self.prec - prec) as usize
            }
        };
        Fx { re: shift(&self.re), im: shift(&self.im), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im, prec: self.prec }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im, prec: self.prec }
    }

    pub fn neg(&self) -> Fx {
        Fx { re: -&self.re, im: -&self.im, prec: self.prec }
    }

    pub fn conj(&self) -> Fx {
        Fx { re: self.re.clone(), im: -&self.im, prec: self.prec }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        let p = self.prec as usize;
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> p,
            im: (&self.re * &o.im + &self.im * &o.re) >> p,
            prec: self.prec,
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Fx {
        Fx { re: &self.re * k, im: &self.im * k, prec: self.prec }
    }

    pub fn div(&self, o: &Fx) -> Fx {
        let p = self.prec as usize;
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            panic!("fixed-point division by zero");
        }
        let nr = &self.re * &o.re + &self.im * &o.im;
        let ni = &self.im * &o.re - &self.re * &o.im;
        Fx { re: (nr << p) / &den, im: (ni << p) / &den, prec: self.prec }
    }

    /// `|z|^2` as a fixed-point real.
    pub fn norm_sqr(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> self.prec as usize
    }

    pub fn re_f64(&self) -> f64 {
        scaled_to_f64(&self.re, self.prec as i64)
    }

    pub fn im_f64(&self) -> f64 {
        scaled_to_f64(&self.im, self.prec as i64)
    }

    /// `ln |z|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, k) = mantissa_exponent(&n);
        0.5 * (m.ln() + (k - 2 * self.prec as i64) as f64 * std::f64::consts::LN_2)
    }

    /// `|z|^2` as f64 (may overflow to infinity for huge values).
    pub fn abs_sqr_f64(&self) -> f64 {
        let n = &self.re * &self.re + &self.im * &self.im;
        scaled_to_f64(&n, 2 * self.prec as i64)
    }

    pub fn arg(&self) -> f64 {
        let bits = self.re.bits().max(self.im.bits()) as i64;
        let shift = (bits - 62).max(0);
        let y = scaled_to_f64(&self.im, shift);
        let x = scaled_to_f64(&self.re, shift);
        y.atan2(x)
    }

    /// Unit-modulus phase `z / |z|` as f64 pair.
    pub fn phase(&self) -> (f64, f64) {
        let a = self.arg();
        (a.cos(), a.sin())
    }

    pub fn to_rational_pair(&self) -> (BigRational, BigRational) {
        let den = BigInt::from(1) << self.prec as usize;
        (
            BigRational::new(self.re.clone(), den.clone()),
            BigRational::new(self.im.clone(), den),
        )
    }
}

/// Evaluates a rational polynomial at `z` by Horner's rule.
pub fn eval_ratpoly(f: &RatPoly, z: &Fx) -> Fx {
    let mut acc = Fx::zero(z.prec);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Fx::from_rational(c, z.prec));
    }
    acc
}

/// Powers `1, z, ..., z^(n-1)`.
pub fn powers(z: &Fx, n: usize) -> Vec<Fx> {
    let mut out = Vec::with_capacity(n);
    let mut cur = Fx::from_int(&BigInt::from(1), z.prec);
    for _ in 0..n {
        out.push(cur.clone());
        cur = cur.mul(z);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_roundtrip() {
        let prec = 200;
        let a = Fx::from_f64(1.5, -2.0, prec);
        let b = Fx::from_f64(0.25, 3.0, prec);
        let q = a.mul(&b).div(&b);
        assert!((q.re_f64() - 1.5).abs() < 1e-15);
        assert!((q.im_f64() + 2.0).abs() < 1e-15);
        assert!((a.ln_abs() - 2.5f64.ln()).abs() < 1e-15);
        assert!((Fx::from_f64(0.0, 1.0, prec).arg() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn huge_values_convert() {
        let x = Fx::from_int(&(BigInt::from(1) << 3000usize), 64);
        assert!((x.ln_abs() - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!(x.re_f64().is_infinite());
    }
}
