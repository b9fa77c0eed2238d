//! Certified complex root enclosures.
//!
//! A [`CertifiedBall`] stores an exact dyadic center and an upper bound on
//! the distance to the true value. Root isolation refines fixed-point
//! approximations and certifies them with an exact inclusion radius: for a
//! squarefree `f` of degree `n` with approximations `z_i`, every root lies in
//! the union of the discs of radius `n |f(z_i)| / |lc ∏_{j≠i} (z_i - z_j)|`,
//! and a connected component made of `k` discs holds exactly `k` roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fixed::{scaled_to_f64, Fx};
use super::poly::IntPoly;
use crate::error::{Error, Result};

const START_BITS: u32 = 128;
const MAX_BITS: u32 = 8192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedBall {
    pub re: BigRational,
    pub im: BigRational,
    /// Upper bound on the distance from the center to the enclosed value.
    pub radius: BigRational,
    /// Working precision in bits that produced the center.
    pub prec: u32,
}

fn rat_to_f64(x: &BigRational) -> f64 {
    // scale to keep 62 significant bits
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = 62 - (nb - db);
    let scaled = if shift >= 0 {
        (x.numer() << shift as usize) / x.denom()
    } else {
        x.numer() / (x.denom() << (-shift) as usize)
    };
    scaled_to_f64(&scaled, shift)
}

/// Smallest dyadic `u = m / 2^bits` with `u >= sqrt(q)` for `q >= 0`.
fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let num = q.numer() * &scale;
    let t = num.div_ceil_floor(q.denom());
    let mut r = t.sqrt();
    if &r * &r < t {
        r += 1;
    }
    BigRational::new(r, BigInt::one() << bits as usize)
}

trait DivCeil {
    fn div_ceil_floor(&self, d: &BigInt) -> BigInt;
}

impl DivCeil for BigInt {
    fn div_ceil_floor(&self, d: &BigInt) -> BigInt {
        let (q, r) = num_integer::Integer::div_rem(self, d);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    }
}

impl CertifiedBall {
    pub fn exact(re: BigRational, im: BigRational) -> Self {
        CertifiedBall { re, im, radius: BigRational::zero(), prec: 0 }
    }

    pub fn re_f64(&self) -> f64 {
        rat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        rat_to_f64(&self.im)
    }

    pub fn radius_f64(&self) -> f64 {
        // round up
        let r = rat_to_f64(&self.radius);
        r * (1.0 + 1e-15) + f64::MIN_POSITIVE
    }

    pub fn conj(&self) -> Self {
        CertifiedBall { im: -&self.im, ..self.clone() }
    }

    /// True when the center is on the real axis (the ball is conjugation
    /// symmetric, so a single enclosed root of a real polynomial is real).
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Upper bound on the modulus of every point in the ball.
    pub fn abs_upper(&self) -> BigRational {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        sqrt_upper(&n2, 64 + self.prec) + &self.radius
    }

    pub fn center(&self, prec: u32) -> Fx {
        Fx::from_rational_pair(&self.re, &self.im, prec)
    }

    pub fn add(&self, o: &CertifiedBall) -> CertifiedBall {
        CertifiedBall {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            radius: &self.radius + &o.radius,
            prec: self.prec.min(o.prec),
        }
    }

    /// Product enclosure: `|ab - a'b'| <= |a| r_b + |b| r_a + r_a r_b`.
    pub fn mul(&self, o: &CertifiedBall) -> CertifiedBall {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let a = self.abs_upper() - &self.radius;
        let b = o.abs_upper() - &o.radius;
        let radius = &a * &o.radius + &b * &self.radius + &self.radius * &o.radius;
        CertifiedBall { re, im, radius, prec: self.prec.min(o.prec) }
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        let dr = re - &self.re;
        let di = im - &self.im;
        &dr * &dr + &di * &di <= &self.radius * &self.radius
    }
}

/// Exact value of `f` at the rational point `(re, im)`.
fn eval_exact(f: &IntPoly, re: &BigRational, im: &BigRational) -> (BigRational, BigRational) {
    let mut ar = BigRational::zero();
    let mut ai = BigRational::zero();
    for c in f.coeffs().iter().rev() {
        let nr = &ar * re - &ai * im + BigRational::from_integer(c.clone());
        let ni = &ar * im + &ai * re;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

/// Initial approximations by the Aberth iteration in double precision.
fn aberth_f64(f: &IntPoly) -> Vec<(f64, f64)> {
    let n = f.degree();
    let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let lc = c[n];
    let bound = 1.0 + c[..n].iter().map(|x| (x / lc).abs()).fold(0.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            (0.5 * bound * t.cos(), 0.5 * bound * t.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let zi = z[i];
            let mut p = (0.0, 0.0);
            let mut dp = (0.0, 0.0);
            for k in (0..=n).rev() {
                dp = cmul(dp, zi);
                dp.0 += p.0;
                dp.1 += p.1;
                p = cmul(p, zi);
                p.0 += c[k];
            }
            if p.0 == 0.0 && p.1 == 0.0 {
                continue;
            }
            let w = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let r = cdiv((1.0, 0.0), (zi.0 - zj.0, zi.1 - zj.1));
                    s.0 += r.0;
                    s.1 += r.1;
                }
            }
            let ws = cmul(w, s);
            let step = cdiv(w, (1.0 - ws.0, -ws.1));
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (zi.0 - step.0, zi.1 - step.1);
                max_step = max_step.max(step.0.hypot(step.1) / (1.0 + zi.0.hypot(zi.1)));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Aberth refinement at fixed precision.
fn aberth_fixed(f: &IntPoly, z: &mut [Fx], prec: u32) {
    let n = z.len();
    let df = f.derivative();
    let eval = |g: &IntPoly, x: &Fx| {
        let mut acc = Fx::zero(prec);
        for c in g.coeffs().iter().rev() {
            acc = acc.mul(x).add(&Fx::from_int(c, prec));
        }
        acc
    };
    let tol = BigInt::one() << 4usize;
    for _ in 0..2 * prec {
        let mut converged = true;
        for i in 0..n {
            let p = eval(f, &z[i]);
            if p.is_zero() {
                continue;
            }
            let dp = eval(&df, &z[i]);
            if dp.is_zero() {
                converged = false;
                continue;
            }
            let w = p.div(&dp);
            let mut s = Fx::zero(prec);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        s = s.add(&Fx::from_int(&BigInt::one(), prec).div(&d));
                    }
                }
            }
            let one = Fx::from_int(&BigInt::one(), prec);
            let den = one.sub(&w.mul(&s));
            let step = if den.is_zero() { w } else { w.div(&den) };
            if step.re.abs() > tol || step.im.abs() > tol {
                converged = false;
            }
            z[i] = z[i].sub(&step);
        }
        if converged {
            break;
        }
    }
}

/// Isolates the complex roots of a squarefree integer polynomial.
///
/// Balls are pairwise disjoint, each encloses exactly one root and has
/// radius at most `target_radius`. Non-real roots come as exact conjugate
/// pairs; real roots have real centers. Ordered by real part, then
/// imaginary part.
pub fn complex_roots(f: &IntPoly, target_radius: f64) -> Result<Vec<CertifiedBall>> {
    if f.degree() < 1 {
        return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
    }
    if !(target_radius > 0.0) {
        return Err(Error::InvalidArgument("target radius must be positive".into()));
    }
    if !f.is_squarefree() {
        return Err(Error::InvalidArgument(format!("{f} is not squarefree")));
    }
    let n = f.degree();
    let real_count = f.count_real_roots()?;
    let target = BigRational::from_float(target_radius).unwrap();
    let start = aberth_f64(f);
    let mut approx: Vec<Fx> = start.iter().map(|&(a, b)| Fx::from_f64(a, b, START_BITS)).collect();
    let mut bits = START_BITS;
    loop {
        let work = bits + 32;
        let mut z: Vec<Fx> = approx.iter().map(|x| x.with_prec(work)).collect();
        aberth_fixed(f, &mut z, work);
        approx = z.iter().map(|x| x.with_prec(bits)).collect();
        if let Some(balls) = certify(f, &approx, real_count, bits, &target) {
            return Ok(balls);
        }
        if n == 1 {
            // linear input is exact once the rational root is representable
            let root = BigRational::new(-f.coeff(0), f.coeff(1));
            return Ok(vec![CertifiedBall {
                re: root,
                im: BigRational::zero(),
                radius: BigRational::zero(),
                prec: bits,
            }]);
        }
        if bits >= MAX_BITS {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits *= 2;
    }
}

fn certify(
    f: &IntPoly,
    approx: &[Fx],
    real_count: usize,
    bits: u32,
    target: &BigRational,
) -> Option<Vec<CertifiedBall>> {
    let n = approx.len();
    // symmetrize: the real_count centers closest to ℝ become real, the rest
    // are paired with their conjugates
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| approx[a].im.abs().cmp(&approx[b].im.abs()));
    let mut centers: Vec<(BigRational, BigRational)> = Vec::with_capacity(n);
    for &i in &idx[..real_count] {
        let (re, _) = approx[i].to_rational_pair();
        centers.push((re, BigRational::zero()));
    }
    let mut upper: Vec<&Fx> = idx[real_count..]
        .iter()
        .map(|&i| &approx[i])
        .filter(|z| z.im.is_positive())
        .collect();
    if upper.len() * 2 != n - real_count {
        return None;
    }
    upper.sort_by(|a, b| a.re.cmp(&b.re));
    for z in upper {
        let (re, im) = z.to_rational_pair();
        centers.push((re.clone(), -&im));
        centers.push((re, im));
    }
    let lc2 = BigRational::from_integer(f.leading() * f.leading());
    let nn = BigRational::from_integer(BigInt::from((n * n) as u64));
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (fr, fi) = eval_exact(f, &centers[i].0, &centers[i].1);
        let mut prod = lc2.clone();
        for j in 0..n {
            if j != i {
                let dr = &centers[i].0 - &centers[j].0;
                let di = &centers[i].1 - &centers[j].1;
                let d2 = &dr * &dr + &di * &di;
                if d2.is_zero() {
                    return None;
                }
                prod *= d2;
            }
        }
        let r2 = (&fr * &fr + &fi * &fi) * &nn / prod;
        let r = sqrt_upper(&r2, bits + 8);
        if &r > target {
            return None;
        }
        radii.push(r);
    }
    for i in 0..n {
        for j in i + 1..n {
            let dr = &centers[i].0 - &centers[j].0;
            let di = &centers[i].1 - &centers[j].1;
            let s = &radii[i] + &radii[j];
            if &dr * &dr + &di * &di <= &s * &s {
                return None;
            }
        }
    }
    let mut balls: Vec<CertifiedBall> = centers
        .into_iter()
        .zip(radii)
        .map(|((re, im), radius)| CertifiedBall { re, im, radius, prec: bits })
        .collect();
    balls.sort_by(|a, b| match a.re.cmp(&b.re) {
        Ordering::Equal => a.im.cmp(&b.im),
        o => o,
    });
    Some(balls)
}
