//! Binary quadratic forms `a x² + b xy + c y²` of discriminant `D = b² - 4ac`:
//! reduced forms, cycles, composition, class numbers and continued-fraction
//! regulators of quadratic orders.

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The form with `a = 1` (principal class).
    pub fn principal(d: i64) -> Form {
        let b = if d.rem_euclid(2) == 0 { 0 } else { 1 };
        Form { a: 1, b, c: (b * b - d) / 4 }
    }

    pub fn inverse(&self) -> Form {
        Form { a: self.a, b: -self.b, c: self.c }
    }
}

/// Whether `d` is a discriminant of a quadratic order: `d ≡ 0, 1 mod 4`,
/// not a square.
pub fn is_discriminant(d: i64) -> bool {
    let r = d.rem_euclid(4);
    (r == 0 || r == 1) && !(d >= 0 && isqrt(d) * isqrt(d) == d)
}

/// Whether `d` is the discriminant of a maximal quadratic order.
pub fn is_fundamental(d: i64) -> bool {
    if !is_discriminant(d) {
        return false;
    }
    let squarefree = |m: i64| {
        let m = m.abs();
        let mut q = 2;
        while q * q <= m {
            if m % (q * q) == 0 {
                return false;
            }
            q += 1;
        }
        true
    };
    if d.rem_euclid(4) == 1 {
        squarefree(d)
    } else {
        let m = d / 4;
        (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3) && squarefree(m)
    }
}

pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest-prime-factor table, for fast divisor enumeration.
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Sieve {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        if n as usize >= self.spf.len() {
            return crate::arith::primes::factor_u64(n);
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Positive divisors of `n`.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut out = vec![1u64];
        for (p, e) in self.factor(n) {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }
}

/// Whether an indefinite form is reduced: `|√D - 2|a|| < b < √D`.
pub fn is_reduced_indefinite(f: &Form, d: i64) -> bool {
    let (a, b) = (f.a.abs() as i128, f.b as i128);
    let d = d as i128;
    if b <= 0 || b * b >= d {
        return false;
    }
    let lo = 2 * a + b; // 2|a| > √D - b
    let hi = 2 * a - b; // 2|a| < √D + b
    lo * lo > d && (hi <= 0 || hi * hi < d)
}

/// All primitive reduced forms of positive non-square discriminant `d`.
pub fn reduced_indefinite_forms(d: i64, sieve: &Sieve) -> Vec<Form> {
    let mut out = Vec::new();
    let s = isqrt(d);
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        if b * b < d {
            let m = (d - b * b) / 4;
            for a in sieve.divisors(m as u64) {
                let a = a as i64;
                for sa in [a, -a] {
                    let f = Form { a: sa, b, c: -m / sa };
                    if is_reduced_indefinite(&f, d) && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
        }
        b += 2;
    }
    out.sort();
    out
}

/// `r ≡ -b mod 2c` in the normalization range used by `ρ`.
fn rho_b(b: i64, c: i64, d: i64, s: i64) -> i64 {
    let m = 2 * c.abs();
    let sqrt_d = (d as f64).sqrt();
    if (c.abs() as f64) > sqrt_d {
        // -|c| < r <= |c|
        let mut r = (-b).rem_euclid(m);
        if r > c.abs() {
            r -= m;
        }
        r
    } else {
        // √D - 2|c| < r < √D: the largest r ≡ -b mod 2|c| with r <= s
        let base = (-b).rem_euclid(m);
        let mut r = s - (s - base).rem_euclid(m);
        if r * r == d {
            r -= m;
        }
        r
    }
}

/// The reduction operator `ρ(a, b, c) = (c, r, (r² - D)/4c)`.
pub fn rho(f: &Form, d: i64, s: i64) -> Form {
    let r = rho_b(f.b, f.c, d, s);
    Form { a: f.c, b: r, c: (r * r - d) / (4 * f.c) }
}

/// Reduces an indefinite form by iterating `ρ`.
pub fn reduce_indefinite(f: &Form, d: i64) -> Form {
    let s = isqrt(d);
    let mut g = *f;
    let mut steps = 0;
    while !is_reduced_indefinite(&g, d) {
        g = rho(&g, d, s);
        steps += 1;
        assert!(steps < 10_000, "indefinite reduction did not terminate");
    }
    g
}

/// Reduces a positive definite form: `|b| <= a <= c`, `b >= 0` if either
/// inequality is an equality.
pub fn reduce_definite(f: &Form) -> Form {
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        if b.abs() > a {
            // b ← b mod 2a into (-a, a]
            let m = 2 * a;
            let mut r = b.rem_euclid(m);
            if r > a {
                r -= m;
            }
            let k = (r - b) / m; // b + 2ak
            c += k * (b + a * k);
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if (b.abs() == a || a == c) && b < 0 {
            b = -b;
        }
        if b.abs() <= a && a <= c {
            return Form { a, b, c };
        }
    }
}

/// Primitive reduced positive definite forms of negative discriminant `d`.
pub fn reduced_definite_forms(d: i64, sieve: &Sieve) -> Vec<Form> {
    let mut out = Vec::new();
    let bmax = isqrt(-d / 3);
    let mut b = if d.rem_euclid(2) == 0 { 0 } else { 1 };
    while b <= bmax {
        let m = (b * b - d) / 4;
        for a in sieve.divisors(m as u64) {
            let a = a as i64;
            let c = m / a;
            if a < b || a > c {
                continue;
            }
            for sb in if b == 0 || a == b || a == c { vec![b] } else { vec![b, -b] } {
                let f = Form { a, b: sb, c };
                if f.is_primitive() {
                    out.push(f);
                }
            }
        }
        b += 2;
    }
    out.sort();
    out
}

/// Composition of primitive forms of the same discriminant (Dirichlet,
/// Shanks' arrangement), not reduced.
pub fn compose(f1: &Form, f2: &Form) -> Form {
    let disc = f1.disc() as i128;
    let (f1, f2) = if f1.a.abs() > f2.a.abs() { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let e = a2.extended_gcd(&a1);
        (e.x, e.gcd)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let e = s.extended_gcd(&d);
        (e.x, -e.y, e.gcd)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1.abs());
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    Form { a: a3 as i64, b: b3 as i64, c: c3 as i64 }
}

/// Continued-fraction data of the order of discriminant `d > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CfUnit {
    pub period: usize,
    /// `N(ε) = (-1)^period`.
    pub norm: i32,
    /// `log ε` for the fundamental unit `ε > 1`.
    pub regulator: f64,
}

/// Expands `(b₀ + √D)/2` with `b₀` the largest integer below `√D` of the
/// parity of `D`; the expansion is purely periodic and the product of the
/// complete quotients over one period is the fundamental unit.
pub fn cf_unit(d: i64) -> Result<CfUnit> {
    if d <= 0 || !is_discriminant(d) {
        return Err(Error::InvalidArgument(format!("{d} is not a positive discriminant")));
    }
    let s = isqrt(d);
    let b0 = if (s - d).rem_euclid(2) == 0 { s } else { s - 1 };
    let b0 = if b0 * b0 == d { b0 - 2 } else { b0 };
    let sqrt_d = (d as f64).sqrt();
    let (p0, q0) = (b0, 2i64);
    let (mut p, mut q) = (p0, q0);
    let mut log_sum = 0.0;
    let mut comp = 0.0;
    let mut period = 0;
    loop {
        // complete quotient (p + √D)/q
        let term = ((p as f64 + sqrt_d) / q as f64).ln();
        // Kahan summation keeps long periods accurate
        let y = term - comp;
        let t = log_sum + y;
        comp = (t - log_sum) - y;
        log_sum = t;
        let a = (p + s).div_euclid(q);
        let p_next = a * q - p;
        let q_next = (d - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        period += 1;
        if (p, q) == (p0, q0) {
            break;
        }
    }
    Ok(CfUnit { period, norm: if period % 2 == 0 { 1 } else { -1 }, regulator: log_sum })
}

/// The cycles of `ρ` on reduced indefinite forms; their number is the narrow
/// class number.
pub fn indefinite_cycles(d: i64, sieve: &Sieve) -> Vec<Vec<Form>> {
    let forms = reduced_indefinite_forms(d, sieve);
    let s = isqrt(d);
    let mut seen: HashMap<Form, usize> = HashMap::with_capacity(forms.len());
    let mut cycles = Vec::new();
    for f in forms {
        if seen.contains_key(&f) {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut g = f;
        loop {
            seen.insert(g, id);
            cycle.push(g);
            g = rho(&g, d, s);
            if g == f {
                break;
            }
            debug_assert!(is_reduced_indefinite(&g, d));
        }
        cycles.push(cycle);
    }
    cycles
}

/// Class number and regulator of the quadratic order of discriminant `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticClassData {
    pub d: i64,
    pub h: u64,
    pub narrow_h: u64,
    pub regulator: Option<f64>,
    pub unit_norm: Option<i32>,
}

pub fn quadratic_class_data(d: i64, sieve: &Sieve) -> Result<QuadraticClassData> {
    if !is_discriminant(d) {
        return Err(Error::InvalidArgument(format!("{d} is not a discriminant")));
    }
    if d < 0 {
        let h = reduced_definite_forms(d, sieve).len() as u64;
        return Ok(QuadraticClassData { d, h, narrow_h: h, regulator: None, unit_norm: None });
    }
    let narrow_h = indefinite_cycles(d, sieve).len() as u64;
    let cf = cf_unit(d)?;
    let h = if cf.norm == -1 { narrow_h } else { narrow_h / 2 };
    Ok(QuadraticClassData { d, h, narrow_h, regulator: Some(cf.regulator), unit_norm: Some(cf.norm) })
}

/// Invariant factors `d₁ | d₂ | ...` (all > 1) of a finite abelian group
/// given the number of elements of each order.
pub fn invariants_from_orders(orders: &[u64]) -> Vec<u64> {
    let h = orders.len() as u64;
    let mut factors_by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in crate::arith::primes::factor_u64(h) {
        // |G[p^k]| = p^{Σ min(k, λ_i)}: recover the partition λ
        let count = |k: u32| orders.iter().filter(|&&o| p.pow(k) % o == 0).count() as u64;
        let mut prev = 1u64;
        let mut at_least = Vec::new(); // number of λ_i >= k
        for k in 1..=e {
            let c = count(k);
            let ratio = c / prev;
            at_least.push(ratio.trailing_zeros_base(p));
            prev = c;
        }
        let mut parts = Vec::new();
        let kmax = at_least.len();
        for k in 0..kmax {
            let here = at_least[k];
            let next = if k + 1 < kmax { at_least[k + 1] } else { 0 };
            for _ in 0..(here - next) {
                parts.push(k as u32 + 1);
            }
        }
        factors_by_prime.push((p, parts));
    }
    let rank = factors_by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; rank];
    for (p, mut parts) in factors_by_prime {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in parts.into_iter().enumerate() {
            out[rank - 1 - i] *= p.pow(e);
        }
    }
    out.retain(|&x| x > 1);
    out
}

trait LogBase {
    fn trailing_zeros_base(self, p: u64) -> u32;
}

impl LogBase for u64 {
    fn trailing_zeros_base(mut self, p: u64) -> u32 {
        let mut k = 0;
        while self > 1 && self.is_multiple_of(p) {
            self /= p;
            k += 1;
        }
        k
    }
}

/// Structure of the (wide) class group of discriminant `d` from forms.
pub fn class_group_structure(d: i64, sieve: &Sieve) -> Result<Vec<u64>> {
    if !is_discriminant(d) {
        return Err(Error::InvalidArgument(format!("{d} is not a discriminant")));
    }
    if d < 0 {
        let forms = reduced_definite_forms(d, sieve);
        let id = reduce_definite(&Form::principal(d));
        let orders: Vec<u64> = forms
            .iter()
            .map(|f| {
                let mut g = *f;
                let mut k = 1;
                while g != id {
                    g = reduce_definite(&compose(&g, f));
                    k += 1;
                }
                k
            })
            .collect();
        return Ok(invariants_from_orders(&orders));
    }
    let cycles = indefinite_cycles(d, sieve);
    let mut index: HashMap<Form, usize> = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for f in c {
            index.insert(*f, i);
        }
    }
    let class_of = |f: &Form| index[&reduce_indefinite(f, d)];
    let id = class_of(&Form::principal(d));
    // the class of the ideals with negative-norm generators
    let p = Form::principal(d);
    let minus = class_of(&Form { a: -p.a, b: p.b, c: -p.c });
    let trivial = |c: usize| c == id || c == minus;
    let reps: Vec<Form> = cycles.iter().map(|c| c[0]).collect();
    let mut cosets: Vec<usize> = Vec::new();
    let mut seen = vec![false; cycles.len()];
    for (i, f) in reps.iter().enumerate() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let partner = class_of(&compose(f, &Form { a: -p.a, b: p.b, c: -p.c }));
        seen[partner] = true;
        cosets.push(i);
    }
    let orders: Vec<u64> = cosets
        .iter()
        .map(|&i| {
            let f = reps[i];
            let mut g = f;
            let mut k = 1;
            while !trivial(class_of(&g)) {
                g = reduce_indefinite(&compose(&g, &f), d);
                k += 1;
            }
            k
        })
        .collect();
    Ok(invariants_from_orders(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_class_numbers() {
        let sieve = Sieve::new(10_000);
        let h = |d| quadratic_class_data(d, &sieve).unwrap().h;
        assert_eq!(h(5), 1);
        assert_eq!(h(40), 2);
        assert_eq!(h(8), 1);
        assert_eq!(h(12), 1);
        assert_eq!(h(60), 2);
        assert_eq!(h(229), 3);
        assert_eq!(h(-4), 1);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-23), 3);
        assert_eq!(h(-47), 5);
        assert_eq!(h(-56), 4);
        assert_eq!(h(-84), 4);
        assert_eq!(h(-163), 1);
        // non-maximal: ℤ[√-3] has class number 1, ℤ[3i] (D = -36) has 2
        assert_eq!(h(-12), 1);
        assert_eq!(h(-36), 2);
    }

    #[test]
    fn cf_regulators() {
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let u = cf_unit(5).unwrap();
        assert!((u.regulator - golden).abs() < 1e-14);
        assert_eq!(u.norm, -1);
        let u = cf_unit(40).unwrap();
        assert!((u.regulator - (3.0 + 10f64.sqrt()).ln()).abs() < 1e-13);
        assert_eq!(u.norm, -1);
        // ε = 2 + √3 for D = 12
        let u = cf_unit(12).unwrap();
        assert!((u.regulator - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-13);
        assert_eq!(u.norm, 1);
        // ℤ[√5] (D = 20): ε = 2 + √5 = φ³
        assert!((cf_unit(20).unwrap().regulator - 3.0 * golden).abs() < 1e-13);
    }

    #[test]
    fn group_structures() {
        let sieve = Sieve::new(100_000);
        assert_eq!(class_group_structure(-56, &sieve).unwrap(), vec![4]);
        assert_eq!(class_group_structure(-84, &sieve).unwrap(), vec![2, 2]);
        assert_eq!(class_group_structure(-23, &sieve).unwrap(), vec![3]);
        assert_eq!(class_group_structure(-4, &sieve).unwrap(), Vec::<u64>::new());
        // D = -4·65 = -260: Cl ≅ ℤ/2 × ℤ/4
        assert_eq!(class_group_structure(-260, &sieve).unwrap(), vec![2, 4]);
        assert_eq!(class_group_structure(40, &sieve).unwrap(), vec![2]);
        assert_eq!(class_group_structure(229, &sieve).unwrap(), vec![3]);
        assert_eq!(class_group_structure(5, &sieve).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn composition_with_identity_and_inverse() {
        let d = -47;
        let id = reduce_definite(&Form::principal(d));
        let sieve = Sieve::new(100);
        for f in reduced_definite_forms(d, &sieve) {
            assert_eq!(reduce_definite(&compose(&f, &id)), f);
            assert_eq!(reduce_definite(&compose(&f, &f.inverse())), id);
        }
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental(5) && is_fundamental(8) && is_fundamental(-4) && is_fundamental(-3));
        assert!(!is_fundamental(20) && !is_fundamental(9) && !is_fundamental(-12) && !is_fundamental(7));
        assert!(is_fundamental(40) && is_fundamental(12) && !is_fundamental(16));
    }
}
