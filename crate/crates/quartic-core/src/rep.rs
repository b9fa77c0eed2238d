//! Characters of `K_M = (SO(2) × SO(2)) ⋊ {1, T}`: exterior powers of the
//! adjoint modules, their decompositions into irreducibles, the virtual
//! module `σ̃` and the Weyl-denominator integral.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Irreducible representations of `K_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KmType {
    Triv,
    /// `(X, Y) ↦ det X` on the swap coset.
    Delta,
    /// Two-dimensional `δ_{l,k}`, stored with the first nonzero index positive
    /// since `δ_{l,k} ≅ δ_{-l,-k}`.
    Pair(i32, i32),
}

/// The two components of `K_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Identity,
    Swap,
}

impl KmType {
    pub fn pair(l: i32, k: i32) -> Result<KmType> {
        if l == 0 && k == 0 {
            return Err(Error::InvalidArgument("δ_{0,0} is not irreducible".into()));
        }
        Ok(if l < 0 || (l == 0 && k < 0) { KmType::Pair(-l, -k) } else { KmType::Pair(l, k) })
    }

    pub fn dim(&self) -> i64 {
        match self {
            KmType::Pair(..) => 2,
            _ => 1,
        }
    }

    /// Character value at `R(θ, φ)` or at `T·R(θ, φ)`.
    pub fn character(&self, theta: f64, phi: f64, component: Component) -> f64 {
        match (self, component) {
            (KmType::Triv, _) => 1.0,
            (KmType::Delta, Component::Identity) => 1.0,
            (KmType::Delta, Component::Swap) => -1.0,
            (KmType::Pair(l, k), Component::Identity) => 2.0 * (*l as f64 * theta + *k as f64 * phi).cos(),
            (KmType::Pair(..), Component::Swap) => 0.0,
        }
    }

    fn as_character(&self) -> Character {
        let mut torus = BTreeMap::new();
        let swap = match self {
            KmType::Triv => {
                torus.insert((0, 0), 1);
                1
            }
            KmType::Delta => {
                torus.insert((0, 0), 1);
                -1
            }
            KmType::Pair(l, k) => {
                torus.insert((*l, *k), 1);
                torus.insert((-l, -k), 1);
                0
            }
        };
        Character { torus, swap }
    }
}

impl fmt::Display for KmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmType::Triv => f.write_str("triv"),
            KmType::Delta => f.write_str("delta"),
            KmType::Pair(l, k) => write!(f, "delta({l},{k})"),
        }
    }
}

/// Virtual character: a Laurent polynomial in `e^{iθ}, e^{iφ}` on the
/// identity component, and its (constant) value on the swap coset. Every
/// element of the coset squares to the identity, so coset values of the
/// modules considered here do not depend on the angles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Character {
    torus: BTreeMap<(i32, i32), i64>,
    swap: i64,
}

impl Character {
    pub fn zero() -> Character {
        Character::default()
    }

    pub fn dim(&self) -> i64 {
        self.torus.values().sum()
    }

    pub fn swap_value(&self) -> i64 {
        self.swap
    }

    pub fn coefficient(&self, l: i32, k: i32) -> i64 {
        self.torus.get(&(l, k)).copied().unwrap_or(0)
    }

    fn trimmed(mut self) -> Character {
        self.torus.retain(|_, c| *c != 0);
        self
    }

    pub fn add(&self, other: &Character) -> Character {
        let mut out = self.clone();
        for (e, c) in &other.torus {
            *out.torus.entry(*e).or_insert(0) += c;
        }
        out.swap += other.swap;
        out.trimmed()
    }

    pub fn scale(&self, k: i64) -> Character {
        Character { torus: self.torus.iter().map(|(e, c)| (*e, c * k)).collect(), swap: self.swap * k }.trimmed()
    }

    /// Character of the tensor product.
    pub fn mul(&self, other: &Character) -> Character {
        let mut torus = BTreeMap::new();
        for ((a, b), c) in &self.torus {
            for ((x, y), d) in &other.torus {
                *torus.entry((a + x, b + y)).or_insert(0) += c * d;
            }
        }
        Character { torus, swap: self.swap * other.swap }.trimmed()
    }

    /// `g ↦ χ(g^k)`.
    fn adams(&self, k: i32) -> Character {
        let torus = self.torus.iter().map(|((a, b), c)| ((a * k, b * k), *c)).collect();
        let swap = if k % 2 == 0 { self.dim() } else { self.swap };
        Character { torus, swap }
    }

    fn divide_exact(&self, n: i64) -> Result<Character> {
        let bad = self.torus.values().any(|c| c % n != 0) || self.swap % n != 0;
        if bad {
            return Err(Error::Internal(format!("Newton recursion produced a non-integral character at step {n}")));
        }
        Ok(Character { torus: self.torus.iter().map(|(e, c)| (*e, c / n)).collect(), swap: self.swap / n })
    }

    /// `Λⁿ` through Newton's identities `n eₙ = Σ (-1)^{i-1} e_{n-i} p_i`.
    pub fn exterior_power(&self, n: usize) -> Result<Character> {
        let mut e = vec![KmType::Triv.as_character()];
        for m in 1..=n {
            let mut acc = Character::zero();
            for i in 1..=m {
                let term = e[m - i].mul(&self.adams(i as i32));
                acc = acc.add(&if i % 2 == 1 { term } else { term.scale(-1) });
            }
            e.push(acc.divide_exact(m as i64)?);
        }
        Ok(e.swap_remove(n))
    }

    /// Value at `R(θ, φ)` or `T·R(θ, φ)`.
    pub fn eval(&self, theta: f64, phi: f64, component: Component) -> f64 {
        match component {
            Component::Identity => self
                .torus
                .iter()
                .map(|((a, b), c)| *c as f64 * (*a as f64 * theta + *b as f64 * phi).cos())
                .sum(),
            Component::Swap => self.swap as f64,
        }
    }

    /// Multiplicities of the irreducibles, from the orthogonality relations
    /// on both components.
    pub fn decompose(&self) -> Result<VirtualDecomposition> {
        let mut out = BTreeMap::new();
        let c0 = self.coefficient(0, 0);
        let half = |x: i64, what: &str| {
            if x % 2 != 0 {
                Err(Error::Internal(format!("non-integral multiplicity of {what}")))
            } else {
                Ok(x / 2)
            }
        };
        let triv = half(c0 + self.swap, "triv")?;
        let delta = half(c0 - self.swap, "delta")?;
        for (t, m) in [(KmType::Triv, triv), (KmType::Delta, delta)] {
            if m != 0 {
                out.insert(t, m);
            }
        }
        for (&(l, k), &c) in &self.torus {
            if (l, k) == (0, 0) {
                continue;
            }
            if self.coefficient(-l, -k) != c {
                return Err(Error::Internal("character is not self-conjugate".into()));
            }
            let t = KmType::pair(l, k)?;
            if t == KmType::Pair(l, k) {
                out.insert(t, c);
            }
        }
        Ok(VirtualDecomposition(out))
    }
}

/// Integer multiplicities of irreducibles (negative for virtual modules).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VirtualDecomposition(pub BTreeMap<KmType, i64>);

impl VirtualDecomposition {
    pub fn from_pairs(pairs: &[(KmType, i64)]) -> VirtualDecomposition {
        let mut map = BTreeMap::new();
        for (t, m) in pairs {
            *map.entry(*t).or_insert(0) += m;
        }
        map.retain(|_, m| *m != 0);
        VirtualDecomposition(map)
    }

    pub fn multiplicity(&self, t: KmType) -> i64 {
        self.0.get(&t).copied().unwrap_or(0)
    }

    pub fn character(&self) -> Character {
        self.0.iter().fold(Character::zero(), |acc, (t, m)| acc.add(&t.as_character().scale(*m)))
    }

    pub fn dim(&self) -> i64 {
        self.0.iter().map(|(t, m)| t.dim() * m).sum()
    }

    pub fn is_genuine(&self) -> bool {
        self.0.values().all(|m| *m >= 0)
    }
}

impl fmt::Display for VirtualDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(t, m)| if *m == 1 { t.to_string() } else { format!("{m}{t}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The two adjoint modules whose exterior powers are decomposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// `𝔭_M ≅ δ_{2,0} ⊕ δ_{0,2}`.
    PM,
    /// `𝔪 ≅ 2δ ⊕ δ_{2,0} ⊕ δ_{0,2}`.
    M,
}

impl Space {
    pub fn seed(&self) -> VirtualDecomposition {
        let mut pairs = vec![(KmType::Pair(2, 0), 1), (KmType::Pair(0, 2), 1)];
        if *self == Space::M {
            pairs.push((KmType::Delta, 2));
        }
        VirtualDecomposition::from_pairs(&pairs)
    }

    pub fn dim(&self) -> usize {
        self.seed().dim() as usize
    }
}

pub fn decompose_exterior(space: Space, n: usize) -> Result<VirtualDecomposition> {
    if n > space.dim() {
        return Err(Error::InvalidArgument(format!("Λ^{n} of a {}-dimensional module", space.dim())));
    }
    space.seed().character().exterior_power(n)?.decompose()
}

/// Coefficients `a₀..a₄` of the virtual module `σ̃ = Σ a_{4-n} Λⁿ𝔪`.
pub const A_COEFFS: [i64; 5] = [1, -3, 6, -10, 15];

fn binomial2(m: usize) -> i64 {
    [1, 2, 1].get(m).copied().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AkReport {
    /// `Σ_{m<=k} a_{k-m} C(2, m) - (-1)^k` for `k = 0..4`.
    pub residuals: Vec<i64>,
    /// Largest deviation between `Σ a_{4-n} χ(Λⁿ𝔪)` and `det(1 - b | 𝔪/𝔟)`
    /// over the angle grid.
    pub character_residual: f64,
}

impl AkReport {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| *r == 0) && self.character_residual < 1e-12
    }
}

/// Character of `σ̃ = Σ a_{4-n} Λⁿ𝔪`.
pub fn sigma_tilde_character() -> Result<Character> {
    let m = Space::M.seed().character();
    let mut acc = Character::zero();
    for (n, a) in A_COEFFS.iter().rev().enumerate() {
        acc = acc.add(&m.exterior_power(n)?.scale(*a));
    }
    Ok(acc)
}

/// `det(1 - b | 𝔪/𝔟)` from the eigenvalues `e^{±2iθ}, e^{±2iφ}`.
fn det_one_minus(theta: f64, phi: f64) -> f64 {
    let mut prod = (1.0f64, 0.0f64);
    for a in [2.0 * theta, -2.0 * theta, 2.0 * phi, -2.0 * phi] {
        let t = (1.0 - a.cos(), -a.sin());
        prod = (prod.0 * t.0 - prod.1 * t.1, prod.0 * t.1 + prod.1 * t.0);
    }
    prod.0
}

pub fn verify_ak_identity() -> Result<AkReport> {
    let residuals = (0..5)
        .map(|k| {
            let sum: i64 = (0..=k).map(|m| A_COEFFS[k - m] * binomial2(m)).sum();
            sum - if k % 2 == 0 { 1 } else { -1 }
        })
        .collect();
    let sigma = sigma_tilde_character()?;
    let mut worst = 0.0f64;
    let steps = 12;
    for i in 0..steps {
        for j in 0..steps {
            let theta = 2.0 * PI * i as f64 / steps as f64;
            let phi = 2.0 * PI * j as f64 / steps as f64;
            worst = worst.max((sigma.eval(theta, phi, Component::Identity) - det_one_minus(theta, phi)).abs());
        }
    }
    Ok(AkReport { residuals, character_residual: worst })
}

/// Both evaluations of `tr σ̃(b)`: the virtual character sum and the
/// closed form `4(1 - cos 2θ)(1 - cos 2φ)`.
pub fn sigma_tilde_trace_both(theta: f64, phi: f64) -> Result<(f64, f64)> {
    let sum = sigma_tilde_character()?.eval(theta, phi, Component::Identity);
    Ok((sum, sigma_tilde_closed(theta, phi)))
}

pub fn sigma_tilde_closed(theta: f64, phi: f64) -> f64 {
    4.0 * (1.0 - (2.0 * theta).cos()) * (1.0 - (2.0 * phi).cos())
}

/// `tr σ̃(b)`; the character sum is checked against the closed form.
pub fn sigma_tilde_trace(theta: f64, phi: f64) -> Result<f64> {
    let (sum, closed) = sigma_tilde_trace_both(theta, phi)?;
    if (sum - closed).abs() > 1e-12 {
        return Err(Error::NumericInconsistency(format!("σ̃ trace {sum} vs closed form {closed}")));
    }
    Ok(closed)
}

/// `(1/|W|) (1/4π²) ∬ |D(θ, φ)|² dθ dφ` with `D = -4 sin θ sin φ` and
/// `|W| = 2`, by the trapezoid rule (exact for trigonometric polynomials of
/// degree below the grid size).
pub fn weyl_integral(grid_size: usize) -> Result<f64> {
    if grid_size < 4 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} < 4")));
    }
    let h = 2.0 * PI / grid_size as f64;
    let mut sum = 0.0;
    for i in 0..grid_size {
        for j in 0..grid_size {
            let d = -4.0 * (i as f64 * h).sin() * (j as f64 * h).sin();
            sum += d * d;
        }
    }
    Ok(0.5 * sum / (grid_size * grid_size) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(pairs: &[(KmType, i64)]) -> VirtualDecomposition {
        VirtualDecomposition::from_pairs(pairs)
    }

    #[test]
    fn character_values() {
        let d22 = KmType::pair(2, 2).unwrap();
        assert_eq!(d22.character(0.0, 0.0, Component::Identity), 2.0);
        assert_eq!(KmType::Delta.character(0.3, 0.1, Component::Swap), -1.0);
        let d20 = KmType::pair(2, 0).unwrap();
        assert!((d20.character(PI / 2.0, 0.0, Component::Identity) + 2.0).abs() < 1e-15);
        assert_eq!(KmType::pair(-2, 2).unwrap(), KmType::Pair(2, -2));
        assert!(KmType::pair(0, 0).is_err());
    }

    #[test]
    fn swap_characters_square_consistently() {
        // χ(T²) = χ(1) = dim for every irreducible, via the Adams operation
        for t in [KmType::Triv, KmType::Delta, KmType::Pair(2, 0), KmType::Pair(1, -3)] {
            let c = t.as_character();
            assert_eq!(c.adams(2).swap_value(), t.dim());
        }
    }

    #[test]
    fn small_exterior_powers() {
        assert_eq!(decompose_exterior(Space::PM, 0).unwrap(), dec(&[(KmType::Triv, 1)]));
        assert_eq!(
            decompose_exterior(Space::PM, 2).unwrap(),
            dec(&[(KmType::Delta, 2), (KmType::Pair(2, 2), 1), (KmType::Pair(2, -2), 1)])
        );
        assert_eq!(
            decompose_exterior(Space::M, 1).unwrap(),
            dec(&[(KmType::Delta, 2), (KmType::Pair(2, 0), 1), (KmType::Pair(0, 2), 1)])
        );
        assert!(decompose_exterior(Space::PM, 5).is_err());
    }

    #[test]
    fn full_tables() {
        use KmType::*;
        let pair = [(Pair(2, 0), 1), (Pair(0, 2), 1)];
        let pm = [
            dec(&[(Triv, 1)]),
            dec(&pair),
            dec(&[(Delta, 2), (Pair(2, 2), 1), (Pair(2, -2), 1)]),
            dec(&pair),
            dec(&[(Triv, 1)]),
        ];
        for (n, want) in pm.iter().enumerate() {
            assert_eq!(&decompose_exterior(Space::PM, n).unwrap(), want, "pM, n = {n}");
        }
        let middle = [(Triv, 1), (Delta, 2), (Pair(2, 0), 2), (Pair(0, 2), 2), (Pair(2, 2), 1), (Pair(2, -2), 1)];
        let m = [
            dec(&[(Triv, 1)]),
            dec(&[(Delta, 2), (Pair(2, 0), 1), (Pair(0, 2), 1)]),
            dec(&middle),
            dec(&[(Triv, 4), (Pair(2, 0), 2), (Pair(0, 2), 2), (Pair(2, 2), 2), (Pair(2, -2), 2)]),
            dec(&middle),
            dec(&[(Delta, 2), (Pair(2, 0), 1), (Pair(0, 2), 1)]),
            dec(&[(Triv, 1)]),
        ];
        for (n, want) in m.iter().enumerate() {
            assert_eq!(&decompose_exterior(Space::M, n).unwrap(), want, "m, n = {n}");
        }
    }

    #[test]
    fn structural_invariants() {
        for space in [Space::PM, Space::M] {
            let d = space.dim();
            let total: i64 = (0..=d).map(|n| decompose_exterior(space, n).unwrap().dim()).sum();
            assert_eq!(total, 1 << d);
            for n in 0..=d {
                let a = decompose_exterior(space, n).unwrap();
                assert!(a.is_genuine());
                // top power is trivial on both components, so Λⁿ ≅ Λ^{d-n}
                assert_eq!(a, decompose_exterior(space, d - n).unwrap());
            }
        }
    }

    #[test]
    fn ak_identity() {
        let r = verify_ak_identity().unwrap();
        assert_eq!(r.residuals, vec![0; 5]);
        assert!(r.holds());
        // k = 3: a₃ + 2a₂ + a₁ = -1
        assert_eq!(A_COEFFS[3] + 2 * A_COEFFS[2] + A_COEFFS[1], -1);
    }

    #[test]
    fn sigma_tilde_values() {
        assert!((sigma_tilde_trace(PI / 2.0, PI / 2.0).unwrap() - 16.0).abs() < 1e-12);
        assert!(sigma_tilde_trace(0.0, 1.234).unwrap().abs() < 1e-12);
        assert!((sigma_tilde_trace(PI / 3.0, PI / 4.0).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_integral_is_two() {
        for g in [4, 5, 8, 13] {
            assert!((weyl_integral(g).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!(weyl_integral(3).is_err());
        // trapezoid check of ∫₀^{2π} sin² = π
        let n = 8;
        let s: f64 = (0..n).map(|i| (2.0 * PI * i as f64 / n as f64).sin().powi(2)).sum::<f64>() * 2.0 * PI / n as f64;
        assert!((s - PI).abs() < 1e-12);
    }
}
