//! Closed geodesics attached to units of totally complex quartic orders:
//! the regular-representation matrix of a unit, its eigenvalue normal form
//! `{a e^{±iθ}, a^{-1} e^{±iφ}}`, length, norm, `tr σ̃` and class weights.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::linalg::det_bigint;
use crate::arith::{complex_roots, CertifiedBall};
use crate::error::{Error, Result};
use crate::invariants::OrderInvariants;
use crate::order::Order;
use crate::rep::sigma_tilde_closed;
use crate::splitting::FieldClass;
use crate::units::{square_root_quartic, UnitData};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Tolerance for membership of `θ ± φ` in `(π/2)ℤ ∪ (π/3)ℤ`.
pub const ANGLE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicClass {
    /// Modulus of the contracting pair, in `(0, 1)`.
    pub a: f64,
    /// Argument of the contracting pair, in `[0, π]`.
    pub theta: f64,
    /// Argument of the expanding pair, in `[0, π]`.
    pub phi: f64,
    /// `8 |log a|`.
    pub length: f64,
    /// `e^{length}`.
    pub n_gamma: f64,
    pub trace_sigma_tilde: f64,
    /// `det(1 - b | 𝔪/𝔟)` as a product over the four adjoint eigenvalues.
    pub trace_product: f64,
    /// `1/μ`.
    pub chi1: BigRational,
    /// `4 h λ_S μ / κ` when those invariants are known.
    pub weight: Option<BigRational>,
}

impl GeodesicClass {
    /// Attaches the class multiplicity `4 h λ_S μ / κ`.
    pub fn with_weight(mut self, h: u64, lambda_s: u64, mu: u32, kappa: u32) -> Result<Self> {
        if kappa == 0 || mu == 0 {
            return Err(Error::InvalidArgument("μ and κ must be positive".into()));
        }
        self.weight = Some(BigRational::new(BigInt::from(4 * h * lambda_s * mu as u64), BigInt::from(kappa)));
        Ok(self)
    }

    /// `Σ χ₁` over the classes of the order: `weight · χ₁`.
    pub fn euler_weight(&self) -> Option<BigRational> {
        self.weight.as_ref().map(|w| w * &self.chi1)
    }
}

/// Matrix of multiplication by `unit` in the integral basis (row `j` holds
/// `unit · ω_j`).
pub fn unit_matrix(order: &Order, unit: &[BigInt]) -> Result<IntMatrix> {
    if unit.len() != order.degree() {
        return Err(Error::InvalidArgument(format!("element has {} coordinates", unit.len())));
    }
    let m = order.mult_matrix(unit);
    let det = det_bigint(&m);
    if det.abs() != BigInt::one() {
        return Err(Error::InvalidArgument(format!("element has norm {det}, not a unit")));
    }
    Ok(m)
}

/// Eigenvalues of the unit matrix, with multiplicity, as f64 pairs.
fn eigenvalues(m: &IntMatrix) -> Result<Vec<(f64, f64)>> {
    let cp = crate::arith::linalg::charpoly(m);
    let height = cp.coeffs().iter().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).fold(1.0, f64::max);
    // roots of a monic polynomial with unit constant term have modulus at least 1/(1 + height)
    let radius = 1e-20 / (1.0 + height);
    let center = |b: &CertifiedBall| (b.re_f64(), b.im_f64());
    if cp.is_squarefree() {
        return Ok(complex_roots(&cp, radius)?.iter().map(center).collect());
    }
    let root = square_root_quartic(&cp).ok_or_else(|| Error::ShapeViolation(format!("characteristic polynomial {cp}")))?;
    let half: Vec<(f64, f64)> = complex_roots(&root, radius)?.iter().map(center).collect();
    Ok(half.iter().chain(half.iter()).copied().collect())
}

fn modulus(z: (f64, f64)) -> f64 {
    z.0.hypot(z.1)
}

/// Eigenvalue normal form of the unit matrix of `units.fund_unit`.
pub fn geodesic_data(order: &Order, units: &UnitData) -> Result<GeodesicClass> {
    geodesic_of_unit(order, &units.fund_unit, units.mu)
}

/// Eigenvalue normal form of an arbitrary unit of a totally complex quartic
/// order with `mu` roots of unity.
pub fn geodesic_of_unit(order: &Order, unit: &[BigInt], mu: u32) -> Result<GeodesicClass> {
    if order.degree() != 4 || !order.field().is_totally_complex() {
        return Err(Error::PreconditionViolated("geodesics need a totally complex quartic order".into()));
    }
    let m = unit_matrix(order, unit)?;
    let mut eig = eigenvalues(&m)?;
    eig.sort_by(|x, y| modulus(*x).total_cmp(&modulus(*y)));
    let (small, large) = (&eig[..2], &eig[2..]);
    let a = modulus(small[0]);
    if (a - 1.0).abs() < 1e-12 && eig.iter().all(|z| (modulus(*z) - 1.0).abs() < 1e-12) {
        return Err(Error::NotAGeodesic);
    }
    let pair_ok = |p: &[(f64, f64)]| {
        let tol = 1e-9 * modulus(p[0]).max(1.0);
        (p[0].0 - p[1].0).abs() < tol && (p[0].1 + p[1].1).abs() < tol
    };
    if !pair_ok(small) || !pair_ok(large) {
        return Err(Error::ShapeViolation(format!("eigenvalues {eig:?} are not two conjugate pairs")));
    }
    let b = modulus(large[0]);
    if !(a < 1.0) || ((a * b) - 1.0).abs() > 1e-9 {
        return Err(Error::ShapeViolation(format!("moduli {a} and {b} are not a, 1/a")));
    }
    let theta = small[0].1.atan2(small[0].0).abs();
    let phi = large[0].1.atan2(large[0].0).abs();
    let length = -8.0 * a.ln();
    let product = adjoint_product(theta, phi);
    Ok(GeodesicClass {
        a,
        theta,
        phi,
        length,
        n_gamma: length.exp(),
        trace_sigma_tilde: sigma_tilde_closed(theta, phi),
        trace_product: product,
        chi1: BigRational::new(BigInt::one(), BigInt::from(mu)),
        weight: None,
    })
}

/// `∏ (1 - λ)` over `λ ∈ {e^{±2iθ}, e^{±2iφ}}`.
fn adjoint_product(theta: f64, phi: f64) -> f64 {
    let mut prod = (1.0f64, 0.0f64);
    for t in [2.0 * theta, -2.0 * theta, 2.0 * phi, -2.0 * phi] {
        let f = (1.0 - t.cos(), -t.sin());
        prod = (prod.0 * f.0 - prod.1 * f.1, prod.0 * f.1 + prod.1 * f.0);
    }
    prod.0
}

/// Distance from `x` to `(π/2)ℤ ∪ (π/3)ℤ`.
pub fn angle_lattice_distance(x: f64) -> f64 {
    [PI / 2.0, PI / 3.0]
        .iter()
        .map(|step| {
            let k = (x / step).round();
            (x - k * step).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Whether `θ + φ` or `θ - φ` lies in `(π/2)ℤ ∪ (π/3)ℤ`.
pub fn angle_condition(theta: f64, phi: f64) -> bool {
    angle_lattice_distance(theta + phi).min(angle_lattice_distance(theta - phi)) < ANGLE_TOLERANCE
}

/// Measured values behind the five structural checks.
#[derive(Clone, Debug)]
pub struct CorrespondenceReport {
    pub geodesic: GeodesicClass,
    pub det: BigInt,
    /// `|N(γ) e^{-4R} - 1|`.
    pub norm_rel_error: f64,
    pub angle_distance: f64,
    pub weakly_neat: bool,
}

fn violation(identity: &str, detail: String) -> Error {
    Error::CorrespondenceViolation { identity: identity.into(), detail }
}

/// Checks the unit determinant, `N(γ) = e^{4R}`, `tr σ̃ ∈ (0, 16]`, the
/// angle condition for `κ > 1` and weak neatness against the class.
pub fn check_correspondence(row: &OrderInvariants) -> Result<CorrespondenceReport> {
    let detail = row
        .detail
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolated(format!("{}: no unit data", row.field_key)))?;
    if row.class != Some(FieldClass::Cc) {
        return Err(Error::PreconditionViolated(format!("{} is {:?}, not Cc", row.field_key, row.class)));
    }
    let order = &detail.order;
    let units = &detail.units;
    let m = unit_matrix(order, &units.fund_unit)?;
    let det = det_bigint(&m);
    if det != BigInt::one() {
        return Err(violation("det", format!("determinant {det}")));
    }
    let mut g = geodesic_data(order, units)?;
    if let (Some(h), Some(l), Some(k)) = (row.h, row.lambda_s, row.kappa) {
        g = g.with_weight(h, l, units.mu, k)?;
    }
    let reg = row.regulator.unwrap_or(units.regulator);
    let norm_rel_error = (g.length - 4.0 * reg).exp_m1().abs();
    if norm_rel_error > 1e-9 {
        return Err(violation("norm", format!("N(γ) = e^{} vs e^{{4R}} = e^{}", g.length, 4.0 * reg)));
    }
    if (g.trace_sigma_tilde - g.trace_product).abs() > 1e-9 {
        return Err(violation("trace", format!("closed {} vs product {}", g.trace_sigma_tilde, g.trace_product)));
    }
    if !(g.trace_sigma_tilde > 1e-12 && g.trace_sigma_tilde <= 16.0 + 1e-12) {
        return Err(violation("trace", format!("tr σ̃ = {} outside (0, 16]", g.trace_sigma_tilde)));
    }
    let angle_distance = angle_lattice_distance(g.theta + g.phi).min(angle_lattice_distance(g.theta - g.phi));
    if row.kappa.is_some_and(|k| k > 1) && angle_distance >= ANGLE_TOLERANCE {
        return Err(violation(
            "angle",
            format!("κ = {:?} but θ = {}, φ = {} miss the lattice by {angle_distance}", row.kappa, g.theta, g.phi),
        ));
    }
    if !detail.weakly_neat {
        return Err(violation("weakly-neat", "a torsion multiple of a unit power is real".into()));
    }
    Ok(CorrespondenceReport { geodesic: g, det, norm_rel_error, angle_distance, weakly_neat: detail.weakly_neat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_i64;
    use crate::order::maximal_order;
    use crate::units::fundamental_unit;
    use std::sync::Arc;

    fn max_order(c: &[i64]) -> Order {
        maximal_order(Arc::new(make_field_i64(c).unwrap())).unwrap()
    }

    #[test]
    fn identity_and_torsion_matrices() {
        let o = max_order(&[1, 1, 1, 1, 1]);
        let id = unit_matrix(&o, &o.one()).unwrap();
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as i64));
            }
        }
        let u = fundamental_unit(&o).unwrap();
        let z = o.pow(&u.torsion_gen, u.mu as u64);
        assert_eq!(unit_matrix(&o, &z).unwrap(), id);
        assert!(matches!(geodesic_of_unit(&o, &u.torsion_gen, u.mu), Err(Error::NotAGeodesic)));
        assert!(unit_matrix(&o, &o.from_int(&BigInt::from(2))).is_err());
    }

    #[test]
    fn cyclotomic_five_unit() {
        let o = max_order(&[1, 1, 1, 1, 1]);
        let u = fundamental_unit(&o).unwrap();
        let m = unit_matrix(&o, &u.fund_unit).unwrap();
        assert_eq!(det_bigint(&m), BigInt::one());
        assert_eq!(crate::arith::linalg::charpoly(&m), o.charpoly(&u.fund_unit));
        let g = geodesic_data(&o, &u).unwrap();
        assert!((g.length - 4.0 * u.regulator).abs() < 1e-9);
        assert!((g.n_gamma / (4.0 * u.regulator).exp() - 1.0).abs() < 1e-9);
        // ε is a root of unity times a real unit: θ = π/5, φ = 2π/5, so the
        // lattice condition fails outside C^c even though κ = 4
        assert!((g.theta - PI / 5.0).abs() < 1e-9 && (g.phi - 2.0 * PI / 5.0).abs() < 1e-9);
        assert!(!angle_condition(g.theta, g.phi));
        assert_eq!(g.chi1, BigRational::new(BigInt::one(), BigInt::from(10)));
        let g = g.with_weight(1, 16, 10, 4).unwrap();
        assert_eq!(g.euler_weight().unwrap(), BigRational::from_integer(BigInt::from(16)));
    }

    #[test]
    fn sigma_tilde_at_right_angles() {
        assert!((sigma_tilde_closed(PI / 2.0, PI / 2.0) - 16.0).abs() < 1e-12);
        assert!((adjoint_product(PI / 2.0, PI / 2.0) - 16.0).abs() < 1e-12);
        assert!((adjoint_product(0.4, 1.9) - sigma_tilde_closed(0.4, 1.9)).abs() < 1e-12);
    }

    #[test]
    fn angle_lattice() {
        assert!(angle_condition(PI / 3.0 + 0.1, 0.1));
        assert!(angle_condition(0.7, PI / 2.0 - 0.7));
        assert!(!angle_condition(0.3, 0.2));
        assert!(angle_lattice_distance(PI) < 1e-15);
    }
}
