//! Exact integer, rational and polynomial arithmetic plus certified roots.

pub mod ball;
pub mod fixed;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod primes;

pub use ball::{complex_roots, CertifiedBall};
pub use modp::{factor_mod_p, ModPFactorization};
pub use poly::{IntPoly, RatPoly};

use crate::error::Result;

/// Discriminant with the `(-1)^{n(n-1)/2} Res(f, f') / lc(f)` convention.
pub fn poly_discriminant(f: &IntPoly) -> Result<num_bigint::BigInt> {
    f.discriminant()
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &IntPoly) -> Result<usize> {
    f.count_real_roots()
}
