//! Comparison curves: the Gauss–Siegel constant and the logarithmic
//! integral `L(x) = ∫₁^x e^t/t dt`.

use std::f64::consts::PI;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_2;

/// `π² / (18 ζ(3))`.
pub fn gauss_siegel_constant() -> f64 {
    PI * PI / (18.0 * ZETA_3)
}

/// `π² x^{3/2} / (18 ζ(3))`.
pub fn gauss_siegel_target(x: f64) -> f64 {
    gauss_siegel_constant() * x.powf(1.5)
}

/// `L(x) = Ei(x) - Ei(1) = ln x + Σ_{k≥1} (x^k - 1)/(k·k!)` for `x >= 1`.
pub fn log_integral(x: f64) -> f64 {
    let mut sum = x.ln();
    let mut term = 1.0; // x^k / k!
    let mut inv_fact = 1.0; // 1 / k!
    for k in 1..500 {
        let kf = k as f64;
        term *= x / kf;
        inv_fact /= kf;
        let add = (term - inv_fact) / kf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `L(x)` by double-exponential quadrature.
pub fn log_integral_quadrature(x: f64) -> f64 {
    let scale = x.exp() / x;
    quadrature::integrate(|t: f64| t.exp() / t, 1.0, x, 1e-13 * scale).integral
}

/// `e^x/x · Σ_{k<K} k!/x^k` truncated at the smallest term, with the size of
/// that first omitted term as an error estimate.
pub fn ei_asymptotic(x: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut term = 1.0;
    let mut k = 0.0;
    loop {
        let next = term * (k + 1.0) / x;
        sum += term;
        if next >= term {
            let scale = x.exp() / x;
            return (scale * sum, scale * next);
        }
        term = next;
        k += 1.0;
    }
}

/// `e^x / x`.
pub fn exp_over_x(x: f64) -> f64 {
    x.exp() / x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_three_by_summation() {
        // Σ_{n≤N} n^{-3} + 1/(2N²) - 1/(2N³) + 1/(4N⁴)
        let n = 2000u32;
        let partial: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
        let nf = n as f64;
        let tail = 1.0 / (2.0 * nf * nf) - 1.0 / (2.0 * nf.powi(3)) + 1.0 / (4.0 * nf.powi(4));
        assert!((partial + tail - ZETA_3).abs() < 1e-14);
        assert!((gauss_siegel_constant() - 0.456144259).abs() < 1e-9);
    }

    #[test]
    fn log_integral_two_methods() {
        for x in [1.0, 1.5, 2.0, 5.0, 10.0, 12.0, 24.0] {
            let a = log_integral(x);
            let b = log_integral_quadrature(x);
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "x = {x}: {a} vs {b}");
        }
        assert!(log_integral(1.0).abs() < 1e-15);
        // Ei(2) - Ei(1)
        assert!((log_integral(2.0) - (4.954_234_356_001_89 - 1.895_117_816_355_937)).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_series_within_its_own_bound() {
        let x = 12.0;
        let (approx, err) = ei_asymptotic(x);
        let ei = log_integral(x) + 1.895_117_816_355_937;
        assert!((approx - ei).abs() <= err);
        // optimal truncation stays far above 1e-9 relative accuracy at x = 12
        assert!(err / ei > 1e-7);
    }
}
