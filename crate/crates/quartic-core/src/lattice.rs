//! LLL reduction and short-vector enumeration for small-dimensional real
//! lattices given by floating-point basis vectors.

use crate::error::{Error, Result};

pub type Transform = Vec<Vec<i128>>;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &bstar[j]) / norms[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms.push(dot(&v, &v));
        bstar.push(v);
    }
    (mu, norms)
}

fn checked_sub_mul(a: i128, q: i128, b: i128) -> Result<i128> {
    q.checked_mul(b)
        .and_then(|t| a.checked_sub(t))
        .ok_or(Error::PrecisionExhausted { bits: 127 })
}

/// LLL-reduces the rows of `basis` (δ = 0.99). Returns the unimodular
/// transform `U` with reduced rows `U · basis`.
pub fn lll(basis: &[Vec<f64>]) -> Result<Transform> {
    let n = basis.len();
    let mut b = basis.to_vec();
    let mut u: Transform = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    if n <= 1 {
        return Ok(u);
    }
    let delta = 0.99;
    let mut k = 1;
    let mut steps = 0usize;
    while k < n {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::NumericInconsistency("LLL failed to converge".into()));
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                if !q.is_finite() || q.abs() > 1e30 {
                    return Err(Error::PrecisionExhausted { bits: 127 });
                }
                let qi = q as i128;
                for t in 0..b[k].len() {
                    b[k][t] -= q * b[j][t];
                }
                for t in 0..n {
                    u[k][t] = checked_sub_mul(u[k][t], qi, u[j][t])?;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(u)
}

/// Gram matrix of the rows.
pub fn gram(b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    b.iter().map(|x| b.iter().map(|y| dot(x, y)).collect()).collect()
}

/// All nonzero integer vectors `x` with `x G xᵀ <= bound`, one of each pair
/// `±x`. Returns `None` when more than `limit` vectors qualify.
pub fn short_vectors(g: &[Vec<f64>], bound: f64, limit: usize) -> Option<Vec<Vec<i64>>> {
    let n = g.len();
    // q[i][i] = diagonal, q[i][j] (j > i) = Cholesky coefficients
    let mut q = g.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    if (0..n).any(|i| !(q[i][i] > 0.0)) {
        return None;
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut remaining = vec![0.0f64; n + 1];
    remaining[n] = bound;
    fn rec(
        i: usize,
        n: usize,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        remaining: &mut Vec<f64>,
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) -> bool {
        let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let r = remaining[i + 1];
        if r < 0.0 {
            return true;
        }
        let half = (r / q[i][i]).sqrt() + 1e-12;
        let lo = (center - half).ceil() as i64;
        let hi = (center + half).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let d = v as f64 - center;
            remaining[i] = r - q[i][i] * d * d;
            if remaining[i] < -1e-12 * r.abs().max(1.0) {
                continue;
            }
            if i == 0 {
                // keep one sign: last nonzero coordinate positive
                match x.iter().rev().find(|&&c| c != 0) {
                    Some(&c) if c > 0 => {
                        out.push(x.clone());
                        if out.len() > limit {
                            return false;
                        }
                    }
                    _ => {}
                }
            } else if !rec(i - 1, n, q, x, remaining, out, limit) {
                return false;
            }
        }
        x[i] = 0;
        true
    }
    if n == 0 {
        return Some(out);
    }
    rec(n - 1, n, &q, &mut x, &mut remaining, &mut out, limit).then_some(out)
}
