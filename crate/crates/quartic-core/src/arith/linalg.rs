//! Exact linear algebra over ℤ, ℚ and 𝔽_p on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Determinant by fraction-free Bareiss elimination.
pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let (ints, den) = clear_denominators(m);
    let n = m.len() as u32;
    BigRational::new(det_bigint(&ints), den.pow(n))
}

/// Scales a rational matrix by the lcm of its denominators.
pub fn clear_denominators(m: &[Vec<BigRational>]) -> (IntMatrix, BigInt) {
    let den = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect()
        })
        .collect();
    (ints, den)
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &a[col][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul_rational(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> RatMatrix {
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat_rational(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect()
}

/// Characteristic polynomial `det(x I - m)` of an integer matrix
/// (Faddeev-LeVerrier over ℚ).
pub fn charpoly(m: &[Vec<BigInt>]) -> IntPoly {
    let n = m.len();
    let a = to_rational(m);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: RatMatrix = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul_rational(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul_rational(&a, &mk);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    IntPoly::new(coeffs.into_iter().map(|c| c.to_integer()).collect())
}

/// Lattice in ℤ^n kept in lower-triangular Hermite normal form: the pivot of
/// row `c` sits in column `c`, entries left of each pivot are reduced modulo
/// the pivot of their column.
#[derive(Clone, Debug)]
pub struct HermiteLattice {
    dim: usize,
    rows: Vec<Option<Vec<BigInt>>>,
}

impl HermiteLattice {
    pub fn new(dim: usize) -> Self {
        HermiteLattice {
            dim,
            rows: vec![None; dim],
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut lat = Self::new(dim);
        for r in rows {
            lat.insert(r.clone());
        }
        lat
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Index in ℤ^n (product of pivots); `None` when not of full rank.
    pub fn determinant(&self) -> Option<BigInt> {
        self.rows
            .iter()
            .enumerate()
            .try_fold(BigInt::one(), |acc, (c, r)| r.as_ref().map(|r| acc * &r[c]))
    }

    /// Adds a vector to the generating set; returns true when the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut changed = false;
        let mut touched = false;
        for c in (0..self.dim).rev() {
            if v[c].is_zero() {
                continue;
            }
            match self.rows[c].take() {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows[c] = Some(v);
                    changed = true;
                    self.reduce_all();
                    return changed;
                }
                Some(piv) => {
                    touched = true;
                    let e = piv[c].extended_gcd(&v[c]);
                    let g = e.gcd.clone();
                    if g != piv[c] {
                        changed = true;
                    }
                    let new_piv: Vec<BigInt> = piv
                        .iter()
                        .zip(&v)
                        .map(|(p, x)| &e.x * p + &e.y * x)
                        .collect();
                    let (pa, va) = (&piv[c] / &g, &v[c] / &g);
                    let rest: Vec<BigInt> = piv
                        .iter()
                        .zip(&v)
                        .map(|(p, x)| &pa * x - &va * p)
                        .collect();
                    let mut np = new_piv;
                    if np[c].is_negative() {
                        np.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows[c] = Some(np);
                    v = rest;
                }
            }
        }
        if touched {
            self.reduce_all();
        }
        changed
    }

    fn reduce_all(&mut self) {
        for c in 0..self.dim {
            let Some(mut row) = self.rows[c].take() else { continue };
            for c2 in (0..c).rev() {
                if let Some(p) = &self.rows[c2] {
                    let q = row[c2].div_floor(&p[c2]);
                    if !q.is_zero() {
                        for (x, y) in row.iter_mut().zip(p) {
                            *x -= &q * y;
                        }
                    }
                }
            }
            self.rows[c] = Some(row);
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        for c in (0..self.dim).rev() {
            if w[c].is_zero() {
                continue;
            }
            let Some(p) = &self.rows[c] else { return false };
            let (q, r) = w[c].div_rem(&p[c]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in w.iter_mut().zip(p) {
                *x -= &q * y;
            }
        }
        true
    }

    /// Basis rows (only meaningful for full rank: row `c` has pivot in `c`).
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().flatten().cloned().collect()
    }

    /// Integer coordinates of a lattice vector in `basis()` order.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut w = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.dim];
        for c in (0..self.dim).rev() {
            if w[c].is_zero() {
                continue;
            }
            let p = self.rows[c].as_ref()?;
            let (q, r) = w[c].div_rem(&p[c]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in w.iter_mut().zip(p) {
                *x -= &q * y;
            }
            coords[c] = q;
        }
        let present: Vec<usize> = (0..self.dim).filter(|&c| self.rows[c].is_some()).collect();
        Some(present.into_iter().map(|c| coords[c].clone()).collect())
    }
}

/// Hermite normal form of the lattice spanned by `rows` (lower triangular),
/// `None` if the rows do not span a full-rank lattice.
pub fn hnf(dim: usize, rows: &[Vec<BigInt>]) -> Option<IntMatrix> {
    let lat = HermiteLattice::from_rows(dim, rows);
    lat.is_full_rank().then(|| lat.basis())
}

/// Smith normal form of a square nonsingular integer matrix `a` (rows are
/// relations). Returns the diagonal and a unimodular `v` with `u a v = diag`.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> (Vec<BigInt>, IntMatrix) {
    let n = a.len();
    let mut m: IntMatrix = a.to_vec();
    let mut v: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    for t in 0..n {
        loop {
            // choose smallest nonzero entry in the remaining block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut done = true;
            for i in t + 1..n {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for j in t..n {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..n {
                        let d = &q * &m[i][t];
                        m[i][j] -= d;
                    }
                    for row in v.iter_mut() {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // enforce divisibility of the remaining block by the pivot
                let bad = (t + 1..n)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
                match bad {
                    Some((i, _)) => {
                        for j in t..n {
                            let x = m[i][j].clone();
                            m[t][j] += x;
                        }
                    }
                    None => break,
                }
            }
        }
        if m[t][t].is_negative() {
            for j in t..n {
                m[t][j] = -&m[t][j];
            }
        }
    }
    ((0..n).map(|i| m[i][i].clone()).collect(), v)
}

/// Arithmetic on matrices over 𝔽_p (entries in `0..p`).
pub mod modp {
    pub fn inv(a: u64, p: u64) -> u64 {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (p as i128, (a % p) as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        assert_eq!(r, 1, "{a} not invertible mod {p}");
        t.rem_euclid(p as i128) as u64
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, piv);
            let iv = inv(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = *x * iv % p;
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in 0..cols {
                        m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
        let mut a = m.to_vec();
        rref(&mut a, p).len()
    }

    /// Basis of the right kernel `{x : m x = 0}`.
    pub fn kernel(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut a = m.to_vec();
        let pivots = rref(&mut a, p);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - a[r][f]) % p;
                }
                x
            })
            .collect()
    }

    /// Row space basis in reduced echelon form.
    pub fn row_basis(vectors: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let mut a = vectors.to_vec();
        let k = rref(&mut a, p).len();
        a.truncate(k);
        a
    }

    /// `x m` for a row vector `x`.
    pub fn vec_mat(x: &[u64], m: &[Vec<u64>], p: u64) -> Vec<u64> {
        let cols = m.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| x.iter().zip(m).fold(0u64, |acc, (a, row)| (acc + a * row[j]) % p))
            .collect()
    }

    pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        a.iter().map(|row| vec_mat(row, b, p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(det_bigint(&im(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(det_bigint(&im(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det_bigint(&im(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(det_bigint(&im(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn hermite_lattice_index_and_membership() {
        let lat = HermiteLattice::from_rows(2, &im(&[&[4, 6], &[2, 9], &[6, 3]]));
        assert!(lat.is_full_rank());
        let det = lat.determinant().unwrap();
        // gcd of 2x2 minors: 36-12=24, 12-36=-24, 6-54=-48
        assert_eq!(det, BigInt::from(24));
        assert!(lat.contains(&[BigInt::from(6), BigInt::from(15)]));
        assert!(lat.contains(&[BigInt::from(8), BigInt::from(0)]));
        assert!(!lat.contains(&[BigInt::from(8), BigInt::from(15)]));
        assert!(!lat.contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let id = im(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let mut lat = HermiteLattice::from_rows(3, &id);
        assert!(!lat.insert(im(&[&[-1, -1, -1]]).remove(0)));
        assert_eq!(lat.basis(), id);
        let a = HermiteLattice::from_rows(2, &im(&[&[2, 1], &[0, 3]]));
        let b = HermiteLattice::from_rows(2, &im(&[&[2, 4], &[2, 7], &[-6, 3]]));
        assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn smith_form_diagonal() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (d, _) = smith_normal_form(&a);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^2 - x - 1
        let m = im(&[&[0, 1], &[1, 1]]);
        assert_eq!(charpoly(&m), IntPoly::from_i64(&[-1, -1, 1]));
    }

    #[test]
    fn modp_kernel() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = modp::kernel(&m, 3, 7);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 7, 0);
        }
    }
}
