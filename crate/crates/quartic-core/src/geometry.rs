//! Minkowski-space helpers shared by the unit and principal-ideal searches:
//! integer combinations of basis rows mapped into `ℝ^{2n}` under a weighted
//! `T₂` form.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::fixed::Fx;
use crate::error::Result;
use crate::lattice::{gram, lll};
use crate::order::{Coords, Order};

fn bits_of(c: &[BigInt]) -> u32 {
    c.iter().map(|x| x.bits() as u32).max().unwrap_or(0)
}

/// Embeddings of the basis at a working precision, used to map integer
/// combinations into `ℝ^{2n}` under a weighted form.
pub(crate) struct Minkowski<'a> {
    order: &'a Order,
    bits: u32,
    basis: Vec<Vec<Fx>>,
}

impl<'a> Minkowski<'a> {
    pub(crate) fn new(order: &'a Order) -> Self {
        let bits = 256;
        Minkowski { order, bits, basis: order.basis_embeddings(bits) }
    }

    fn ensure(&mut self, coord_bits: u32) {
        let need = 128 + 2 * coord_bits;
        if need > self.bits {
            self.bits = need.next_power_of_two();
            self.basis = self.order.basis_embeddings(self.bits);
        }
    }

    pub(crate) fn values(&mut self, c: &[BigInt]) -> Vec<Fx> {
        self.ensure(bits_of(c));
        let n = self.order.degree();
        (0..n)
            .map(|k| {
                c.iter()
                    .zip(&self.basis)
                    .fold(Fx::zero(self.bits), |acc, (x, e)| acc.add(&e[k].scale_int(x)))
            })
            .collect()
    }

    pub(crate) fn vectors(&mut self, rows: &[Coords], weights: &[f64]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|r| {
                self.values(r)
                    .iter()
                    .zip(weights)
                    .flat_map(|(z, w)| {
                        let s = w.sqrt();
                        [s * z.re_f64(), s * z.im_f64()]
                    })
                    .collect()
            })
            .collect()
    }

    /// LLL-reduces `rows` under the weighted form, re-running until the
    /// transform is trivial so that float drift is corrected.
    pub(crate) fn reduce(&mut self, rows: &mut Vec<Coords>, weights: &[f64]) -> Result<Vec<Vec<f64>>> {
        for _ in 0..8 {
            let vecs = self.vectors(rows, weights);
            let u = lll(&vecs)?;
            let identity = u.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i128));
            if identity {
                return Ok(gram(&vecs));
            }
            *rows = u
                .iter()
                .map(|r| {
                    let n = rows[0].len();
                    (0..n)
                        .map(|t| r.iter().zip(rows.iter()).fold(BigInt::zero(), |acc, (c, row)| acc + BigInt::from(*c) * &row[t]))
                        .collect()
                })
                .collect();
        }
        Ok(gram(&self.vectors(rows, weights)))
    }
}

pub(crate) fn combine(x: &[i64], rows: &[Coords]) -> Coords {
    let n = rows[0].len();
    (0..n)
        .map(|t| x.iter().zip(rows).fold(BigInt::zero(), |acc, (c, r)| acc + BigInt::from(*c) * &r[t]))
        .collect()
}
