//! Powers of the defining automorphism, as integer matrices.
//!
//! The automorphism fixes the last basis vector and sends `a_i` to
//! `a_i a_{i+1}` for `i < d`. On exponent vectors (column convention) its
//! `m`-th power is lower triangular with entry `C(m, row - col)`, where
//! `C` is the generalized binomial coefficient, so negative powers come out
//! of the same formula instead of a matrix inversion.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Generalized binomial coefficient `C(m, k)` for any integer `m` and `k >= 0`.
///
/// Computed by the incremental product `C(m, j) = C(m, j-1) * (m - j + 1) / j`,
/// which divides exactly at every step. For `m < 0` this agrees with
/// `(-1)^k * C(-m + k - 1, k)`.
pub fn binomial(m: &BigInt, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for j in 1..=k {
        c *= m - BigInt::from(j as u64 - 1);
        c /= BigInt::from(j as u64);
    }
    c
}

/// `C(m, k)` for every `k = 0..=max_k`, sharing the incremental products.
pub(crate) fn binomial_row(m: &BigInt, max_k: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(max_k + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for j in 1..=max_k {
        c *= m - BigInt::from(j as u64 - 1);
        c /= BigInt::from(j as u64);
        row.push(c.clone());
    }
    row
}

/// Applies the `power`-th automorphism power to an exponent vector.
pub(crate) fn apply_phi_power(power: &BigInt, coords: &[BigInt]) -> Vec<BigInt> {
    let d = coords.len();
    if power.is_zero() || d == 0 {
        return coords.to_vec();
    }
    let binoms = binomial_row(power, d - 1);
    (0..d)
        .map(|j| {
            let mut s = BigInt::zero();
            for i in 0..=j {
                if !coords[i].is_zero() {
                    s += &binoms[j - i] * &coords[i];
                }
            }
            s
        })
        .collect()
}

/// An integer power of the defining automorphism, materialized as a dense
/// `dim x dim` integer matrix acting on exponent column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMatrix {
    dim: usize,
    power: BigInt,
    entries: Vec<Vec<BigInt>>,
}

/// The `power`-th automorphism power on `dim` lattice coordinates.
///
/// Entry `(row, col)` (0-based) is `C(power, row - col)`; in particular the
/// diagonal is 1 and everything above it vanishes.
pub fn phi_pow(dim: usize, power: i64) -> PhiMatrix {
    PhiMatrix::new(dim, BigInt::from(power))
}

impl PhiMatrix {
    pub fn new(dim: usize, power: BigInt) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        let binoms = binomial_row(&power, dim - 1);
        let entries = (0..dim)
            .map(|row| {
                (0..dim)
                    .map(|col| {
                        if col <= row {
                            binoms[row - col].clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        PhiMatrix { dim, power, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn power(&self) -> &BigInt {
        &self.power
    }

    /// Entry at `(row, col)`, 0-based.
    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// The last row, whose column `i` (1-based) is `C(power, dim - i)`.
    pub fn bottom_row(&self) -> &[BigInt] {
        &self.entries[self.dim - 1]
    }

    /// Matrix-vector product.
    pub fn apply(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.dim, "dimension mismatch");
        self.entries
            .iter()
            .map(|row| {
                let mut s = BigInt::zero();
                for (entry, c) in row.iter().zip(coords) {
                    if !entry.is_zero() && !c.is_zero() {
                        s += entry * c;
                    }
                }
                s
            })
            .collect()
    }

    /// Plain matrix product, used as the independent route when checking the
    /// closed-form entries: multiplying `m` copies of the one-step matrix must
    /// reproduce `phi_pow(dim, m)`.
    pub fn matmul(&self, rhs: &PhiMatrix) -> PhiMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let entries: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for k in 0..d {
                            if !self.entries[i][k].is_zero() && !rhs.entries[k][j].is_zero() {
                                s += &self.entries[i][k] * &rhs.entries[k][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        PhiMatrix {
            dim: d,
            power: &self.power + &rhs.power,
            entries,
        }
    }
}

/// Bottom-row entry of `phi_pow(dim, m)` in 1-based column `i`, i.e.
/// `C(m, dim - i)`: the `a_dim`-exponent picked up by `a_i` under the `m`-th
/// automorphism power.
///
/// # Panics
///
/// Panics unless `1 <= i <= dim - 1`.
pub fn epsilon(dim: usize, i: usize, m: i64) -> BigInt {
    assert!(
        (1..dim).contains(&i),
        "column index {i} out of range 1..{dim}"
    );
    binomial(&BigInt::from(m), dim - i)
}
