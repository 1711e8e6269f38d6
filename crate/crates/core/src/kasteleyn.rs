//! The signed adjacency operator on the reflected quotient space.
//!
//! Fix `m ≥ 1` and odd `n`. Let `V` be spanned by the cells of `R_{m−1,n−1}`
//! modulo `e_{i,j} = −e_{i,n−j}`. The cells with `i + j` even form a basis
//! `T₀`, and the operator sends `e_{i,j}` to the sum of its four neighbours,
//! dropping those on the boundary lines `i ∈ {0, m}` or `j ∈ {0, n}`. Each
//! surviving neighbour has odd parity and is rewritten through the reflection.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedMatrix {
    dim: usize,
    entries: Vec<Vec<i64>>,
}

impl SignedMatrix {
    pub fn zeros(dim: usize) -> SignedMatrix {
        SignedMatrix {
            dim,
            entries: vec![vec![0; dim]; dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<SignedMatrix> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        Ok(SignedMatrix { dim, entries: rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| (0..r).all(|c| self.entries[r][c] == self.entries[c][r]))
    }

    pub fn max_column_nonzeros(&self) -> usize {
        (0..self.dim)
            .map(|c| (0..self.dim).filter(|&r| self.entries[r][c] != 0).count())
            .max()
            .unwrap_or(0)
    }
}

/// Basis `T₀ = {(i, j) : 1 ≤ i ≤ m−1, 1 ≤ j ≤ n−1, i + j even}` in
/// lexicographic order.
pub fn even_basis(m: u32, n: u32) -> Vec<(u32, u32)> {
    (1..m)
        .flat_map(|i| {
            (1..n)
                .filter(move |j| (i + j) % 2 == 0)
                .map(move |j| (i, j))
        })
        .collect()
}

/// Matrix of the operator in the basis [`even_basis`]; column `c` holds the
/// image of the `c`-th basis vector.
pub fn build_kasteleyn(m: u32, n: u32) -> Result<SignedMatrix> {
    if m == 0 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "need m ≥ 1 and odd n, got m = {m}, n = {n}"
        )));
    }
    let basis = even_basis(m, n);
    let index = |i: u32, j: u32| {
        basis
            .binary_search(&(i, j))
            .expect("reflected neighbour lies in the even basis")
    };
    let mut k = SignedMatrix::zeros(basis.len());
    for (col, &(i, j)) in basis.iter().enumerate() {
        let (i, j) = (i as i64, j as i64);
        for (a, b) in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
            if a <= 0 || a >= m as i64 || b <= 0 || b >= n as i64 {
                continue;
            }
            // odd cell: e_{a,b} = −e_{a,n−b}
            let row = index(a as u32, n - b as u32);
            k.entries[row][col] -= 1;
        }
    }
    Ok(k)
}

/// Exact determinant by fraction-free (Bareiss) elimination. The pivot is the
/// first nonzero entry at or below the diagonal in the current column.
pub fn det_exact(matrix: &SignedMatrix) -> BigInt {
    let n = matrix.dim;
    let mut a: Vec<Vec<BigInt>> = matrix
        .entries
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// `(−1)^{(n²−1)/8}`.
pub fn second_supplement_sign(n: u32) -> i64 {
    let n = n as u64;
    if ((n * n - 1) / 8).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `S(R_{m−1,n−1})` recovered from `det K`, with the sign correction
/// `(−1)^{(n²−1)/8}` for even `m`.
pub fn signed_sum_via_det(m: u32, n: u32) -> Result<BigInt> {
    let det = det_exact(&build_kasteleyn(m, n)?);
    Ok(if m.is_multiple_of(2) {
        det * second_supplement_sign(n)
    } else {
        det
    })
}

/// Convenience: the determinant route as a Gaussian integer.
pub fn signed_sum_via_det_gaussian(m: u32, n: u32) -> Result<GaussianInt> {
    signed_sum_via_det(m, n).map(GaussianInt::from)
}
