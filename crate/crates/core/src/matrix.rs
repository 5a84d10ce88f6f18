//! Exact integer matrix helpers: determinants, adjugates and Hermite normal
//! forms over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Adjugate matrix: adj(M) with M * adj(M) = det(M) * I.
///
/// Computed as det(M) * M^{-1} via exact rational elimination; all entries of
/// the result are integers by Cramer's rule.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    let det = determinant(m);
    assert!(!det.is_zero(), "adjugate of a singular matrix");
    let det_r = BigRational::from(det);

    // Augmented [M | det * I], rational Gauss-Jordan.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(m[i][j].clone())
                    } else if j - n == i {
                        det_r.clone()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..2 * n {
            a[col][j] = &a[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..2 * n {
                    let sub = &f * &a[col][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
    }

    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = &a[i][n + j];
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form of a full-rank square integer matrix:
/// upper triangular, positive diagonal, entries above each pivot reduced into
/// [0, pivot). Two bases span the same lattice iff their HNFs are equal.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    let mut a = m.to_vec();
    for col in 0..n {
        // Euclidean elimination below the pivot.
        loop {
            let mut idx: Vec<usize> = (col..n).filter(|&i| !a[i][col].is_zero()).collect();
            assert!(!idx.is_empty(), "matrix not full rank");
            if idx.len() == 1 {
                let i = idx[0];
                a.swap(col, i);
                break;
            }
            idx.sort_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let (small, other) = (idx[0], idx[1]);
            let q = a[other][col].div_floor(&a[small][col]);
            for j in 0..n {
                let sub = &q * &a[small][j];
                a[other][j] = &a[other][j] - sub;
            }
        }
        if a[col][col].is_negative() {
            for j in 0..n {
                a[col][j] = -a[col][j].clone();
            }
        }
        // Reduce entries above the pivot.
        for i in 0..col {
            let q = a[i][col].div_floor(&a[col][col]);
            if !q.is_zero() {
                for j in 0..n {
                    let sub = &q * &a[col][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
    }
    a
}

/// Exact dot product of integer rows.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let p = b[0].len();
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..b.len()).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}
