//! LLL reduction of integer bases, as the enumeration prerequisite.
//!
//! Basis rows are kept exact (i128 fast path with a BigInt fallback for
//! oversized entries); Gram-Schmidt data is f64, recomputed from exact dot
//! products at every row visit so rounding never accumulates across steps.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::matrix::IntMatrix;

pub const DEFAULT_DELTA: f64 = 0.99;

/// Entry magnitude cap for the i128 path; keeps 32-term dot products and
/// size-reduction updates inside i128.
const I128_LIMIT: i128 = 1 << 58;

/// Exact basis scalar used by the reduction and enumeration kernels.
pub(crate) trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn from_bigint(x: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    fn to_f64(&self) -> f64;
    fn dot(a: &[Self], b: &[Self]) -> Self;
    /// row -= q * other; false if the update might overflow the representation.
    fn submul_row(row: &mut [Self], other: &[Self], q: f64) -> bool;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }

    fn from_bigint(x: &BigInt) -> Option<Self> {
        let v = x.to_i128()?;
        (v.abs() < I128_LIMIT).then_some(v)
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn submul_row(row: &mut [Self], other: &[Self], q: f64) -> bool {
        if q.abs() >= I128_LIMIT as f64 {
            return false;
        }
        let q = q as i128;
        for (r, o) in row.iter_mut().zip(other) {
            *r -= q * *o;
            if r.abs() >= I128_LIMIT {
                return false;
            }
        }
        true
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_bigint(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn submul_row(row: &mut [Self], other: &[Self], q: f64) -> bool {
        let Some(q) = BigInt::from_f64(q) else { return false };
        for (r, o) in row.iter_mut().zip(other) {
            *r -= &q * o;
        }
        true
    }
}

use num_traits::FromPrimitive;

/// Gram-Schmidt data of the first `valid` rows: mu coefficients and squared
/// norms of the orthogonalized vectors, all f64 backed by exact dots.
pub(crate) struct GramSchmidt {
    pub mu: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub bstar_sq: Vec<f64>,
}

impl GramSchmidt {
    fn with_capacity(n: usize) -> Self {
        GramSchmidt {
            mu: vec![vec![0.0; n]; n],
            r: vec![vec![0.0; n]; n],
            bstar_sq: vec![0.0; n],
        }
    }

    /// Recomputes GS row i from exact dot products, assuming rows < i valid.
    fn compute_row<S: Scalar>(&mut self, rows: &[Vec<S>], i: usize) {
        for j in 0..i {
            let mut rij = S::dot(&rows[i], &rows[j]).to_f64();
            for l in 0..j {
                rij -= self.mu[j][l] * self.r[i][l];
            }
            self.r[i][j] = rij;
            self.mu[i][j] = rij / self.bstar_sq[j];
        }
        let mut b = S::dot(&rows[i], &rows[i]).to_f64();
        for l in 0..i {
            b -= self.mu[i][l] * self.r[i][l];
        }
        self.bstar_sq[i] = b;
    }

    pub(crate) fn full<S: Scalar>(rows: &[Vec<S>]) -> Self {
        let mut gs = Self::with_capacity(rows.len());
        for i in 0..rows.len() {
            gs.compute_row(rows, i);
        }
        gs
    }
}

/// An LLL-reduced basis together with the unimodular transform that produced
/// it: transform * original_rows = rows.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    pub rows: IntMatrix,
    pub transform: IntMatrix,
    pub delta: f64,
}

pub(crate) struct ScalarBasis<S> {
    pub rows: Vec<Vec<S>>,
    pub transform: Vec<Vec<S>>,
}

fn identity_rows<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        S::from_bigint(&BigInt::from(1)).unwrap()
                    } else {
                        S::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn lll_scalar<S: Scalar>(mut rows: Vec<Vec<S>>, delta: f64) -> Option<ScalarBasis<S>> {
    let n = rows.len();
    let mut transform: Vec<Vec<S>> = identity_rows(n);
    let mut gs = GramSchmidt::with_capacity(n);
    gs.compute_row(&rows, 0);
    let mut valid = 1usize; // rows < valid have current GS data

    // Generous convergence guard; exceeding it means f64 GS is cycling.
    let max_steps = 200_000 + 2_000 * n * n;
    let mut steps = 0usize;

    let mut k = 1usize;
    while k < n {
        steps += 1;
        if steps > max_steps {
            return None;
        }
        while valid <= k {
            gs.compute_row(&rows, valid);
            valid += 1;
        }
        // Size-reduce row k, updating mu in place. The f64 quotients clear at
        // most ~53 bits of each coefficient per pass, so repeat (with an exact
        // refresh between passes) until every |mu| rounds to zero.
        let mut passes = 0;
        loop {
            let mut changed = false;
            for j in (0..k).rev() {
                if gs.mu[k][j].abs() <= 0.5 + 1e-9 {
                    continue;
                }
                let q = gs.mu[k][j].round();
                if q != 0.0 {
                    changed = true;
                    let (head, tail) = rows.split_at_mut(k);
                    if !S::submul_row(&mut tail[0], &head[j], q) {
                        return None;
                    }
                    let (thead, ttail) = transform.split_at_mut(k);
                    if !S::submul_row(&mut ttail[0], &thead[j], q) {
                        return None;
                    }
                    for l in 0..j {
                        gs.mu[k][l] -= q * gs.mu[j][l];
                    }
                    gs.mu[k][j] -= q;
                }
            }
            if !changed {
                break;
            }
            // Refresh from exact dots so rounding does not accumulate.
            gs.compute_row(&rows, k);
            passes += 1;
            if passes > 64 {
                return None;
            }
        }
        if gs.bstar_sq[k] >= (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.bstar_sq[k - 1] {
            k += 1;
        } else {
            rows.swap(k - 1, k);
            transform.swap(k - 1, k);
            gs.compute_row(&rows, k - 1);
            valid = k;
            k = std::cmp::max(1, k - 1);
        }
    }
    Some(ScalarBasis { rows, transform })
}

pub(crate) fn reduce_scalar<S: Scalar>(b: &LatticeBasis, delta: f64) -> Option<ScalarBasis<S>> {
    let rows: Option<Vec<Vec<S>>> =
        b.rows().iter().map(|r| r.iter().map(S::from_bigint).collect()).collect();
    lll_scalar(rows?, delta)
}

/// LLL-reduces a basis: same lattice, recorded unimodular transform, Lovász
/// and size-reduction conditions with the given delta.
pub fn lll_reduce(b: &LatticeBasis, delta: f64) -> Result<ReducedBasis> {
    if !(0.25 < delta && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must be in (1/4, 1), got {delta}")));
    }
    if let Some(sb) = reduce_scalar::<i128>(b, delta) {
        return Ok(to_reduced(sb, delta));
    }
    match reduce_scalar::<BigInt>(b, delta) {
        Some(sb) => Ok(to_reduced(sb, delta)),
        None => Err(Error::PrecisionLoss("lll reduction did not converge".into())),
    }
}

fn to_reduced<S: Scalar>(sb: ScalarBasis<S>, delta: f64) -> ReducedBasis {
    ReducedBasis {
        rows: sb.rows.iter().map(|r| r.iter().map(S::to_bigint).collect()).collect(),
        transform: sb.transform.iter().map(|r| r.iter().map(S::to_bigint).collect()).collect(),
        delta,
    }
}
