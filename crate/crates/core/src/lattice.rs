//! Exact unimodular-lattice representation.
//!
//! A lattice of covolume 1 is stored as an integer basis together with
//! rawDet = |det|; the true lattice is rawDet^{-1/n} times the integer span,
//! and the irrational scale is never materialized. True squared lengths are
//! rawNormSq * rawDet^{-2/n}; all comparisons route through the exact integer
//! keys or through log-space reals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};
use crate::volume::{self, DEFAULT_GUARD};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: u32,
    rows: IntMatrix,
    raw_det: BigInt,
}

impl LatticeBasis {
    /// Builds a basis, recomputing |det| exactly and rejecting singular input.
    pub fn new(rows: IntMatrix) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidBasis(format!("dimension must be >= 2, got {n}")));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidBasis("basis matrix must be square".into()));
        }
        let det = matrix::determinant(&rows);
        if det.is_zero() {
            return Err(Error::InvalidBasis("basis rows are linearly dependent".into()));
        }
        Ok(Self { dim: n as u32, rows, raw_det: det.abs() })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn raw_det(&self) -> &BigInt {
        &self.raw_det
    }

    /// Basis of the dual lattice, via the exact adjugate: the returned rows
    /// stay integral with rawDet' = rawDet^{n-1}, and satisfy
    /// rows * dual_rows^T = rawDet * I.
    pub fn dual(&self) -> LatticeBasis {
        let n = self.dim as usize;
        let det = matrix::determinant(&self.rows);
        let adj = matrix::adjugate(&self.rows);
        let negate = det.is_negative();
        let mut dual_rows: IntMatrix = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = adj[j][i].clone();
                dual_rows[i][j] = if negate { -v } else { v };
            }
        }
        LatticeBasis {
            dim: self.dim,
            rows: dual_rows,
            raw_det: self.raw_det.pow(self.dim - 1),
        }
    }

    /// Canonical Hermite normal form of the row span; equal HNFs mean equal
    /// lattices (at equal rawDet).
    pub fn hermite_form(&self) -> IntMatrix {
        matrix::hermite_normal_form(&self.rows)
    }

    pub fn spans_same_lattice(&self, other: &LatticeBasis) -> bool {
        self.raw_det == other.raw_det && self.hermite_form() == other.hermite_form()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BasisFile::from(self)).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: BasisFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidBasis(format!("bad basis JSON: {e}")))?;
        f.try_into()
    }
}

/// On-disk basis format; integers as decimal strings to avoid 64-bit
/// truncation.
#[derive(Debug, Serialize, Deserialize)]
struct BasisFile {
    dim: u32,
    rows: Vec<Vec<String>>,
    #[serde(rename = "rawDet")]
    raw_det: String,
}

impl From<&LatticeBasis> for BasisFile {
    fn from(b: &LatticeBasis) -> Self {
        BasisFile {
            dim: b.dim,
            rows: b.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            raw_det: b.raw_det.to_string(),
        }
    }
}

impl TryFrom<BasisFile> for LatticeBasis {
    type Error = Error;

    fn try_from(f: BasisFile) -> Result<Self> {
        let parse = |s: &str| -> Result<BigInt> {
            s.parse().map_err(|_| Error::InvalidBasis(format!("bad integer string {s:?}")))
        };
        let rows = f
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<IntMatrix>>()?;
        let b = LatticeBasis::new(rows)?;
        if b.dim != f.dim {
            return Err(Error::InvalidBasis(format!(
                "declared dim {} does not match {} rows",
                f.dim, b.dim
            )));
        }
        if *b.raw_det() != parse(&f.raw_det)? {
            return Err(Error::InvalidBasis("declared rawDet does not match basis".into()));
        }
        Ok(b)
    }
}

/// One antipodal pair {±x}: ball volume, exact squared-norm key, and the
/// canonical coefficient vector (w.r.t. the basis the census was run in).
#[derive(Debug, Clone)]
pub struct VolumeEntry {
    pub volume: f64,
    pub raw_norm_sq: BigInt,
    pub multiplicity: u32,
    /// Canonical representative: coefficient vector with first nonzero
    /// coefficient positive.
    pub coeffs: Vec<i64>,
}

/// The sorted sequence 𝒱_1 <= 𝒱_2 <= ... of ball volumes of antipodal vector
/// pairs, complete up to `cutoff`. In "first N" mode the cutoff is the volume
/// of the last kept entry; the census is still complete up to that value.
#[derive(Debug, Clone)]
pub struct VolumeSequence {
    pub dim: u32,
    pub raw_det: BigInt,
    pub entries: Vec<VolumeEntry>,
    pub cutoff: f64,
}

impl VolumeSequence {
    pub fn volumes(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.volume).collect()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity as u64).sum()
    }
}

/// Ñ_t: number of antipodal pairs with 𝒱 <= t. Threshold comparisons use the
/// exact rawNormSq keys through the same inclusive guard rule as enumeration,
/// so a t equal to a listed volume counts that shell.
pub fn counting_function(vols: &VolumeSequence, t: f64) -> Result<u64> {
    if t > vols.cutoff {
        return Err(Error::CensusIncomplete { requested: t, cutoff: vols.cutoff });
    }
    if t < 0.0 {
        return Ok(0);
    }
    let mut count = 0u64;
    for e in &vols.entries {
        // Entries are sorted; stop once clearly past the threshold.
        if e.volume > t * (1.0 + 1e-6) {
            break;
        }
        if volume::accepts(vols.dim, &e.raw_norm_sq, &vols.raw_det, t, DEFAULT_GUARD) {
            count += e.multiplicity as u64;
        }
    }
    Ok(count)
}

/// Counting record over several thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountRecord {
    pub thresholds: Vec<f64>,
    pub counts: Vec<u64>,
}

pub fn count_record(vols: &VolumeSequence, thresholds: &[f64]) -> Result<CountRecord> {
    let counts =
        thresholds.iter().map(|&t| counting_function(vols, t)).collect::<Result<Vec<_>>>()?;
    Ok(CountRecord { thresholds: thresholds.to_vec(), counts })
}
