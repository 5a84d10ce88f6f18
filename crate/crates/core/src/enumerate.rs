//! Complete short-vector census: LLL reduction followed by depth-first
//! Schnorr-Euchner enumeration of every antipodal pair {±x} with ball volume
//! 𝒱(x) <= t. Pruning runs on f64 Gram-Schmidt data with a relative slack;
//! every surviving candidate is re-checked with its exact integer rawNormSq
//! against the inclusive guard-band radius rule, so counts are bit-stable.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{LatticeBasis, VolumeEntry, VolumeSequence};
use crate::lll::{reduce_scalar, GramSchmidt, Scalar, ScalarBasis, DEFAULT_DELTA};
use crate::volume::{self, DEFAULT_GUARD};

/// Relative f64 slack on the pruning radius; exact re-checks make the final
/// census independent of its precise value.
const PRUNE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EnumerationConfig {
    pub delta: f64,
    pub guard: f64,
    pub node_budget: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self { delta: DEFAULT_DELTA, guard: DEFAULT_GUARD, node_budget: 1_000_000_000 }
    }
}

struct Search<'a, S: Scalar> {
    rows: &'a [Vec<S>],
    gs: &'a GramSchmidt,
    dim: usize,
    raw_det: &'a BigInt,
    t: f64,
    cfg: &'a EnumerationConfig,
    radius_sq: f64,
    nodes: u64,
    coeffs: Vec<i64>,
    found: Vec<VolumeEntry>,
}

impl<S: Scalar> Search<'_, S> {
    /// Depth-first over levels n-1 .. 0. `partial` is the squared norm
    /// contributed by levels > i; `all_zero_above` tracks the antipodal
    /// half-space restriction (highest nonzero coefficient positive).
    fn descend(&mut self, i: usize, partial: f64, all_zero_above: bool) -> Result<()> {
        let center: f64 = -(i + 1..self.dim).map(|j| self.coeffs[j] as f64 * self.gs.mu[j][i]).sum::<f64>();
        let room = self.radius_sq - partial;
        let width = (room / self.gs.bstar_sq[i]).max(0.0).sqrt();
        let lo = (center - width - 1e-9).ceil() as i64;
        let hi = (center + width + 1e-9).floor() as i64;
        let lo = if all_zero_above { lo.max(0) } else { lo };
        for x in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.cfg.node_budget {
                return Err(Error::BudgetExceeded {
                    visited: self.nodes,
                    budget: self.cfg.node_budget,
                });
            }
            let d = x as f64 - center;
            let here = partial + d * d * self.gs.bstar_sq[i];
            if here > self.radius_sq {
                continue;
            }
            self.coeffs[i] = x;
            if i == 0 {
                self.accept_candidate(all_zero_above && x == 0)?;
            } else {
                self.descend(i - 1, here, all_zero_above && x == 0)?;
            }
        }
        self.coeffs[i] = 0;
        Ok(())
    }

    fn accept_candidate(&mut self, is_zero_vector: bool) -> Result<()> {
        if is_zero_vector {
            return Ok(());
        }
        // Exact rawNormSq of Σ c_i b_i.
        let n = self.dim;
        let mut v = vec![<BigInt as Zero>::zero(); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                for (vj, bij) in v.iter_mut().zip(&self.rows[i]) {
                    *vj += BigInt::from(c) * bij.to_bigint();
                }
            }
        }
        let s: BigInt = v.iter().map(|x| x * x).sum();
        if !volume::accepts(n as u32, &s, self.raw_det, self.t, self.cfg.guard) {
            return Ok(());
        }
        // Canonical representative: first nonzero coefficient positive.
        let mut coeffs = self.coeffs.clone();
        if let Some(first) = coeffs.iter().find(|&&c| c != 0) {
            if *first < 0 {
                for c in coeffs.iter_mut() {
                    *c = -*c;
                }
            }
        }
        let vol = volume::length_to_volume(n as u32, &s, self.raw_det);
        self.found.push(VolumeEntry { volume: vol, raw_norm_sq: s, multiplicity: 1, coeffs });
        Ok(())
    }
}

fn enumerate_scalar<S: Scalar>(
    sb: &ScalarBasis<S>,
    b: &LatticeBasis,
    t: f64,
    cfg: &EnumerationConfig,
) -> Result<Vec<VolumeEntry>> {
    let n = b.dim() as usize;
    let gs = GramSchmidt::full(&sb.rows);
    let bound = volume::raw_norm_sq_bound(b.dim(), b.raw_det(), t);
    let mut search = Search {
        rows: &sb.rows,
        gs: &gs,
        dim: n,
        raw_det: b.raw_det(),
        t,
        cfg,
        radius_sq: bound * (1.0 + PRUNE_SLACK),
        nodes: 0,
        coeffs: vec![0; n],
        found: Vec::new(),
    };
    search.descend(n - 1, 0.0, true)?;
    let mut found = search.found;
    found.sort_by(|a, b| a.raw_norm_sq.cmp(&b.raw_norm_sq).then_with(|| a.coeffs.cmp(&b.coeffs)));
    Ok(found)
}

/// All antipodal pairs with 𝒱 <= t, one canonical representative per pair,
/// sorted by exact rawNormSq (ties by lexicographic representative).
pub fn enumerate_up_to_volume(b: &LatticeBasis, t: f64) -> Result<VolumeSequence> {
    enumerate_with_config(b, t, &EnumerationConfig::default())
}

pub fn enumerate_with_config(
    b: &LatticeBasis,
    t: f64,
    cfg: &EnumerationConfig,
) -> Result<VolumeSequence> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("volume cutoff must be positive, got {t}")));
    }
    let entries = if let Some(sb) = reduce_scalar::<i128>(b, cfg.delta) {
        enumerate_scalar(&sb, b, t, cfg)?
    } else {
        let sb = reduce_scalar::<BigInt>(b, cfg.delta)
            .ok_or_else(|| Error::PrecisionLoss("lll reduction did not converge".into()))?;
        enumerate_scalar(&sb, b, t, cfg)?
    };
    Ok(VolumeSequence { dim: b.dim(), raw_det: b.raw_det().clone(), entries, cutoff: t })
}

/// The N smallest entries of the volume sequence, by enumerating up to the
/// limit-mean heuristic t = 2N and doubling until at least N pairs are found.
/// The result is independent of the doubling path since each census is
/// complete.
pub fn first_volumes(b: &LatticeBasis, n_entries: usize) -> Result<VolumeSequence> {
    first_volumes_with_config(b, n_entries, &EnumerationConfig::default())
}

pub fn first_volumes_with_config(
    b: &LatticeBasis,
    n_entries: usize,
    cfg: &EnumerationConfig,
) -> Result<VolumeSequence> {
    if n_entries == 0 {
        return Err(Error::InvalidInput("need N >= 1".into()));
    }
    let mut t = 2.0 * n_entries as f64;
    loop {
        let mut vols = enumerate_with_config(b, t, cfg)?;
        if vols.total_multiplicity() >= n_entries as u64 {
            vols.entries.truncate(n_entries);
            // The census is complete up to the last kept volume.
            vols.cutoff = vols.entries.last().unwrap().volume;
            return Ok(vols);
        }
        t *= 2.0;
    }
}

/// First N flat-torus eigenvalue coordinates of the basis: {½𝒱_j} of the dual
/// lattice, normalized to mean spacing one.
pub fn torus_eigenvalue_volumes(b: &LatticeBasis, n_entries: usize) -> Result<Vec<f64>> {
    let dual = b.dual();
    let vols = first_volumes(&dual, n_entries)?;
    Ok(vols.entries.iter().map(|e| 0.5 * e.volume).collect())
}
