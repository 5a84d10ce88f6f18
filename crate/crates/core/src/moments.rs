//! Exact rational evaluation of the limiting joint moments of the pair
//! counting functions, by two independent routes:
//!
//! * matrix form: ∏ V_j + Σ_{(ν,μ)} M_{ν,μ} ∏ V_{ν_i}, where M_{ν,μ} counts
//!   the (ν,μ)-admissible m×k matrices with entries in {0,±1} and exactly one
//!   nonzero entry per column;
//! * partition form: Σ_{P} 2^{-#P} ∏_{B∈P} V_{j_B} over set partitions of
//!   {1,…,k}, with j_B the block minimum.
//!
//! The two are tied together by 2^{-k} * matrix = partition, by an explicit
//! bijection between the nonnegative matrix class (plus I_k) and set
//! partitions, and by the Touchard/Stirling Poisson-moment identity for equal
//! volumes. Everything here is exact rational arithmetic; reals never enter.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default cap on k: Bell(10) = 115975 and 2^10 - 2 divisions keep exhaustive
/// verification fast; beyond that the enumeration blows up combinatorially.
pub const DEFAULT_K_MAX: usize = 10;

/// A division (ν, μ) of {1,…,k}: two disjoint increasing sequences covering
/// the whole range. Rogers' formula sums over divisions with 1 <= m <= k-1;
/// the bijection additionally uses the identity augmentation m = k (ν_i = i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub k: usize,
    /// 1-based, strictly increasing, nonempty.
    pub nu: Vec<usize>,
    /// 1-based, strictly increasing; the complement of nu in {1,…,k}.
    pub mu: Vec<usize>,
}

impl Division {
    pub fn new(k: usize, nu: Vec<usize>) -> Result<Self> {
        if nu.is_empty() || nu.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("nu must be nonempty strictly increasing".into()));
        }
        if nu[0] < 1 || *nu.last().unwrap() > k {
            return Err(Error::InvalidInput(format!("nu out of range 1..={k}")));
        }
        let mu: Vec<usize> = (1..=k).filter(|j| !nu.contains(j)).collect();
        Ok(Self { k, nu, mu })
    }

    pub fn m(&self) -> usize {
        self.nu.len()
    }
}

/// An m×k admissible matrix of the main-term class: entries in {0,±1},
/// exactly one nonzero per column, d_{i,ν_j} = δ_{ij}, d_{i,μ_j} = 0 for
/// μ_j < ν_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleMatrix {
    pub division: Division,
    /// Row-major m×k entries in {-1, 0, 1}.
    pub entries: Vec<Vec<i8>>,
}

/// Partition of {1,…,k}; blocks sorted by minimum element, elements 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
}

/// Moment specification: k and sorted positive volumes V_1 <= … <= V_k.
#[derive(Debug, Clone)]
pub struct MomentSpec {
    volumes: Vec<BigRational>,
}

impl MomentSpec {
    pub fn new(volumes: Vec<BigRational>) -> Result<Self> {
        if volumes.is_empty() {
            return Err(Error::InvalidInput("need at least one volume".into()));
        }
        if volumes.iter().any(|v| *v <= BigRational::zero()) {
            return Err(Error::InvalidInput("volumes must be positive".into()));
        }
        if volumes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput("volumes must be sorted nondecreasing".into()));
        }
        Ok(Self { volumes })
    }

    pub fn k(&self) -> usize {
        self.volumes.len()
    }

    pub fn volumes(&self) -> &[BigRational] {
        &self.volumes
    }

    fn check_k(&self, k_max: usize) -> Result<()> {
        if self.k() > k_max {
            return Err(Error::KTooLarge { k: self.k(), k_max });
        }
        Ok(())
    }
}

/// All divisions of {1,…,k} with 1 <= m <= k-1, ordered by m then by ν
/// lexicographically. Empty for k = 1.
pub fn enumerate_divisions(k: usize) -> Vec<Division> {
    let mut out = Vec::new();
    for m in 1..k {
        let mut nu: Vec<usize> = (1..=m).collect();
        loop {
            out.push(Division::new(k, nu.clone()).unwrap());
            // Next m-combination of {1,…,k} in lexicographic order.
            let mut i = m;
            loop {
                if i == 0 {
                    break;
                }
                if nu[i - 1] < k - (m - i) {
                    nu[i - 1] += 1;
                    for j in i..m {
                        nu[j] = nu[j - 1] + 1;
                    }
                    break;
                }
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
    out
}

/// Rows allowed to carry the nonzero entry of column μ_ℓ: those i with
/// ν_i < μ_ℓ (the zero-pattern condition kills the rest, and the forced
/// ν-columns already carry their δ entries).
fn allowed_rows(d: &Division, mu_col: usize) -> Vec<usize> {
    d.nu.iter().enumerate().filter(|&(_, &nv)| nv < mu_col).map(|(i, _)| i).collect()
}

/// Brute-force enumeration of the full restricted admissible class for one
/// division: per μ-column, a choice of allowed row and sign.
pub fn enumerate_admissible(d: &Division) -> Vec<AdmissibleMatrix> {
    let m = d.m();
    let k = d.k;
    let per_col: Vec<Vec<usize>> = d.mu.iter().map(|&c| allowed_rows(d, c)).collect();
    // A column that cannot be filled would vanish; the whole class is empty.
    if per_col.iter().any(|rows| rows.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Odometer over (row, sign) choices per μ-column.
    let cols = d.mu.len();
    let mut choice = vec![0usize; cols];
    loop {
        let mut entries = vec![vec![0i8; k]; m];
        for (j, &nv) in d.nu.iter().enumerate() {
            entries[j][nv - 1] = 1;
        }
        for (c, &mu_col) in d.mu.iter().enumerate() {
            let rows = &per_col[c];
            let row = rows[choice[c] / 2];
            let sign = if choice[c] % 2 == 0 { 1 } else { -1 };
            entries[row][mu_col - 1] = sign;
        }
        out.push(AdmissibleMatrix { division: d.clone(), entries });
        // Advance odometer.
        let mut c = 0;
        while c < cols {
            choice[c] += 1;
            if choice[c] < per_col[c].len() * 2 {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
        if c == cols {
            break;
        }
    }
    out
}

/// Product oracle for the size of the admissible class:
/// ∏_ℓ 2 * #{i : ν_i < μ_ℓ}.
pub fn count_admissible(d: &Division) -> BigInt {
    let mut count = BigInt::one();
    for &c in &d.mu {
        count *= 2 * allowed_rows(d, c).len();
    }
    count
}

/// Closed form for M_{ν,μ} when ν_1 = 1:
/// 2^{k-m} (∏_{j=2}^{m-1} j^{ν_{j+1}-ν_j-1}) m^{k-ν_m}.
pub fn closed_form_m(d: &Division) -> Result<BigInt> {
    if d.nu[0] != 1 {
        return Err(Error::InvalidInput(
            "closed form applies only to divisions with nu_1 = 1 (count is 0 otherwise)".into(),
        ));
    }
    let m = d.m();
    let k = d.k;
    let mut val = BigInt::from(2u32).pow((k - m) as u32);
    for j in 2..m {
        let e = (d.nu[j] - d.nu[j - 1] - 1) as u32;
        val *= BigInt::from(j).pow(e);
    }
    val *= BigInt::from(m).pow((k - d.nu[m - 1]) as u32);
    Ok(val)
}

/// Limiting joint moment of the full (vector-counted) counting functions:
/// ∏ V_j + Σ_{(ν,μ)} M_{ν,μ} ∏_i V_{ν_i}.
pub fn limit_moment_matrix_form(s: &MomentSpec) -> Result<BigRational> {
    limit_moment_matrix_form_capped(s, DEFAULT_K_MAX)
}

pub fn limit_moment_matrix_form_capped(s: &MomentSpec, k_max: usize) -> Result<BigRational> {
    s.check_k(k_max)?;
    let v = s.volumes();
    let mut total: BigRational = v.iter().product();
    for d in enumerate_divisions(s.k()) {
        let m_count = count_admissible(&d);
        if m_count.is_zero() {
            continue;
        }
        let prod: BigRational = d.nu.iter().map(|&i| v[i - 1].clone()).product();
        total += BigRational::from(m_count) * prod;
    }
    Ok(total)
}

/// All Bell(k) set partitions of {1,…,k}, via restricted growth strings,
/// blocks in canonical order (sorted by minima).
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>> {
    enumerate_partitions_capped(k, DEFAULT_K_MAX)
}

pub fn enumerate_partitions_capped(k: usize, k_max: usize) -> Result<Vec<SetPartition>> {
    if k > k_max {
        return Err(Error::KTooLarge { k, k_max });
    }
    assert!(k >= 1);
    let mut out = Vec::new();
    // Restricted growth strings: a[0] = 0, a[i] <= max(a[0..i]) + 1.
    let mut a = vec![0usize; k];
    loop {
        let nblocks = a.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in a.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition { k, blocks });
        // Next RGS.
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let cap = *a[..i].iter().max().unwrap() + 1;
            if a[i] < cap {
                a[i] += 1;
                for x in a[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Limiting joint moment of the pair counting process:
/// Σ_{P} 2^{-#P} ∏_{B∈P} V_{j_B}.
pub fn limit_moment_partition_form(s: &MomentSpec) -> Result<BigRational> {
    limit_moment_partition_form_capped(s, DEFAULT_K_MAX)
}

pub fn limit_moment_partition_form_capped(s: &MomentSpec, k_max: usize) -> Result<BigRational> {
    s.check_k(k_max)?;
    let v = s.volumes();
    let mut total = BigRational::zero();
    for p in enumerate_partitions_capped(s.k(), k_max)? {
        let weight = BigRational::new(BigInt::one(), BigInt::from(2u32).pow(p.blocks.len() as u32));
        let prod: BigRational = p.blocks.iter().map(|b| v[b[0] - 1].clone()).product();
        total += weight * prod;
    }
    Ok(total)
}

/// 2^{-k} times the matrix form: the limiting moment E(∏ Ñ_j), equal exactly
/// to the partition form.
pub fn pair_moment(s: &MomentSpec) -> Result<BigRational> {
    pair_moment_capped(s, DEFAULT_K_MAX)
}

pub fn pair_moment_capped(s: &MomentSpec, k_max: usize) -> Result<BigRational> {
    let m = limit_moment_matrix_form_capped(s, k_max)?;
    let scale = BigRational::new(BigInt::one(), BigInt::from(2u32).pow(s.k() as u32));
    Ok(m * scale)
}

/// The nonnegative matrix domain of the bijection: for every division, the
/// admissible matrices with entries in {0,1}, plus the k×k identity.
pub fn enumerate_nonnegative_class(k: usize) -> Vec<AdmissibleMatrix> {
    let mut out = Vec::new();
    for d in enumerate_divisions(k) {
        out.extend(
            enumerate_admissible(&d)
                .into_iter()
                .filter(|m| m.entries.iter().all(|r| r.iter().all(|&e| e >= 0))),
        );
    }
    // Identity augmentation with nu_i = i.
    let id_div = Division::new(k, (1..=k).collect()).unwrap();
    let mut entries = vec![vec![0i8; k]; k];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = 1;
    }
    out.push(AdmissibleMatrix { division: id_div, entries });
    out
}

/// The bijection g: row supports become blocks, B_i = {j | d_{ij} ≠ 0}.
pub fn bijection_g(mat: &AdmissibleMatrix) -> Result<SetPartition> {
    if mat.entries.iter().any(|r| r.iter().any(|&e| e < 0)) {
        return Err(Error::InvalidInput(
            "bijection is defined on the nonnegative matrix class".into(),
        ));
    }
    let k = mat.division.k;
    let blocks: Vec<Vec<usize>> = mat
        .entries
        .iter()
        .map(|row| (1..=k).filter(|&j| row[j - 1] != 0).collect())
        .collect();
    Ok(SetPartition { k, blocks })
}

/// Inverse of g: the unique nonnegative one-per-column matrix whose row
/// supports are the blocks ordered by minima.
pub fn bijection_g_inverse(p: &SetPartition) -> AdmissibleMatrix {
    let k = p.k;
    let mut blocks = p.blocks.clone();
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort_by_key(|b| b[0]);
    let nu: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let division = Division::new(k, nu).unwrap();
    let mut entries = vec![vec![0i8; k]; blocks.len()];
    for (i, b) in blocks.iter().enumerate() {
        for &j in b {
            entries[i][j - 1] = 1;
        }
    }
    AdmissibleMatrix { division, entries }
}

/// Stirling numbers of the second kind S(k, j), j = 0..=k.
pub fn stirling2_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (j, v) in row.iter().enumerate() {
            // S(n+1, j) = j*S(n, j) + S(n, j-1)
            next[j] += v * BigInt::from(j);
            next[j + 1] += v;
        }
        row = next;
    }
    row
}

/// Touchard identity: k-th moment of Poisson(λ) = Σ_j S(k,j) λ^j.
/// Independent oracle for the partition form at equal volumes.
pub fn touchard_poisson_moment(k: usize, lambda: &BigRational) -> Result<BigRational> {
    if *lambda <= BigRational::zero() {
        return Err(Error::InvalidInput("lambda must be positive".into()));
    }
    let mut total = BigRational::zero();
    let mut pow = BigRational::one();
    for s in stirling2_row(k) {
        total += BigRational::from(s) * &pow;
        pow *= lambda;
    }
    Ok(total)
}

/// Bell numbers via the Bell-triangle recurrence; independent of the
/// partition enumerator.
pub fn bell_number(k: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for _ in 1..=k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        row = next;
    }
    row[0].clone()
}
