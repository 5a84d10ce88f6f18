//! `randlat verify`: the full exact-identity suite up to --k-max.
//!
//! Per order k it cross-checks, in exact integer/rational arithmetic:
//! admissible-matrix brute counts vs the product oracle vs the closed form,
//! the bijection between the nonnegative matrix class and set partitions
//! (with Bell-number totals), the 2^{-k} matrix/partition moment identity on
//! seeded random rational volume vectors, and the Touchard form of the
//! equal-volume Poisson moment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use std::collections::BTreeSet;

use crate::{AppError, AppResult, VerifyArgs};
use randlat::{
    bell_number, bijection_g, bijection_g_inverse, closed_form_m, count_admissible,
    enumerate_admissible, enumerate_divisions, enumerate_nonnegative_class, enumerate_partitions,
    limit_moment_matrix_form, limit_moment_partition_form, pair_moment, touchard_poisson_moment,
    trial_rng, MomentSpec, DEFAULT_K_MAX,
};

/// Random volume vectors checked per order in the moment-identity sweep.
const RANDOM_VECTORS_PER_K: usize = 5;

fn fail(msg: String) -> AppError {
    AppError::Verify(msg)
}

/// Sorted random rationals with numerators in 1..=24 and denominators in
/// 1..=8, a range where k <= 7 moments stay cheap.
fn random_spec(k: usize, seed: u64, index: u64) -> MomentSpec {
    let mut rng = trial_rng(seed, (k as u64) << 32 | index);
    let mut vols: Vec<BigRational> = (0..k)
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.gen_range(1..=24u32)),
                BigInt::from(rng.gen_range(1..=8u32)),
            )
        })
        .collect();
    vols.sort();
    MomentSpec::new(vols).expect("positive sorted by construction")
}

fn check_counts(k: usize, corrupt: bool) -> AppResult<(usize, usize)> {
    let divisions = enumerate_divisions(k);
    let mut matrices = 0usize;
    for d in &divisions {
        let brute = BigInt::from(enumerate_admissible(d).len());
        let oracle = count_admissible(d);
        if brute != oracle {
            return Err(fail(format!(
                "k={k}: division nu={:?}: brute count {brute} != oracle {oracle}",
                d.nu
            )));
        }
        if d.nu[0] == 1 {
            let mut closed = closed_form_m(d)?;
            if corrupt {
                closed += BigInt::one();
            }
            if closed != oracle {
                return Err(fail(format!(
                    "k={k}: division nu={:?}: closed form {closed} != oracle {oracle}",
                    d.nu
                )));
            }
        } else if oracle != BigInt::from(0u8) {
            return Err(fail(format!(
                "k={k}: division nu={:?} has nu_1 != 1 but nonzero count {oracle}",
                d.nu
            )));
        }
        matrices += enumerate_admissible(d).len();
    }
    Ok((divisions.len(), matrices))
}

fn check_bijection(k: usize) -> AppResult<BigInt> {
    let class = enumerate_nonnegative_class(k);
    let bell = bell_number(k);
    if BigInt::from(class.len()) != bell {
        return Err(fail(format!(
            "k={k}: |D(k)| = {} but Bell({k}) = {bell}",
            class.len()
        )));
    }
    let mut images: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    for mat in &class {
        let p = bijection_g(mat)?;
        if p.blocks.len() != mat.division.m() {
            return Err(fail(format!("k={k}: g image has wrong block count")));
        }
        let minima: Vec<usize> = p.blocks.iter().map(|b| b[0]).collect();
        if minima != mat.division.nu {
            return Err(fail(format!("k={k}: g image block minima differ from nu")));
        }
        if &bijection_g_inverse(&p) != mat {
            return Err(fail(format!("k={k}: g inverse does not round-trip")));
        }
        images.insert(p.blocks.clone());
    }
    let all: BTreeSet<Vec<Vec<usize>>> =
        enumerate_partitions(k)?.into_iter().map(|p| p.blocks).collect();
    if images != all {
        return Err(fail(format!("k={k}: g is not onto the set partitions")));
    }
    Ok(bell)
}

fn check_moment_identity(k: usize, seed: u64) -> AppResult<()> {
    let two_k = BigRational::from(BigInt::from(2u8).pow(k as u32));
    for i in 0..RANDOM_VECTORS_PER_K as u64 {
        let spec = random_spec(k, seed, i);
        let matrix = limit_moment_matrix_form(&spec)?;
        let partition = limit_moment_partition_form(&spec)?;
        if &matrix / &two_k != partition {
            return Err(fail(format!(
                "k={k}: 2^-k * matrix = {} != partition = {partition} at volumes {:?}",
                &matrix / &two_k,
                spec.volumes().iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )));
        }
        if pair_moment(&spec)? != partition {
            return Err(fail(format!("k={k}: pair moment disagrees with partition form")));
        }
    }
    Ok(())
}

fn check_touchard(k: usize) -> AppResult<()> {
    for (p, q) in [(1u32, 1u32), (2, 1), (7, 3)] {
        let v = BigRational::new(BigInt::from(p), BigInt::from(q));
        let spec = MomentSpec::new(vec![v.clone(); k]).expect("equal positive volumes");
        let partition = limit_moment_partition_form(&spec)?;
        let touchard = touchard_poisson_moment(k, &(&v / BigRational::from(BigInt::from(2))))?;
        if partition != touchard {
            return Err(fail(format!(
                "k={k}, V={p}/{q}: partition form {partition} != Touchard moment {touchard}"
            )));
        }
    }
    Ok(())
}

pub fn run(a: &VerifyArgs) -> AppResult<()> {
    if a.k_max == 0 || a.k_max > DEFAULT_K_MAX {
        return Err(AppError::Usage(format!("--k-max must be in 1..={DEFAULT_K_MAX}")));
    }
    let seed = crate::resolve_seed(a.seed)?;
    for k in 1..=a.k_max {
        let (n_div, n_mat) = check_counts(k, a.corrupt)?;
        let bell = check_bijection(k)?;
        check_moment_identity(k, seed)?;
        check_touchard(k)?;
        println!(
            "k={k}: divisions={n_div} matrices={n_mat} Bell={bell} \
             identities=ok ({RANDOM_VECTORS_PER_K} random volume vectors)"
        );
    }
    println!("verify: all identities hold for k <= {}", a.k_max);
    Ok(())
}
