//! Seeded samplers: Goldstein–Mayer random lattices (an approximate Haar
//! sampler on the space of covolume-1 lattices, exact as p → ∞) and exact
//! Poisson processes of intensity ½ on the positive line.
//!
//! All randomness flows through ChaCha12 streams keyed by a SplitMix-style
//! per-trial derivation, so trials are independent and the whole pipeline is
//! bit-reproducible for a fixed (config, seed).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::matrix::IntMatrix;

/// RNG algorithm identifier recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha12";

const MILLER_RABIN_ROUNDS: u32 = 40;

/// Per-trial seed derivation: SplitMix64 finalizer over seed ^ rot32(trial).
/// Bijective in trial for fixed seed.
pub fn derive(seed: u64, trial: u64) -> u64 {
    let mut z = (seed ^ trial.rotate_left(32)).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The stream a trial draws from.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive(seed, trial))
}

/// Configuration of the Goldstein–Mayer sampler.
#[derive(Debug, Clone)]
pub struct GmConfig {
    dim: u32,
    prime: BigInt,
    seed: u64,
}

impl GmConfig {
    pub fn new(dim: u32, prime: BigInt, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!("dimension must be >= 2, got {dim}")));
        }
        if prime < BigInt::from(3) || !is_probable_prime(&prime, MILLER_RABIN_ROUNDS) {
            return Err(Error::InvalidInput(format!("{prime} is not an odd prime")));
        }
        Ok(Self { dim, prime, seed })
    }

    /// Default prime: smallest prime >= 10^9 + (seed-dependent offset < 10^6).
    pub fn with_default_prime(dim: u32, seed: u64) -> Result<Self> {
        let offset = derive(seed, 0x6d70_7269_6d65) % 1_000_000;
        let p = next_prime(&BigInt::from(1_000_000_000u64 + offset));
        Self::new(dim, p, seed)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn prime(&self) -> &BigInt {
        &self.prime
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws the cyclic Goldstein–Mayer lattice for one trial: rows
/// [1, a_2, …, a_n], [0, p, 0, …], …, [0, …, 0, p] with a_i uniform in [0, p).
/// rawDet = p^{n-1}.
pub fn sample_gm_lattice(cfg: &GmConfig, trial: u64) -> LatticeBasis {
    let n = cfg.dim as usize;
    let mut rng = trial_rng(cfg.seed, trial);
    let mut rows: IntMatrix = vec![vec![BigInt::zero(); n]; n];
    rows[0][0] = BigInt::one();
    for j in 1..n {
        rows[0][j] = uniform_below(&mut rng, &cfg.prime);
        rows[j][j] = cfg.prime.clone();
    }
    LatticeBasis::new(rows).expect("GM basis is triangular with nonzero diagonal")
}

/// Uniform BigInt in [0, bound) by top-bits rejection.
fn uniform_below(rng: &mut impl RngCore, bound: &BigInt) -> BigInt {
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let top_mask = if bits % 64 == 0 { u64::MAX } else { (1u64 << (bits % 64)) - 1 };
    loop {
        let mut digits = Vec::with_capacity(words);
        for i in 0..words {
            let mut w = rng.next_u64();
            if i == words - 1 {
                w &= top_mask;
            }
            digits.push(w);
        }
        let x = BigInt::from(num_bigint::BigUint::from_slice(
            &digits.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        ));
        if &x < bound {
            return x;
        }
    }
}

/// Ordered points of an intensity-½ Poisson process on (0, horizon].
#[derive(Debug, Clone)]
pub struct PoissonSample {
    pub points: Vec<f64>,
    pub horizon: f64,
}

impl PoissonSample {
    pub const INTENSITY: f64 = 0.5;

    /// N(t): number of points in (0, t].
    pub fn count_up_to(&self, t: f64) -> Result<u64> {
        if t > self.horizon {
            return Err(Error::CensusIncomplete { requested: t, cutoff: self.horizon });
        }
        Ok(self.points.iter().take_while(|&&x| x <= t).count() as u64)
    }
}

/// Simulates one trial: cumulative sums of i.i.d. Exp(mean 2) gaps via the
/// inverse CDF -2 ln(1-u), truncated at the horizon. The inverse-CDF coupling
/// is monotone in the underlying uniforms.
pub fn sample_poisson(horizon: f64, seed: u64, trial: u64) -> Result<PoissonSample> {
    if !(horizon > 0.0) {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let mut rng = trial_rng(seed, trial);
    let mut points = Vec::new();
    let mut t = 0.0_f64;
    loop {
        let u = uniform_53(&mut rng);
        t += -2.0 * (1.0 - u).ln();
        if t > horizon {
            break;
        }
        points.push(t);
    }
    Ok(PoissonSample { points, horizon })
}

/// 53-bit uniform in [0, 1).
fn uniform_53(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Miller-Rabin with `rounds` pseudo-random bases drawn from a stream keyed
/// by the candidate itself (deterministic verdicts).
pub fn is_probable_prime(n: &BigInt, rounds: u32) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigInt::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1;
    let mut d = n_minus_1.clone();
    let mut r = 0u64;
    while (&d % BigInt::from(2)).is_zero() {
        d /= 2;
        r += 1;
    }
    let mut rng = ChaCha12Rng::seed_from_u64(derive(
        0x7072_696d_6521,
        n.iter_u64_digits().fold(0u64, |a, w| a.rotate_left(7) ^ w),
    ));
    let two = BigInt::from(2);
    let span = n - 3; // bases in [2, n-2]
    'witness: for _ in 0..rounds {
        let a = &two + uniform_below(&mut rng, &span);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..r.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(start: &BigInt) -> BigInt {
    let mut p = start.clone();
    if (&p % BigInt::from(2)).is_zero() {
        p += 1;
    }
    while !is_probable_prime(&p, MILLER_RABIN_ROUNDS) {
        p += 2;
    }
    p
}
