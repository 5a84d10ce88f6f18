pub mod compare;
pub mod correlations;
pub mod exact_moments;
pub mod sample;
pub mod shortvec;
pub mod simulate;
pub mod verify;

use num_bigint::BigInt;

use crate::parse::parse_prime;
use crate::{AppResult, resolve_seed};
use randlat::GmConfig;

/// Shared GM-lattice config resolution: --prime wins, else the seed-derived
/// default prime >= 10^9.
pub fn gm_config(dim: u32, prime: &Option<String>, seed: Option<u64>) -> AppResult<GmConfig> {
    let seed = resolve_seed(seed)?;
    let cfg = match prime {
        Some(p) => {
            let p: BigInt = parse_prime(p)?;
            GmConfig::new(dim, p, seed)?
        }
        None => GmConfig::with_default_prime(dim, seed)?,
    };
    Ok(cfg)
}
