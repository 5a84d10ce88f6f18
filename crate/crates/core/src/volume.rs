//! Ball-volume coordinates: κ_n = π^{n/2}/Γ(n/2+1), log-space length→volume
//! conversion, and the exact inclusive radius test used by the enumeration
//! kernel and the counting function.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Default relative guard band around the enumeration radius. Acceptance is
/// inclusive: a vector is kept iff rawNormSq <= bound * (1 + guard), with
/// decisions inside the band resolved exactly.
pub const DEFAULT_GUARD: f64 = 1e-9;

/// pi * 10^60, truncated. `PI_SCALED / 10^60 < pi < (PI_SCALED + 1) / 10^60`.
const PI_SCALED: &str = "3141592653589793238462643383279502884197169399375105820974944";
const PI_SCALE_DIGITS: u32 = 60;

fn pi_lower() -> BigRational {
    let p: BigInt = PI_SCALED.parse().unwrap();
    let q = BigInt::from(10u32).pow(PI_SCALE_DIGITS);
    BigRational::new(p, q)
}

/// ln of the volume of the unit n-ball, via log-Γ.
pub fn ln_ball_volume_coeff(n: u32) -> f64 {
    let nf = n as f64;
    0.5 * nf * std::f64::consts::PI.ln() - ln_gamma(0.5 * nf + 1.0)
}

/// Volume of the unit n-ball, κ_n = π^{n/2} / Γ(n/2 + 1).
pub fn ball_volume_coeff(n: u32) -> f64 {
    assert!(n >= 1);
    ln_ball_volume_coeff(n).exp()
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn bigint_ln(x: &BigInt) -> f64 {
    assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2.to_owned()
}

/// Volume of the ball whose radius is the true (covolume-1) length of a raw
/// vector: κ_n * rawNormSq^{n/2} / rawDet, evaluated in log space.
pub fn length_to_volume(n: u32, raw_norm_sq: &BigInt, raw_det: &BigInt) -> f64 {
    assert!(!raw_norm_sq.is_negative() && raw_det.is_positive());
    if raw_norm_sq.is_zero() {
        return 0.0;
    }
    let ln_v = ln_ball_volume_coeff(n) + 0.5 * n as f64 * bigint_ln(raw_norm_sq)
        - bigint_ln(raw_det);
    ln_v.exp()
}

/// Floating-point rawNormSq bound for volume cutoff t: (t * rawDet / κ_n)^{2/n}.
pub fn raw_norm_sq_bound(n: u32, raw_det: &BigInt, t: f64) -> f64 {
    assert!(t > 0.0);
    let ln_b = (t.ln() + bigint_ln(raw_det) - ln_ball_volume_coeff(n)) * 2.0 / n as f64;
    ln_b.exp()
}

/// κ_n^2 as an exact rational times an explicit power of π:
/// returns (rat, pow) with κ_n^2 = rat * π^pow.
fn kappa_sq_parts(n: u32) -> (BigRational, u32) {
    if n % 2 == 0 {
        // κ^2 = π^n / (h!)^2 with h = n/2.
        let h = n / 2;
        let mut fact = BigInt::one();
        for i in 2..=h {
            fact *= i;
        }
        (BigRational::new(BigInt::one(), &fact * &fact), n)
    } else {
        // Γ(n/2+1) = sqrt(π) n!! / 2^{(n+1)/2}, so κ^2 = π^{n-1} 2^{n+1} / (n!!)^2.
        let mut dfact = BigInt::one();
        let mut i = n;
        while i > 1 {
            dfact *= i;
            i -= 2;
        }
        let num = BigInt::one() << (n + 1);
        (BigRational::new(num, &dfact * &dfact), n - 1)
    }
}

/// Exact inclusive radius test: rawNormSq <= (t * rawDet / κ_n)^{2/n} * (1+g),
/// decided with rational arithmetic and a 60-digit rational lower bound on π.
///
/// Equivalent to rawNormSq^n * κ_n^2 <= t^2 * rawDet^2 * (1+g)^n.
pub fn accepts_exact(n: u32, raw_norm_sq: &BigInt, raw_det: &BigInt, t: f64, guard: f64) -> bool {
    assert!(t >= 0.0);
    if raw_norm_sq.is_zero() {
        return true;
    }
    if t == 0.0 {
        return false;
    }
    let t_r = BigRational::from_f64(t).expect("finite t");
    let g_r = BigRational::from_f64(1.0 + guard).expect("finite guard");
    let (kappa_rat, pi_pow) = kappa_sq_parts(n);

    let s_pow = BigRational::from(raw_norm_sq.pow(n));
    let lhs = s_pow * kappa_rat * pi_lower().pow(pi_pow as i32);
    let det_r = BigRational::from(raw_det.clone());
    let rhs = &t_r * &t_r * &det_r * &det_r * g_r.pow(n as i32);
    lhs <= rhs
}

/// Classify a rawNormSq against the floating bound: clearly inside, clearly
/// outside, or within the guard band (needs the exact test).
pub fn accepts(n: u32, raw_norm_sq: &BigInt, raw_det: &BigInt, t: f64, guard: f64) -> bool {
    let b = raw_norm_sq_bound(n, raw_det, t);
    match raw_norm_sq.to_f64() {
        Some(s) if s <= b * (1.0 - 1e4 * guard) => true,
        Some(s) if s > b * (1.0 + 1e4 * guard) => false,
        _ => accepts_exact(n, raw_norm_sq, raw_det, t, guard),
    }
}

/// Validates n for operations that require a positive dimension.
pub fn check_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n}")));
    }
    Ok(())
}
