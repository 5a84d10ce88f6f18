//! Flag-value parsing: exact rationals, threshold lists, interval lists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

use crate::{AppError, AppResult};

/// Parses "p/q" or a plain integer. Decimals are rejected: exact-moment
/// commands carry an exactness contract.
pub fn parse_rational(s: &str) -> AppResult<BigRational> {
    let s = s.trim();
    if s.contains('.') {
        return Err(AppError::Usage(format!(
            "exact volumes must be rationals \"p/q\" or integers, got decimal {s:?}"
        )));
    }
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim())
                .map_err(|_| AppError::Usage(format!("bad numerator in {s:?}")))?;
            let q = BigInt::from_str(q.trim())
                .map_err(|_| AppError::Usage(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(AppError::Usage(format!("zero denominator in {s:?}")));
            }
            BigRational::new(p, q)
        }
        None => BigRational::from(
            BigInt::from_str(s).map_err(|_| AppError::Usage(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(r)
}

pub fn parse_rational_list(s: &str) -> AppResult<Vec<BigRational>> {
    s.split(',').map(parse_rational).collect()
}

/// Comma-separated sorted positive f64 thresholds.
pub fn parse_thresholds(s: &str) -> AppResult<Vec<f64>> {
    let ts: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Usage(format!("bad threshold {x:?}")))
        })
        .collect::<AppResult<_>>()?;
    if ts.is_empty() || ts.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(AppError::Usage("thresholds must be positive and finite".into()));
    }
    if ts.windows(2).any(|w| w[0] > w[1]) {
        return Err(AppError::Usage("thresholds must be sorted ascending".into()));
    }
    Ok(ts)
}

/// Intervals "a:b" joined by ";", e.g. "-1:1;-0.5:0.5".
pub fn parse_intervals(s: &str) -> AppResult<Vec<(f64, f64)>> {
    s.split(';')
        .map(|part| {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| AppError::Usage(format!("interval {part:?} is not \"a:b\"")))?;
            let a = a
                .trim()
                .parse::<f64>()
                .map_err(|_| AppError::Usage(format!("bad interval endpoint {a:?}")))?;
            let b = b
                .trim()
                .parse::<f64>()
                .map_err(|_| AppError::Usage(format!("bad interval endpoint {b:?}")))?;
            Ok((a, b))
        })
        .collect()
}

pub fn parse_prime(s: &str) -> AppResult<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| AppError::Usage(format!("bad prime {s:?}")))
}
