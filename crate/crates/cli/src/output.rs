//! Report metadata and output plumbing. Every run embeds (version, full
//! config, seed, prime, RNG algorithm) in its output; the timestamp is
//! suppressed under --deterministic so reruns are byte-identical.

use serde::Serialize;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::{AppResult, CommonOut};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Meta {
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<String>,
    pub rng_algorithm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unix_time: Option<u64>,
}

impl Meta {
    pub fn new(command: &str, config: serde_json::Value, deterministic: bool) -> Self {
        let unix_time = if deterministic {
            None
        } else {
            SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            seed: None,
            prime: None,
            rng_algorithm: randlat::RNG_ALGORITHM.to_string(),
            unix_time,
        }
    }
}

/// Serializes the finished report and writes it in one shot (stdout or --out),
/// so invalid input never leaves a partial output file behind.
pub fn write_report<T: Serialize>(out: &CommonOut, report: &T) -> AppResult<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
