//! `randlat shortvec`: short-vector census of one basis file.

use serde::Serialize;
use serde_json::json;

use crate::output::{write_report, Meta};
use crate::{AppError, AppResult, ShortvecArgs};
use randlat::{first_volumes_with_config, enumerate_with_config, EnumerationConfig, LatticeBasis};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ShortvecReport {
    meta: Meta,
    dim: u32,
    cutoff: f64,
    volumes: Vec<f64>,
    #[serde(rename = "rawNormSq")]
    raw_norm_sq: Vec<String>,
    multiplicities: Vec<u32>,
}

pub fn run(a: &ShortvecArgs) -> AppResult<()> {
    let text = std::fs::read_to_string(&a.basis)?;
    let basis = LatticeBasis::from_json(&text)?;
    let cfg = EnumerationConfig { node_budget: a.node_budget, ..Default::default() };
    let vols = match (a.volume_max, a.first) {
        (Some(t), None) => enumerate_with_config(&basis, t, &cfg)?,
        (None, Some(n)) => first_volumes_with_config(&basis, n, &cfg)?,
        _ => {
            return Err(AppError::Usage(
                "exactly one of --volume-max or --first is required".into(),
            ))
        }
    };
    let meta = Meta::new(
        "shortvec",
        json!({
            "basis": a.basis.display().to_string(),
            "volumeMax": a.volume_max,
            "first": a.first,
            "nodeBudget": a.node_budget,
        }),
        a.out.deterministic,
    );
    let report = ShortvecReport {
        meta,
        dim: basis.dim(),
        cutoff: vols.cutoff,
        volumes: vols.entries.iter().map(|e| e.volume).collect(),
        raw_norm_sq: vols.entries.iter().map(|e| e.raw_norm_sq.to_string()).collect(),
        multiplicities: vols.entries.iter().map(|e| e.multiplicity).collect(),
    };
    write_report(&a.out, &report)
}
