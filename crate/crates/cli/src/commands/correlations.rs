//! `randlat correlations`: m-level correlation estimate of the ball-volume
//! sequence of one lattice, against the Poissonian limit 2^{1-m} prod |I_j|.

use serde::Serialize;
use serde_json::json;

use crate::output::{write_report, Meta};
use crate::parse::parse_intervals;
use crate::{AppError, AppResult, CorrelationsArgs};
use randlat::{
    first_volumes_with_config, level_correlation, sample_gm_lattice, CorrelationQuery,
    EnumerationConfig, LatticeBasis,
};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CorrelationReport {
    meta: Meta,
    dim: u32,
    m: usize,
    intervals: Vec<(f64, f64)>,
    n_max: f64,
    estimate: f64,
    poisson_limit: f64,
    relative_error: f64,
}

pub fn run(a: &CorrelationsArgs) -> AppResult<()> {
    let intervals = parse_intervals(&a.intervals)?;
    let query = CorrelationQuery::new(intervals.clone(), a.n_max)?;
    let mut meta = Meta::new(
        "correlations",
        json!({
            "basis": a.basis.as_ref().map(|p| p.display().to_string()),
            "gmDim": a.gm_dim,
            "trial": a.trial,
            "intervals": a.intervals,
            "nMax": a.n_max,
            "nodeBudget": a.node_budget,
        }),
        a.out.deterministic,
    );
    let basis = match (&a.basis, a.gm_dim) {
        (Some(path), None) => LatticeBasis::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(dim)) => {
            let cfg = super::gm_config(dim, &a.prime, a.seed)?;
            meta.seed = Some(cfg.seed());
            meta.prime = Some(cfg.prime().to_string());
            sample_gm_lattice(&cfg, a.trial)
        }
        _ => return Err(AppError::Usage("exactly one of --basis or --gm-dim is required".into())),
    };
    let n_entries = a.n_max.ceil() as usize;
    let ecfg = EnumerationConfig { node_budget: a.node_budget, ..Default::default() };
    eprintln!("enumerating the first {n_entries} ball volumes...");
    let vols = first_volumes_with_config(&basis, n_entries, &ecfg)?;
    let estimate = level_correlation(&vols, &query)?;
    let poisson_limit = query.poisson_limit();
    let report = CorrelationReport {
        meta,
        dim: basis.dim(),
        m: query.m,
        intervals,
        n_max: a.n_max,
        estimate,
        poisson_limit,
        relative_error: (estimate - poisson_limit).abs() / poisson_limit,
    };
    write_report(&a.out, &report)
}
