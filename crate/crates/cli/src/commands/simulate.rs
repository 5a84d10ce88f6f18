//! `randlat simulate`: seeded Monte Carlo counting experiment. Lattice trials
//! sample a Goldstein-Mayer basis and run the short-vector census; Poisson
//! trials sample the intensity-1/2 reference process. Trials fan out over a
//! rayon pool and are re-sorted by index, so reports are bit-reproducible.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::io::Write;

use crate::output::{write_report, Meta};
use crate::parse::parse_thresholds;
use crate::{AppError, AppResult, Kind, SimulateArgs};
use randlat::{
    count_record, enumerate_with_config, sample_gm_lattice, sample_poisson, EnumerationConfig,
    Error as CoreError,
};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulateReport {
    pub meta: Meta,
    pub kind: String,
    pub thresholds: Vec<f64>,
    /// Per completed trial, counts at each threshold; sorted by trial index.
    pub counts: Vec<Vec<u64>>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub failed_trials: Vec<u64>,
}

/// A trial whose enumeration blew its budget is marked failed; the whole run
/// aborts if more than this fraction fail.
const MAX_FAILED_FRACTION: f64 = 0.001;

fn run_trials<F>(trials: u64, f: F) -> AppResult<(Vec<Vec<u64>>, Vec<u64>)>
where
    F: Fn(u64) -> Result<Vec<u64>, CoreError> + Sync,
{
    let mut results: Vec<(u64, Result<Vec<u64>, CoreError>)> =
        (0..trials).into_par_iter().map(|t| (t, f(t))).collect();
    results.sort_by_key(|(t, _)| *t);
    let mut counts = Vec::with_capacity(results.len());
    let mut failed = Vec::new();
    for (t, r) in results {
        match r {
            Ok(c) => counts.push(c),
            Err(CoreError::BudgetExceeded { .. }) => failed.push(t),
            Err(e) => return Err(e.into()),
        }
    }
    if failed.len() as f64 > MAX_FAILED_FRACTION * trials as f64 {
        return Err(AppError::Budget(format!(
            "{} of {trials} trials exceeded the enumeration budget",
            failed.len()
        )));
    }
    Ok((counts, failed))
}

fn summarize(counts: &[Vec<u64>], width: usize) -> (Vec<f64>, Vec<f64>) {
    let n = counts.len() as f64;
    let mut means = vec![0.0; width];
    let mut stderrs = vec![0.0; width];
    if counts.is_empty() {
        return (means, stderrs);
    }
    for j in 0..width {
        let mean = counts.iter().map(|c| c[j] as f64).sum::<f64>() / n;
        means[j] = mean;
        if counts.len() > 1 {
            let var = counts.iter().map(|c| (c[j] as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
            stderrs[j] = (var / n).sqrt();
        }
    }
    (means, stderrs)
}

pub fn run(a: &SimulateArgs) -> AppResult<()> {
    if a.trials == 0 {
        return Err(AppError::Usage("--trials must be positive".into()));
    }
    let thresholds = parse_thresholds(&a.thresholds)?;
    let t_max = *thresholds.last().unwrap();
    let mut meta = Meta::new(
        "simulate",
        json!({
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "dim": a.dim,
            "trials": a.trials,
            "thresholds": thresholds,
            "nodeBudget": a.node_budget,
        }),
        a.out.deterministic,
    );
    let (counts, failed) = match a.kind {
        Kind::Lattice => {
            let dim =
                a.dim.ok_or_else(|| AppError::Usage("--dim is required for lattice".into()))?;
            let cfg = super::gm_config(dim, &a.prime, a.seed)?;
            meta.seed = Some(cfg.seed());
            meta.prime = Some(cfg.prime().to_string());
            let ecfg = EnumerationConfig { node_budget: a.node_budget, ..Default::default() };
            let thr = &thresholds;
            run_trials(a.trials, move |trial| {
                let basis = sample_gm_lattice(&cfg, trial);
                let vols = enumerate_with_config(&basis, t_max, &ecfg)?;
                Ok(count_record(&vols, thr)?.counts)
            })?
        }
        Kind::Poisson => {
            let seed = crate::resolve_seed(a.seed)?;
            meta.seed = Some(seed);
            let thr = &thresholds;
            run_trials(a.trials, move |trial| {
                let s = sample_poisson(t_max, seed, trial)?;
                thr.iter().map(|&t| s.count_up_to(t)).collect()
            })?
        }
    };
    if a.emit_raw {
        let mut w = std::io::stdout().lock();
        for (i, c) in counts.iter().enumerate() {
            writeln!(w, "{}", json!({"trial": i, "counts": c}))?;
        }
    }
    if let Some(path) = &a.csv {
        let mut text = String::from("trial");
        for t in &thresholds {
            text.push_str(&format!(",t={t}"));
        }
        text.push('\n');
        for (i, c) in counts.iter().enumerate() {
            text.push_str(&i.to_string());
            for x in c {
                text.push_str(&format!(",{x}"));
            }
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    let (means, stderrs) = summarize(&counts, thresholds.len());
    let report = SimulateReport {
        meta,
        kind: format!("{:?}", a.kind).to_lowercase(),
        thresholds,
        counts,
        means,
        stderrs,
        failed_trials: failed,
    };
    write_report(&a.out, &report)
}
