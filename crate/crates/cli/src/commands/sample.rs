//! `randlat sample`: seeded Goldstein-Mayer bases or Poisson(1/2) samples.

use serde::Serialize;
use serde_json::json;
use std::io::Write;

use crate::output::{write_report, Meta};
use crate::{AppError, AppResult, Kind, SampleArgs};
use randlat::{sample_gm_lattice, sample_poisson};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SampleReport {
    meta: Meta,
    trials: u64,
    kind: String,
}

pub fn run(a: &SampleArgs) -> AppResult<()> {
    if a.trials == 0 {
        return Err(AppError::Usage("--trials must be positive".into()));
    }
    match a.kind {
        Kind::Lattice => run_lattice(a),
        Kind::Poisson => run_poisson(a),
    }
}

fn raw_sink(a: &SampleArgs) -> AppResult<Box<dyn Write>> {
    Ok(match &a.out.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run_lattice(a: &SampleArgs) -> AppResult<()> {
    let dim = a.dim.ok_or_else(|| AppError::Usage("--dim is required for lattice".into()))?;
    let cfg = super::gm_config(dim, &a.prime, a.seed)?;
    let mut meta = Meta::new(
        "sample",
        json!({"kind": "lattice", "dim": dim, "trials": a.trials}),
        a.out.deterministic,
    );
    meta.seed = Some(cfg.seed());
    meta.prime = Some(cfg.prime().to_string());
    if a.emit_raw {
        let mut w = raw_sink(a)?;
        for trial in 0..a.trials {
            let basis = sample_gm_lattice(&cfg, trial);
            writeln!(w, "{}", basis.to_json())?;
        }
        Ok(())
    } else {
        let kind = "lattice".to_string();
        write_report(&a.out, &SampleReport { meta, trials: a.trials, kind })
    }
}

fn run_poisson(a: &SampleArgs) -> AppResult<()> {
    let horizon =
        a.horizon.ok_or_else(|| AppError::Usage("--horizon is required for poisson".into()))?;
    let seed = crate::resolve_seed(a.seed)?;
    let mut meta = Meta::new(
        "sample",
        json!({"kind": "poisson", "horizon": horizon, "trials": a.trials}),
        a.out.deterministic,
    );
    meta.seed = Some(seed);
    if a.emit_raw {
        let mut w = raw_sink(a)?;
        for trial in 0..a.trials {
            let s = sample_poisson(horizon, seed, trial)?;
            let line = json!({"trial": trial, "horizon": horizon, "points": s.points});
            writeln!(w, "{line}")?;
        }
        Ok(())
    } else {
        let kind = "poisson".to_string();
        write_report(&a.out, &SampleReport { meta, trials: a.trials, kind })
    }
}
