//! `randlat compare`: lattice run vs Poisson run vs exact limiting moments.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{write_report, Meta};
use crate::parse::parse_rational_list;
use crate::{AppError, AppResult, CompareArgs, Kind};
use randlat::{compare_report, CompareReport, MomentSpec, TrialCounts};

/// The slice of a simulate report this command needs.
#[derive(Deserialize)]
struct RunFile {
    kind: String,
    thresholds: Vec<f64>,
    counts: Vec<Vec<u64>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FullReport {
    meta: Meta,
    report: CompareReport,
}

fn load_run(path: &std::path::Path, expect: Kind) -> AppResult<TrialCounts> {
    let text = std::fs::read_to_string(path)?;
    let run: RunFile = serde_json::from_str(&text)
        .map_err(|e| AppError::Usage(format!("{}: not a simulate report: {e}", path.display())))?;
    let expected = format!("{expect:?}").to_lowercase();
    if run.kind != expected {
        return Err(AppError::Usage(format!(
            "{}: expected a {expected} run, found kind {:?}",
            path.display(),
            run.kind
        )));
    }
    Ok(TrialCounts { thresholds: run.thresholds, counts: run.counts })
}

pub fn run(a: &CompareArgs) -> AppResult<()> {
    let volumes = parse_rational_list(&a.volumes)?;
    let spec = MomentSpec::new(volumes)?;
    let lattice = load_run(&a.lattice, Kind::Lattice)?;
    let poisson = load_run(&a.poisson, Kind::Poisson)?;
    let report = compare_report(&lattice, &poisson, &spec)?;
    let meta = Meta::new(
        "compare",
        json!({
            "lattice": a.lattice.display().to_string(),
            "poisson": a.poisson.display().to_string(),
            "volumes": a.volumes,
        }),
        a.out.deterministic,
    );
    write_report(&a.out, &FullReport { meta, report })
}
