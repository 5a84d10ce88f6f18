//! Statistical comparison layer: empirical joint moments of counting vectors,
//! Kolmogorov-Smirnov distance to the limiting Exp(mean 2) law of 𝒱₁, m-level
//! correlation estimation, and the lattice-vs-Poisson-vs-exact report.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::VolumeSequence;
use crate::moments::{pair_moment, MomentSpec};

/// Sample moment with its standard error (sample std / sqrt(trials)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Mean and standard error of ∏_j counts[j] over sampled count vectors.
pub fn empirical_joint_moment(samples: &[Vec<u64>]) -> Result<MomentEstimate> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    let k = samples[0].len();
    if samples.iter().any(|s| s.len() != k) {
        return Err(Error::InvalidInput("inconsistent count-vector lengths".into()));
    }
    let n = samples.len() as f64;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for s in samples {
        let p: f64 = s.iter().map(|&c| c as f64).product();
        sum += p;
        sumsq += p * p;
    }
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    Ok(MomentEstimate {
        value: mean,
        stderr: (var / n).sqrt(),
        trials: samples.len() as u64,
    })
}

/// Sup-norm distance between the empirical CDF of the sample and the fixed
/// limit law F(t) = 1 - e^{-t/2} (no parameter estimation, so standard KS
/// critical values apply).
pub fn ks_statistic_exp2(sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("empty sample".into()));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = 1.0 - (-x / 2.0).exp();
        let hi = (i + 1) as f64 / n - f;
        let lo = f - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// An m-level correlation query: m - 1 difference intervals and the cutoff N.
#[derive(Debug, Clone)]
pub struct CorrelationQuery {
    pub m: usize,
    /// Closed intervals [a, b] for the differences 𝒱_{i_1} - 𝒱_{i_j}.
    pub intervals: Vec<(f64, f64)>,
    pub n_max: f64,
}

impl CorrelationQuery {
    pub fn new(intervals: Vec<(f64, f64)>, n_max: f64) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidInput("need at least one interval (m >= 2)".into()));
        }
        if intervals.iter().any(|&(a, b)| !(b > a) || !(b - a).is_finite()) {
            return Err(Error::InvalidInput(
                "intervals must have finite positive length".into(),
            ));
        }
        if !(n_max > 0.0) {
            return Err(Error::InvalidInput("cutoff N must be positive".into()));
        }
        Ok(Self { m: intervals.len() + 1, intervals, n_max })
    }

    /// Poissonian limit value 2^{1-m} ∏ |I_j|.
    pub fn poisson_limit(&self) -> f64 {
        let lens: f64 = self.intervals.iter().map(|&(a, b)| b - a).product();
        2f64.powi(1 - self.m as i32) * lens
    }
}

/// Counts ordered tuples of distinct indices (i_1, …, i_m) drawn from the
/// first ⌊N⌋ sequence elements with value[i_1] - value[i_j] in I_{j-1},
/// divided by N. `points` must be sorted ascending.
pub fn level_correlation_points(points: &[f64], q: &CorrelationQuery) -> f64 {
    let n = (q.n_max.floor() as usize).min(points.len());
    let pts = &points[..n];
    let mut count = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(q.m);
    for i1 in 0..pts.len() {
        chosen.clear();
        chosen.push(i1);
        count += count_assignments(pts, q, i1, 0, &mut chosen);
    }
    count as f64 / q.n_max
}

fn count_assignments(
    pts: &[f64],
    q: &CorrelationQuery,
    i1: usize,
    depth: usize,
    chosen: &mut Vec<usize>,
) -> u64 {
    if depth == q.intervals.len() {
        return 1;
    }
    let (a, b) = q.intervals[depth];
    // v_{i1} - v in [a, b]  <=>  v in [v_{i1} - b, v_{i1} - a].
    let lo = pts[i1] - b;
    let hi = pts[i1] - a;
    let start = pts.partition_point(|&v| v < lo - 1e-12);
    let mut total = 0;
    for idx in start..pts.len() {
        if pts[idx] > hi + 1e-12 {
            break;
        }
        if chosen.contains(&idx) {
            continue;
        }
        chosen.push(idx);
        total += count_assignments(pts, q, i1, depth + 1, chosen);
        chosen.pop();
    }
    total
}

/// Correlation estimator over a lattice volume census; errors if the census
/// does not contain the first ⌊N⌋ volumes.
pub fn level_correlation(vols: &VolumeSequence, q: &CorrelationQuery) -> Result<f64> {
    let needed = q.n_max.floor() as usize;
    if vols.total_multiplicity() < needed as u64 {
        return Err(Error::CensusIncomplete {
            requested: q.n_max,
            cutoff: vols.cutoff,
        });
    }
    Ok(level_correlation_points(&vols.volumes(), q))
}

/// Per-trial counting vectors at shared thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialCounts {
    pub thresholds: Vec<f64>,
    /// counts[trial][threshold index]
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareRow {
    pub label: String,
    /// Exact limiting value as a rational string.
    pub exact: String,
    pub exact_value: f64,
    pub empirical_lattice: MomentEstimate,
    pub empirical_poisson: MomentEstimate,
    pub z_scores: ZScores,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ZScores {
    pub lattice_vs_exact: f64,
    pub poisson_vs_exact: f64,
    pub lattice_vs_poisson: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    /// Exact volumes as rational strings.
    pub spec: Vec<String>,
    pub n_trials_lattice: u64,
    pub n_trials_poisson: u64,
    pub rows: Vec<CompareRow>,
}

fn z(diff: f64, stderr: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / stderr
    }
}

fn compare_row(
    label: String,
    exact: &BigRational,
    lattice: MomentEstimate,
    poisson: MomentEstimate,
) -> CompareRow {
    let exact_value = exact.to_f64().unwrap();
    let cross_se = (lattice.stderr.powi(2) + poisson.stderr.powi(2)).sqrt();
    CompareRow {
        label,
        exact: exact.to_string(),
        exact_value,
        z_scores: ZScores {
            lattice_vs_exact: z(lattice.value - exact_value, lattice.stderr),
            poisson_vs_exact: z(poisson.value - exact_value, poisson.stderr),
            lattice_vs_poisson: z(lattice.value - poisson.value, cross_se),
        },
        empirical_lattice: lattice,
        empirical_poisson: poisson,
    }
}

/// Per-threshold and joint-moment comparison table: empirical lattice value,
/// empirical Poisson value, exact limit, z-scores.
pub fn compare_report(
    lattice_run: &TrialCounts,
    poisson_run: &TrialCounts,
    s: &MomentSpec,
) -> Result<CompareReport> {
    if lattice_run.thresholds != poisson_run.thresholds {
        return Err(Error::InvalidInput("runs have mismatched thresholds".into()));
    }
    let k = s.k();
    if lattice_run.thresholds.len() != k {
        return Err(Error::InvalidInput(format!(
            "spec has k = {k} but runs carry {} thresholds",
            lattice_run.thresholds.len()
        )));
    }
    let mut rows = Vec::new();
    for (i, v) in s.volumes().iter().enumerate() {
        let single = MomentSpec::new(vec![v.clone()])?;
        let exact = pair_moment(&single)?;
        let lat: Vec<Vec<u64>> = lattice_run.counts.iter().map(|c| vec![c[i]]).collect();
        let poi: Vec<Vec<u64>> = poisson_run.counts.iter().map(|c| vec![c[i]]).collect();
        rows.push(compare_row(
            format!("E[N~_{}]", i + 1),
            &exact,
            empirical_joint_moment(&lat)?,
            empirical_joint_moment(&poi)?,
        ));
    }
    if k > 1 {
        let exact = pair_moment(s)?;
        rows.push(compare_row(
            format!("E[N~_1...N~_{k}]"),
            &exact,
            empirical_joint_moment(&lattice_run.counts)?,
            empirical_joint_moment(&poisson_run.counts)?,
        ));
    }
    Ok(CompareReport {
        spec: s.volumes().iter().map(|v| v.to_string()).collect(),
        n_trials_lattice: lattice_run.counts.len() as u64,
        n_trials_poisson: poisson_run.counts.len() as u64,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn joint_moment_basics() {
        let zeros = vec![vec![0u64, 0]; 4];
        let est = empirical_joint_moment(&zeros).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);

        let s = vec![vec![0u64], vec![1], vec![0], vec![1]];
        let est = empirical_joint_moment(&s).unwrap();
        assert_eq!(est.value, 0.5);
        assert!(empirical_joint_moment(&[vec![1u64]]).is_err());
    }

    #[test]
    fn joint_moment_permutation_invariant() {
        let a = vec![vec![1u64, 2], vec![0, 3], vec![2, 2], vec![5, 1]];
        let mut b = a.clone();
        b.reverse();
        let ea = empirical_joint_moment(&a).unwrap();
        let eb = empirical_joint_moment(&b).unwrap();
        assert_eq!(ea.value, eb.value);
        assert_eq!(ea.stderr, eb.stderr);
    }

    #[test]
    fn ks_exact_quantile_grid() {
        // Sample at quantiles F^{-1}((i - 1/2)/n): D <= 1/(2n).
        let n = 1000;
        let sample: Vec<f64> = (1..=n)
            .map(|i| {
                let p = (i as f64 - 0.5) / n as f64;
                -2.0 * (1.0 - p).ln()
            })
            .collect();
        let d = ks_statistic_exp2(&sample).unwrap();
        assert!(d <= 0.5 / n as f64 + 1e-12, "d = {d}");
    }

    #[test]
    fn ks_single_median_point() {
        let x = -2.0 * 0.5f64.ln(); // F(x) = 1/2
        let d = ks_statistic_exp2(&[x]).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!(ks_statistic_exp2(&[]).is_err());
    }

    #[test]
    fn ks_calibration_under_null() {
        // Simulated Exp(2) draws should pass the 1% KS critical value in the
        // overwhelming majority of seeded runs.
        let crit = 1.63 / (20_000f64).sqrt();
        let mut passes = 0;
        for run in 0..10u64 {
            let mut sample = Vec::with_capacity(20_000);
            for t in 0..20_000u64 {
                let mut rng = crate::sampler::trial_rng(run * 1_000_000 + 31, t);
                let u = (rand::RngCore::next_u64(&mut rng) >> 11) as f64 / (1u64 << 53) as f64;
                sample.push(-2.0 * (1.0 - u).ln());
            }
            if ks_statistic_exp2(&sample).unwrap() < crit {
                passes += 1;
            }
        }
        assert!(passes >= 9, "only {passes}/10 runs under the 1% critical value");
    }

    #[test]
    fn correlation_arithmetic_sequence_is_zero() {
        // 𝒱_j = 2j: no differences inside [-0.5, 0.5] \ {0}.
        let pts: Vec<f64> = (1..=100).map(|j| 2.0 * j as f64).collect();
        let q = CorrelationQuery::new(vec![(-0.5, 0.5)], 150.0).unwrap();
        assert_eq!(level_correlation_points(&pts, &q), 0.0);
        // Any interval strictly inside (-2, 2) avoiding multiples of 2 gives 0.
        let q = CorrelationQuery::new(vec![(0.3, 1.7)], 150.0).unwrap();
        assert_eq!(level_correlation_points(&pts, &q), 0.0);
    }

    #[test]
    fn correlation_poisson_pair_level() {
        // Large Poisson(1/2) sample: 2-level with I = [-1, 1] ≈ 1.
        let s = crate::sampler::sample_poisson(22_000.0, 404, 0).unwrap();
        assert!(s.points.len() >= 10_000);
        let q = CorrelationQuery::new(vec![(-1.0, 1.0)], 10_000.0).unwrap();
        let got = level_correlation_points(&s.points, &q);
        assert!((got - q.poisson_limit()).abs() < 0.15, "got {got}");
        assert!((q.poisson_limit() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compare_report_identical_sides() {
        let counts = TrialCounts {
            thresholds: vec![1.0, 2.0],
            counts: vec![vec![0, 1], vec![1, 1], vec![0, 2], vec![1, 3]],
        };
        let s = MomentSpec::new(vec![
            BigRational::from(BigInt::from(1)),
            BigRational::from(BigInt::from(2)),
        ])
        .unwrap();
        let rep = compare_report(&counts, &counts, &s).unwrap();
        for row in &rep.rows {
            assert_eq!(row.z_scores.lattice_vs_poisson, 0.0);
        }
        // k=1 exact column is t/2.
        assert_eq!(rep.rows[0].exact, "1/2");
        assert_eq!(rep.rows[1].exact, "1");
    }

    #[test]
    fn compare_report_mismatched_thresholds() {
        let a = TrialCounts { thresholds: vec![1.0], counts: vec![vec![0], vec![1]] };
        let b = TrialCounts { thresholds: vec![2.0], counts: vec![vec![0], vec![1]] };
        let s = MomentSpec::new(vec![BigRational::from(BigInt::from(1))]).unwrap();
        assert!(compare_report(&a, &b, &s).is_err());
    }
}
