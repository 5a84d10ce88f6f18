//! Random lattices at desk scale: exact unimodular-lattice bases, complete
//! short-vector censuses in ball-volume coordinates, seeded Goldstein-Mayer
//! and Poisson samplers, exact rational limiting joint moments of the pair
//! counting process (by two independent combinatorial routes), and the
//! statistical layer that compares Monte Carlo runs against the exact values.

pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod lll;
pub mod matrix;
pub mod moments;
pub mod sampler;
pub mod stats;
pub mod volume;

pub use enumerate::{
    enumerate_up_to_volume, enumerate_with_config, first_volumes, first_volumes_with_config,
    torus_eigenvalue_volumes, EnumerationConfig,
};
pub use error::{Error, Result};
pub use lattice::{
    count_record, counting_function, CountRecord, LatticeBasis, VolumeEntry, VolumeSequence,
};
pub use lll::{lll_reduce, ReducedBasis, DEFAULT_DELTA};
pub use moments::{
    bell_number, bijection_g, bijection_g_inverse, closed_form_m, count_admissible,
    enumerate_admissible, enumerate_divisions, enumerate_nonnegative_class, enumerate_partitions,
    limit_moment_matrix_form, limit_moment_partition_form, pair_moment, stirling2_row,
    touchard_poisson_moment, AdmissibleMatrix, Division, MomentSpec, SetPartition, DEFAULT_K_MAX,
};
pub use sampler::{
    derive, is_probable_prime, next_prime, sample_gm_lattice, sample_poisson, trial_rng, GmConfig,
    PoissonSample, RNG_ALGORITHM,
};
pub use stats::{
    compare_report, empirical_joint_moment, ks_statistic_exp2, level_correlation,
    level_correlation_points, CompareReport, CorrelationQuery, MomentEstimate, TrialCounts,
};
pub use volume::{ball_volume_coeff, length_to_volume, DEFAULT_GUARD};
