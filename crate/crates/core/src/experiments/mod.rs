//! Monte Carlo drivers.
//!
//! Every sample `i` of dimension `d` draws from its own [`RngStream`]
//! `(derive_seed(seed, [d, pass]), i)`, and per-sample results are collected
//! in index order before any summation. Output is therefore bit-identical for
//! any number of worker threads.

mod fit;
mod local;
mod sweep;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{DensityMatrix, TOLERANCES};
use crate::sampler::{self, RngStream};

pub use fit::{fit_concentration_exponents, fit_log_log, FitMode, FitResult, LinearFit, Observable};
pub use local::{run_local_scaling, LocalScalingReport, LocalScalingRow};
pub use sweep::{
    draw_samples, inset_transform, run_average_sweep, run_tail_experiment, tail_warnings, EnsembleRecord, InsetPoint, InsetSeries,
    SampleDraw, TailCount,
};
pub use verify::{
    run_verification_suite, InequalityCheck, PairKind, Suite, SuiteReport, VerifyConfig, VERIFY_SLACK,
};

/// State ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    HilbertSchmidt,
    Bures,
    Pure,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::HilbertSchmidt, Measure::Bures, Measure::Pure];

    pub fn name(self) -> &'static str {
        match self {
            Measure::HilbertSchmidt => "hilbert_schmidt",
            Measure::Bures => "bures",
            Measure::Pure => "pure",
        }
    }

    pub fn sample(self, d: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
        match self {
            Measure::HilbertSchmidt => sampler::sample_hs_state(d, rng),
            Measure::Bures => sampler::sample_bures_state(d, rng),
            Measure::Pure => sampler::sample_pure_state(d, rng),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "hs" | "hilbert_schmidt" => Ok(Measure::HilbertSchmidt),
            "bures" | "bu" => Ok(Measure::Bures),
            "pure" | "fubini_study" => Ok(Measure::Pure),
            other => Err(Error::config(format!("unknown measure '{other}'"))),
        }
    }
}

/// Hamiltonian ensemble used by the sweeps. Every draw is normalized to a
/// spectrum spanning exactly `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianModel {
    Ngue,
    /// All `k`-subsets of `log_{local_dim} d` sites, each term with norm `c`.
    KLocal { k: usize, local_dim: usize, c: f64 },
}

/// Configuration shared by the average and tail experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub measure: Measure,
    pub hamiltonian: HamiltonianModel,
    pub dims: Vec<usize>,
    pub samples_per_dim: usize,
    pub seed: u64,
    pub ell_grid: Option<Vec<f64>>,
    /// Draw one Hamiltonian per dimension instead of one per sample.
    pub fixed_hamiltonian: bool,
}

impl SweepConfig {
    pub fn new(measure: Measure, dims: Vec<usize>, samples_per_dim: usize, seed: u64) -> Self {
        Self {
            measure,
            hamiltonian: HamiltonianModel::Ngue,
            dims,
            samples_per_dim,
            seed,
            ell_grid: None,
            fixed_hamiltonian: false,
        }
    }

    pub fn with_ell_grid(mut self, grid: Vec<f64>) -> Self {
        self.ell_grid = Some(grid);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::config("dimension list is empty"));
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("dimensions must be strictly ascending"));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2 || d > TOLERANCES.max_dim) {
            return Err(Error::config(format!(
                "dimension {d} outside [2, {}]",
                TOLERANCES.max_dim
            )));
        }
        if self.samples_per_dim < 10 {
            return Err(Error::config("at least 10 samples per dimension are required"));
        }
        if let Some(grid) = &self.ell_grid {
            if grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                return Err(Error::config("tail thresholds must be positive"));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("tail thresholds must be strictly ascending"));
            }
        }
        if let HamiltonianModel::KLocal { k, local_dim, c } = self.hamiltonian {
            for &d in &self.dims {
                sites_for_dim(d, local_dim).ok_or_else(|| {
                    Error::config(format!("dimension {d} is not a power of local dimension {local_dim}"))
                })?;
            }
            if k == 0 || !(c > 0.0) {
                return Err(Error::config("k-local model needs k >= 1 and c > 0"));
            }
        }
        Ok(())
    }
}

pub(crate) fn sites_for_dim(d: usize, local_dim: usize) -> Option<usize> {
    if local_dim < 2 {
        return None;
    }
    let mut n = 0;
    let mut rest = d;
    while rest > 1 {
        if rest % local_dim != 0 {
            return None;
        }
        rest /= local_dim;
        n += 1;
    }
    (n > 0).then_some(n)
}

/// Runs `f` on a dedicated pool with `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Mean, sample standard deviation and standard error, summed in slice order.
pub(crate) fn moments(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let std = var.sqrt();
    (mean, std, std / (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("hs".parse::<Measure>().unwrap(), Measure::HilbertSchmidt);
        assert!("ginibre".parse::<Measure>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = SweepConfig::new(Measure::HilbertSchmidt, vec![2, 8], 10, 0);
        ok.validate().unwrap();
        let bad = SweepConfig::new(Measure::HilbertSchmidt, vec![8, 2], 10, 0);
        assert!(bad.validate().is_err());
        let bad = SweepConfig::new(Measure::HilbertSchmidt, vec![8], 9, 0);
        assert!(bad.validate().is_err());
        let bad = SweepConfig::new(Measure::HilbertSchmidt, vec![1, 8], 10, 0);
        assert!(bad.validate().is_err());
        let bad = ok.clone().with_ell_grid(vec![0.2, 0.1]);
        assert!(bad.validate().is_err());
        let mut kl = ok.clone();
        kl.dims = vec![8, 12];
        kl.hamiltonian = HamiltonianModel::KLocal { k: 2, local_dim: 2, c: 1.0 };
        assert!(kl.validate().is_err());
    }

    #[test]
    fn sites_from_dimension() {
        assert_eq!(sites_for_dim(8, 2), Some(3));
        assert_eq!(sites_for_dim(9, 3), Some(2));
        assert_eq!(sites_for_dim(12, 2), None);
        assert_eq!(sites_for_dim(1, 2), None);
    }

    #[test]
    fn moments_of_small_samples() {
        let (m, s, e) = moments(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((e - s / 2.0).abs() < 1e-15);
    }
}
