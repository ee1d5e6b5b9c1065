use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_tail_experiment, Measure, SweepConfig};
use crate::bounds::{
    entropy_bures_angle_coefficient, entropy_bures_bounds, entropy_fannes_bound, ergotropy_lipschitz_bounds,
    levy_parameters, levy_tail_bound, ENTROPY_BURES_MIN_DIM,
};
use crate::error::{Error, Result};
use crate::matcore::{DensityMatrix, TOLERANCES};
use crate::metrics::{canonical_purification, distance_report, eigenvalue_l1_deviation, euclidean_distance};
use crate::quantities::{energy_expectation, ergotropy, von_neumann_entropy};
use crate::sampler::{sample_haar_unitary, sample_ngue_hamiltonian, RngStream};

/// Absolute slack granted to every inequality.
pub const VERIFY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    LipschitzErgotropy,
    LipschitzEntropy,
    Fvdg,
    Schatten,
    Lidskii,
    LevyHs,
    Purification,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LipschitzErgotropy,
        Suite::LipschitzEntropy,
        Suite::Fvdg,
        Suite::Schatten,
        Suite::Lidskii,
        Suite::LevyHs,
        Suite::Purification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LipschitzErgotropy => "lipschitz_ergotropy",
            Suite::LipschitzEntropy => "lipschitz_entropy",
            Suite::Fvdg => "fvdg",
            Suite::Schatten => "schatten",
            Suite::Lidskii => "lidskii",
            Suite::LevyHs => "levy_hs",
            Suite::Purification => "purification",
        }
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == key)
            .ok_or_else(|| Error::config(format!("unknown suite '{s}'")))
    }
}

/// How the second state of a pair is produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// Two independent draws.
    #[default]
    Independent,
    /// `σ = ρ`.
    Identical,
    /// `σ = UρU†` for a Haar-random `U`.
    Isospectral,
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "independent" => Ok(PairKind::Independent),
            "identical" => Ok(PairKind::Identical),
            "isospectral" => Ok(PairKind::Isospectral),
            other => Err(Error::config(format!("unknown pair kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    /// Pairs per measure and dimension; for `levy_hs`, samples per dimension.
    pub pairs: usize,
    pub seed: u64,
    pub measures: Vec<Measure>,
    pub pair_kind: PairKind,
    /// Threshold grid for `levy_hs`; derived from the Levy widths when absent.
    pub ell_grid: Option<Vec<f64>>,
}

impl VerifyConfig {
    pub fn new(suite: Suite, dims: Vec<usize>, pairs: usize, seed: u64) -> Self {
        Self {
            suite,
            dims,
            pairs,
            seed,
            measures: Measure::ALL.to_vec(),
            pair_kind: PairKind::Independent,
            ell_grid: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.pairs == 0 || self.measures.is_empty() {
            return Err(Error::config("verification needs dimensions, measures and at least one pair"));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 2 || d > TOLERANCES.max_dim) {
            return Err(Error::config(format!("dimension {d} outside [2, {}]", TOLERANCES.max_dim)));
        }
        Ok(())
    }
}

/// Tally of one inequality `lhs ≤ rhs` over a batch of pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub inequality: String,
    pub measure: Measure,
    pub d: usize,
    pub pairs: usize,
    pub violations: usize,
    /// Smallest `rhs − lhs`.
    pub min_margin: f64,
    /// Largest `lhs / rhs` over pairs with `rhs > 0`.
    pub max_ratio: f64,
    pub max_lhs: f64,
}

impl InequalityCheck {
    fn new(inequality: &str, measure: Measure, d: usize) -> Self {
        Self {
            inequality: inequality.to_string(),
            measure,
            d,
            pairs: 0,
            violations: 0,
            min_margin: f64::INFINITY,
            max_ratio: 0.0,
            max_lhs: 0.0,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        self.pairs += 1;
        if !(lhs <= rhs + VERIFY_SLACK) {
            self.violations += 1;
        }
        self.min_margin = self.min_margin.min(rhs - lhs);
        if rhs > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / rhs);
        }
        self.max_lhs = self.max_lhs.max(lhs);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pair_kind: PairKind,
    pub slack: f64,
    pub checks: Vec<InequalityCheck>,
}

impl SuiteReport {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }
}

type Evaluations = Vec<(&'static str, f64, f64)>;

fn second_state(kind: PairKind, rho: &DensityMatrix, measure: Measure, rng: &mut RngStream) -> Result<DensityMatrix> {
    match kind {
        PairKind::Independent => measure.sample(rho.dim(), rng),
        PairKind::Identical => Ok(rho.clone()),
        PairKind::Isospectral => rho.conjugate_by(&sample_haar_unitary(rho.dim(), rng)?),
    }
}

fn evaluate_pair(suite: Suite, measure: Measure, kind: PairKind, rng: &mut RngStream, d: usize) -> Result<Evaluations> {
    let h = match suite {
        Suite::LipschitzErgotropy => Some(sample_ngue_hamiltonian(d, rng)?),
        _ => None,
    };
    let rho = measure.sample(d, rng)?;
    let sigma = second_state(kind, &rho, measure, rng)?;
    let dist = distance_report(&rho, &sigma)?;
    let purification_gap = || -> Result<f64> {
        Ok(euclidean_distance(&canonical_purification(&rho)?, &canonical_purification(&sigma)?))
    };
    let mut out: Evaluations = Vec::new();
    match suite {
        Suite::LipschitzErgotropy => {
            let h = h.expect("drawn above");
            let l = ergotropy_lipschitz_bounds(&h)?;
            let norm = h.operator_norm()?;
            let diff = (ergotropy(&rho, &h)?.ergotropy - ergotropy(&sigma, &h)?.ergotropy).abs();
            out.push(("erg_bures", diff, l.erg_bures * dist.bures));
            out.push(("erg_trace", diff, l.erg_trace * dist.trace));
            out.push(("erg_hs", diff, l.erg_hs * dist.hs));
            out.push(("erg_euclid", diff, l.erg_euclid * purification_gap()?));
            let energy = (energy_expectation(&rho, &h)? - energy_expectation(&sigma, &h)?).abs();
            out.push(("energy_trace", energy, norm * dist.trace));
        }
        Suite::LipschitzEntropy => {
            let diff = (von_neumann_entropy(&rho)? - von_neumann_entropy(&sigma)?).abs();
            out.push(("ent_fannes", diff, entropy_fannes_bound(dist.trace, d)?));
            out.push(("ent_bures_angle", diff, entropy_bures_angle_coefficient(d)? * dist.bures_angle));
            if d >= ENTROPY_BURES_MIN_DIM {
                let b = entropy_bures_bounds(d)?;
                out.push(("ent_bures", diff, b.bures_lipschitz * dist.bures));
                out.push(("ent_holder_trace", diff, b.holder_trace * dist.trace.sqrt()));
                out.push(("ent_holder_hs", diff, b.holder_hs * dist.hs.sqrt()));
            }
            let l = 8f64.sqrt() * (d as f64).ln() / std::f64::consts::LN_2;
            out.push(("ent_euclid", diff, l * purification_gap()?));
        }
        Suite::Fvdg => {
            out.push(("fvdg_lower", 0.5 * dist.bures * dist.bures, dist.trace));
            out.push(("fvdg_upper", dist.trace, dist.bures));
        }
        Suite::Schatten => out.push(("schatten", dist.trace, (d as f64 / 4.0).sqrt() * dist.hs)),
        Suite::Lidskii => out.push(("lidskii", 0.5 * eigenvalue_l1_deviation(&rho, &sigma)?, dist.trace)),
        Suite::Purification => out.push(("purification", dist.bures, purification_gap()?)),
        Suite::LevyHs => unreachable!("handled by the tail driver"),
    }
    Ok(out)
}

fn pair_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (m_idx, &measure) in config.measures.iter().enumerate() {
        for &d in &config.dims {
            let seed = RngStream::derive_seed(config.seed, &[config.suite.tag(), m_idx as u64, d as u64]);
            let evaluations: Vec<Evaluations> = (0..config.pairs as u64)
                .into_par_iter()
                .map(|i| evaluate_pair(config.suite, measure, config.pair_kind, &mut RngStream::new(seed, i), d))
                .collect::<Result<_>>()?;
            let mut batch: Vec<InequalityCheck> = Vec::new();
            for pair in &evaluations {
                for (k, &(name, lhs, rhs)) in pair.iter().enumerate() {
                    if batch.len() <= k {
                        batch.push(InequalityCheck::new(name, measure, d));
                    }
                    batch[k].record(lhs, rhs);
                }
            }
            checks.extend(batch);
        }
    }
    Ok(SuiteReport {
        suite: config.suite,
        pair_kind: config.pair_kind,
        slack: VERIFY_SLACK,
        checks,
    })
}

/// Geometric grid from `10⁻³` up to three Levy widths of the smallest dimension.
fn default_levy_grid(dims: &[usize]) -> Result<Vec<f64>> {
    let d_min = *dims.iter().min().expect("validated non-empty");
    let p = levy_parameters(d_min, 1.0)?;
    let top = 3.0 * p.upsilon_erg.max(p.upsilon_ent_normalized());
    let (lo, n) = (1e-3f64, 20);
    Ok((0..n)
        .map(|i| lo * (top / lo).powf(i as f64 / (n - 1) as f64))
        .collect())
}

fn levy_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let grid = match &config.ell_grid {
        Some(g) => g.clone(),
        None => default_levy_grid(&dims)?,
    };
    let sweep = SweepConfig::new(Measure::HilbertSchmidt, dims, config.pairs.max(10), config.seed).with_ell_grid(grid);
    let records = run_tail_experiment(&sweep)?;
    let mut checks = Vec::new();
    for r in &records {
        // nGUE spectra span [0, 1], so ‖Ĥ‖ = 1
        let p = levy_parameters(r.d, 1.0)?;
        let mut erg = InequalityCheck::new("levy_erg", Measure::HilbertSchmidt, r.d);
        let mut ent = InequalityCheck::new("levy_entropy", Measure::HilbertSchmidt, r.d);
        let n = r.n_samples as f64;
        for c in r.tail_counts.as_deref().unwrap_or_default() {
            for (check, prob, width) in [
                (&mut erg, r.p_erg(c), p.upsilon_erg),
                (&mut ent, r.p_ent(c), p.upsilon_ent_normalized()),
            ] {
                let sem = (prob * (1.0 - prob) / n).sqrt();
                check.record(prob, levy_tail_bound(c.ell, width)? + 3.0 * sem);
            }
        }
        checks.push(erg);
        checks.push(ent);
    }
    Ok(SuiteReport {
        suite: Suite::LevyHs,
        pair_kind: PairKind::Independent,
        slack: VERIFY_SLACK,
        checks,
    })
}

/// Samples pairs (or, for `levy_hs`, single states) and tallies every
/// inequality belonging to the suite.
pub fn run_verification_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    config.validate()?;
    match config.suite {
        Suite::LevyHs => levy_suite(config),
        _ => pair_suite(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("levy-hs".parse::<Suite>().unwrap(), Suite::LevyHs);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn identical_pairs_give_zero_ergotropy_difference() {
        let mut config = VerifyConfig::new(Suite::LipschitzErgotropy, vec![3, 6], 20, 4);
        config.pair_kind = PairKind::Identical;
        let report = run_verification_suite(&config).unwrap();
        assert!(report.passed());
        assert!(report
            .checks
            .iter()
            .filter(|c| c.inequality.starts_with("erg_"))
            .all(|c| c.max_lhs == 0.0));
    }

    #[test]
    fn small_sweeps_pass() {
        for suite in [Suite::Fvdg, Suite::Schatten, Suite::Lidskii, Suite::Purification, Suite::LipschitzEntropy] {
            let report = run_verification_suite(&VerifyConfig::new(suite, vec![2, 5], 30, 8)).unwrap();
            assert!(report.passed(), "{suite}: {:?}", report.checks);
            assert!(report.checks.iter().all(|c| c.pairs == 30));
        }
    }

    #[test]
    fn levy_grid_is_geometric() {
        let g = default_levy_grid(&[16, 32]).unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
