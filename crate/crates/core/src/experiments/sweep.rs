use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{moments, sites_for_dim, HamiltonianModel, Measure, SweepConfig};
use crate::error::{Error, Result};
use crate::matcore::DensityMatrix;
use crate::quantities::{energy_expectation, entropy_from_eigenvalues, ergotropy_from_spectra, work_statistics_from_parts};
use crate::sampler::{self, build_k_local_hamiltonian, LocalHamiltonianSpec, NormalizedHamiltonian, RngStream, TermPlacement};

// Stream tags. Each (d, pass) pair owns a seed; samples are distinguished by stream id.
const PASS_MEAN: u64 = 0;
const PASS_COUNT: u64 = 1;
const PASS_FIXED_H: u64 = 2;

/// Exceedance counts at one threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCount {
    pub ell: f64,
    pub count_erg: u64,
    pub count_ent: u64,
}

/// Per-dimension ensemble summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub measure: Measure,
    pub d: usize,
    pub n_samples: usize,
    pub mean_erg_hat: f64,
    pub sem_erg_hat: f64,
    pub std_erg_hat: f64,
    pub mean_entropy_hat: f64,
    pub sem_entropy_hat: f64,
    pub mean_nsr: f64,
    pub sem_nsr: f64,
    pub n_nsr_undefined: usize,
    pub mean_energy_hat: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_counts: Option<Vec<TailCount>>,
}

impl EnsembleRecord {
    pub fn p_erg(&self, count: &TailCount) -> f64 {
        count.count_erg as f64 / self.n_samples as f64
    }

    pub fn p_ent(&self, count: &TailCount) -> f64 {
        count.count_ent as f64 / self.n_samples as f64
    }
}

#[derive(Clone, Copy, Debug)]
struct Outcome {
    erg: f64,
    entropy: f64,
    nsr: Option<f64>,
    energy: f64,
}

fn draw_hamiltonian(model: HamiltonianModel, d: usize, rng: &mut RngStream) -> Result<NormalizedHamiltonian> {
    match model {
        HamiltonianModel::Ngue => sampler::sample_ngue(d, rng),
        HamiltonianModel::KLocal { k, local_dim, c } => {
            let n_sites = sites_for_dim(d, local_dim)
                .ok_or_else(|| Error::config(format!("dimension {d} is not a power of {local_dim}")))?;
            let spec = LocalHamiltonianSpec {
                n_sites,
                local_dim,
                k,
                placement: TermPlacement::AllSubsets,
                c,
            };
            let h = build_k_local_hamiltonian(&spec, rng)?.hamiltonian;
            let values = h.eigenvalues()?;
            let (lo, hi) = (values[0], values[d - 1]);
            let width = hi - lo;
            if !(width > 0.0) {
                return Err(Error::DegenerateSpectrum { value: lo });
            }
            let mut energies: Vec<f64> = values.iter().map(|e| (e - lo) / width).collect();
            energies[0] = 0.0;
            energies[d - 1] = 1.0;
            Ok(NormalizedHamiltonian {
                operator: h.affine(1.0 / width, -lo / width),
                energies,
            })
        }
    }
}

fn evaluate(rho: &DensityMatrix, ham: &NormalizedHamiltonian, with_nsr: bool) -> Result<Outcome> {
    let ln_d = (rho.dim() as f64).ln();
    let energy = energy_expectation(rho, &ham.operator)?;
    let (values, nsr) = if with_nsr {
        let spectrum = rho.spectrum()?;
        let nsr = work_statistics_from_parts(&spectrum, &ham.operator, &ham.energies).nsr;
        (spectrum.values().to_vec(), nsr)
    } else {
        (rho.eigenvalues()?, None)
    };
    let erg = ergotropy_from_spectra(&values, &ham.energies, energy).ergotropy;
    Ok(Outcome {
        erg,
        entropy: entropy_from_eigenvalues(&values) / ln_d,
        nsr,
        energy,
    })
}

fn sample_pass(config: &SweepConfig, d: usize, pass: u64, with_nsr: bool) -> Result<Vec<Outcome>> {
    let fixed = if config.fixed_hamiltonian {
        let seed = RngStream::derive_seed(config.seed, &[d as u64, PASS_FIXED_H]);
        Some(draw_hamiltonian(config.hamiltonian, d, &mut RngStream::new(seed, 0))?)
    } else {
        None
    };
    let seed = RngStream::derive_seed(config.seed, &[d as u64, pass]);
    (0..config.samples_per_dim as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i);
            let fresh;
            let ham = match &fixed {
                Some(h) => h,
                None => {
                    fresh = draw_hamiltonian(config.hamiltonian, d, &mut rng)?;
                    &fresh
                }
            };
            let rho = config.measure.sample(d, &mut rng)?;
            evaluate(&rho, ham, with_nsr)
        })
        .collect()
}

fn summarize(measure: Measure, d: usize, outcomes: &[Outcome]) -> EnsembleRecord {
    let erg: Vec<f64> = outcomes.iter().map(|o| o.erg).collect();
    let ent: Vec<f64> = outcomes.iter().map(|o| o.entropy).collect();
    let energy: Vec<f64> = outcomes.iter().map(|o| o.energy).collect();
    let nsr: Vec<f64> = outcomes.iter().filter_map(|o| o.nsr).collect();
    let (mean_erg_hat, std_erg_hat, sem_erg_hat) = moments(&erg);
    let (mean_entropy_hat, _, sem_entropy_hat) = moments(&ent);
    let (mean_nsr, _, sem_nsr) = moments(&nsr);
    EnsembleRecord {
        measure,
        d,
        n_samples: outcomes.len(),
        mean_erg_hat,
        sem_erg_hat,
        std_erg_hat,
        mean_entropy_hat,
        sem_entropy_hat,
        mean_nsr,
        sem_nsr,
        n_nsr_undefined: outcomes.len() - nsr.len(),
        mean_energy_hat: moments(&energy).0,
        tail_counts: None,
    }
}

/// Averages of `Ê`, `Ŝ`, the noise-to-signal ratio and `tr(ρĤ)` per dimension.
pub fn run_average_sweep(config: &SweepConfig) -> Result<Vec<EnsembleRecord>> {
    config.validate()?;
    config
        .dims
        .iter()
        .map(|&d| Ok(summarize(config.measure, d, &sample_pass(config, d, PASS_MEAN, true)?)))
        .collect()
}

/// One raw draw of the ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDraw {
    pub measure: Measure,
    pub d: usize,
    pub index: usize,
    pub erg_hat: f64,
    pub entropy_hat: f64,
    pub nsr: Option<f64>,
    pub energy_hat: f64,
}

/// The individual draws behind [`run_average_sweep`], in stream order.
pub fn draw_samples(config: &SweepConfig) -> Result<Vec<SampleDraw>> {
    config.validate()?;
    let mut out = Vec::new();
    for &d in &config.dims {
        let outcomes = sample_pass(config, d, PASS_MEAN, true)?;
        out.extend(outcomes.into_iter().enumerate().map(|(index, o)| SampleDraw {
            measure: config.measure,
            d,
            index,
            erg_hat: o.erg,
            entropy_hat: o.entropy,
            nsr: o.nsr,
            energy_hat: o.energy,
        }));
    }
    Ok(out)
}

/// Two-pass tail estimate. The first pass fixes the ensemble means, the
/// second counts `|X − mean| > ℓ` on fresh draws.
pub fn run_tail_experiment(config: &SweepConfig) -> Result<Vec<EnsembleRecord>> {
    config.validate()?;
    let grid = match &config.ell_grid {
        Some(g) if !g.is_empty() => g.clone(),
        _ => return Err(Error::config("tail experiment needs a non-empty threshold grid")),
    };
    let mut records = Vec::with_capacity(config.dims.len());
    for &d in &config.dims {
        let mut record = summarize(config.measure, d, &sample_pass(config, d, PASS_MEAN, true)?);
        let fresh = sample_pass(config, d, PASS_COUNT, false)?;
        let counts = grid
            .iter()
            .map(|&ell| TailCount {
                ell,
                count_erg: fresh.iter().filter(|o| (o.erg - record.mean_erg_hat).abs() > ell).count() as u64,
                count_ent: fresh
                    .iter()
                    .filter(|o| (o.entropy - record.mean_entropy_hat).abs() > ell)
                    .count() as u64,
            })
            .collect();
        record.tail_counts = Some(counts);
        records.push(record);
    }
    Ok(records)
}

/// Expected count below which a tail estimate is considered too noisy.
const MIN_TAIL_COUNT: u64 = 10;

/// Warnings for dimensions whose largest threshold saw fewer than ten exceedances.
pub fn tail_warnings(records: &[EnsembleRecord]) -> Vec<String> {
    let mut out = Vec::new();
    for r in records {
        let Some(last) = r.tail_counts.as_ref().and_then(|c| c.last()) else {
            continue;
        };
        let fewest = last.count_erg.min(last.count_ent);
        if fewest < MIN_TAIL_COUNT {
            out.push(format!(
                "d = {}: only {} exceedances at ell = {}; increase the sample count for a usable tail estimate",
                r.d, fewest, last.ell
            ));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsetPoint {
    pub d: usize,
    pub ln_d: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InsetSeries {
    pub points: Vec<InsetPoint>,
    /// Dimensions with `d ≤ e^e`, where `ln ln ln d` is not positive.
    pub excluded: Vec<usize>,
}

/// `(ln d, ⟨Ê⟩ ln ln ln d)` for every record with `d > e^e`.
pub fn inset_transform(records: &[EnsembleRecord]) -> InsetSeries {
    let mut series = InsetSeries::default();
    for r in records {
        let ln_d = (r.d as f64).ln();
        let factor = ln_d.ln().ln();
        if r.d as f64 > std::f64::consts::E.powf(std::f64::consts::E) && factor > 0.0 {
            series.points.push(InsetPoint {
                d: r.d,
                ln_d,
                value: r.mean_erg_hat * factor,
            });
        } else {
            series.excluded.push(r.d);
        }
    }
    series
}
