use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::ols;
use crate::error::{Error, Result};
use crate::sampler::{build_k_local_hamiltonian, LocalHamiltonianSpec, RngStream, TermPlacement};

/// Operator norms of all-subsets k-local Hamiltonians at one system size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalScalingRow {
    pub n_sites: usize,
    pub d: usize,
    pub n_terms: usize,
    pub norm_mean: f64,
    pub norm_max: f64,
    /// `n_terms · c`.
    pub triangle_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalScalingReport {
    pub k: usize,
    pub local_dim: usize,
    pub c: f64,
    pub rows: Vec<LocalScalingRow>,
    /// Slope of `ln ⟨‖H‖⟩` against `ln N`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Measures how `‖H‖_∞` grows with the number of sites when every k-subset
/// carries one random term of norm `c`.
pub fn run_local_scaling(
    k: usize,
    local_dim: usize,
    sites: &[usize],
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<LocalScalingReport> {
    if sites.len() < 2 || samples == 0 {
        return Err(Error::config("scaling report needs two or more system sizes and one or more samples"));
    }
    let mut rows = Vec::with_capacity(sites.len());
    for &n_sites in sites {
        let spec = LocalHamiltonianSpec {
            n_sites,
            local_dim,
            k,
            placement: TermPlacement::AllSubsets,
            c,
        };
        let d = spec.validate()?;
        let stream_seed = RngStream::derive_seed(seed, &[n_sites as u64, k as u64]);
        let draws: Vec<(f64, usize, f64)> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let h = build_k_local_hamiltonian(&spec, &mut RngStream::new(stream_seed, i))?;
                Ok((h.hamiltonian.operator_norm()?, h.supports.len(), h.triangle_bound))
            })
            .collect::<Result<_>>()?;
        let norms: Vec<f64> = draws.iter().map(|t| t.0).collect();
        rows.push(LocalScalingRow {
            n_sites,
            d,
            n_terms: draws[0].1,
            norm_mean: norms.iter().sum::<f64>() / norms.len() as f64,
            norm_max: norms.iter().cloned().fold(0.0, f64::max),
            triangle_bound: draws[0].2,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n_sites as f64).ln(), r.norm_mean.ln()))
        .collect();
    let (slope, intercept, r_squared) =
        ols(&points).ok_or_else(|| Error::config("system sizes must differ"))?;
    Ok(LocalScalingReport {
        k,
        local_dim,
        c,
        rows,
        slope,
        intercept,
        r_squared,
    })
}
