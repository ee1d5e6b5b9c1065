//! Thermodynamic functionals of a state and a Hamiltonian.
//!
//! The passive state pairs the state's eigenvalues, sorted decreasingly, with
//! the energy levels sorted increasingly. Everything else (ergotropy, the
//! extraction unitary, work fluctuations) follows from that pairing.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c64, check_same_dim, ComplexMatrix, DensityMatrix, HermitianOperator, Spectrum};

/// Below this ergotropy the noise-to-signal ratio is reported as undefined.
pub const NSR_ERGOTROPY_FLOOR: f64 = 1e-12;

const ERGOTROPY_SLACK: f64 = 1e-9;
const PASSIVE_CANONICAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgotropyResult {
    pub ergotropy: f64,
    /// `tr(ρH)`.
    pub initial_energy: f64,
    /// `tr(ρ↓H)`.
    pub passive_energy: f64,
}

/// First two moments of the work extracted by the optimal unitary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkStatistics {
    /// Mean extracted work, equal to the ergotropy.
    pub mean: f64,
    pub variance: f64,
    /// `√variance / mean`, `None` when the ergotropy is (numerically) zero.
    pub nsr: Option<f64>,
}

/// `Re tr(ρH)`.
pub fn energy_expectation(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_same_dim(rho.dim(), h.dim())?;
    let d = rho.dim();
    let mut acc = 0.0;
    for j in 0..d {
        for i in 0..d {
            // tr(ρH) = Σ ρ_ij H_ji and H_ji = conj(H_ij)
            let (r, hv) = (rho[(i, j)], h[(i, j)]);
            acc += r.re * hv.re + r.im * hv.im;
        }
    }
    Ok(acc)
}

/// `Σ_k λ↓_k E_k` for ascending `state_values` and ascending `energies`.
pub fn passive_energy_from_spectra(state_values: &[f64], energies: &[f64]) -> f64 {
    debug_assert_eq!(state_values.len(), energies.len());
    state_values
        .iter()
        .rev()
        .zip(energies)
        .map(|(l, e)| l * e)
        .sum()
}

/// Ergotropy from precomputed spectra (both ascending) and `tr(ρH)`.
pub fn ergotropy_from_spectra(state_values: &[f64], energies: &[f64], initial_energy: f64) -> ErgotropyResult {
    let passive_energy = passive_energy_from_spectra(state_values, energies);
    let raw = initial_energy - passive_energy;
    ErgotropyResult {
        ergotropy: if raw < 0.0 && raw >= -ERGOTROPY_SLACK { 0.0 } else { raw },
        initial_energy,
        passive_energy,
    }
}

/// Passive state `ρ↓ = Σ_k λ↓_k |E_k⟩⟨E_k|`.
///
/// Under degeneracy the matrix depends on the eigenbasis chosen by the solver;
/// its energy does not.
pub fn passive_state(rho: &DensityMatrix, h: &HermitianOperator) -> Result<DensityMatrix> {
    check_same_dim(rho.dim(), h.dim())?;
    let energy_basis = h.eig()?;
    let mut weights = rho.eigenvalues()?;
    weights.reverse();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(DensityMatrix::from_spectral_parts(energy_basis.vectors(), &weights))
}

/// `ℰ(ρ, H) = tr(ρH) − tr(ρ↓H)`.
pub fn ergotropy(rho: &DensityMatrix, h: &HermitianOperator) -> Result<ErgotropyResult> {
    check_same_dim(rho.dim(), h.dim())?;
    let state_values = rho.eigenvalues()?;
    let energies = h.eigenvalues()?;
    Ok(ergotropy_from_spectra(&state_values, &energies, energy_expectation(rho, h)?))
}

fn trace_norm_of_difference(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let d = a.dim();
    let diff = Mat::from_fn(d, d, |i, j| a[(i, j)] - b[(i, j)]);
    let op = HermitianOperator::symmetrized(diff.as_ref());
    Ok(op.eigenvalues()?.iter().map(|v| v.abs()).sum())
}

/// `V_H · P · V_ρ†`: the unitary taking `ρ` to its passive state.
fn sorting_unitary(state: &Spectrum, energy_basis: &Spectrum) -> Mat<c64> {
    let d = state.dim();
    let vr = state.vectors();
    // column k of V_H paired with the (d-1-k)-th ascending state eigenvector
    let reordered = Mat::from_fn(d, d, |i, k| vr[(i, d - 1 - k)]);
    energy_basis.vectors() * reordered.adjoint()
}

/// Unitary `U` with `U ρ U† = ρ↓`.
///
/// Returns the identity when `ρ` is already passive (within `1e-10` in trace
/// norm).
pub fn extraction_unitary(rho: &DensityMatrix, h: &HermitianOperator) -> Result<ComplexMatrix> {
    check_same_dim(rho.dim(), h.dim())?;
    let passive = passive_state(rho, h)?;
    if trace_norm_of_difference(&passive, rho)? <= PASSIVE_CANONICAL_TOL {
        return ComplexMatrix::identity(rho.dim());
    }
    let state = rho.spectrum()?;
    let energy_basis = h.eig()?;
    Ok(ComplexMatrix::from_mat_unchecked(sorting_unitary(&state, &energy_basis)))
}

/// `−Σ λ ln λ` with `0 ln 0 = 0`.
pub fn entropy_from_eigenvalues(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_from_eigenvalues(&rho.eigenvalues()?))
}

/// `S(ρ) / ln d`, defined for `d >= 2`.
pub fn normalized_entropy(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::domain("normalized entropy needs d >= 2"));
    }
    Ok(von_neumann_entropy(rho)? / (d as f64).ln())
}

/// Work statistics from the state's eigendecomposition, the Hamiltonian and
/// its ascending energies.
///
/// Uses `U†HU = V_ρ diag(ε) V_ρ†` with `ε_i` the energy paired with the `i`-th
/// state eigenvalue, so that in the state eigenbasis
/// `E[W²] = Σ_i λ_i [ (H'²)_ii − 2 ε_i H'_ii + ε_i² ]`, `H' = V_ρ† H V_ρ`.
pub fn work_statistics_from_parts(state: &Spectrum, h: &HermitianOperator, energies: &[f64]) -> WorkStatistics {
    let d = state.dim();
    let v = state.vectors();
    let rotated = v.adjoint() * h.as_mat() * v;
    let lambdas = state.values();
    let mut second_moment = 0.0;
    let mut first_moment = 0.0;
    for i in 0..d {
        let eps = energies[d - 1 - i];
        let col_sq: f64 = (0..d).map(|j| rotated[(j, i)].norm_sqr()).sum();
        let diag = rotated[(i, i)].re;
        second_moment += lambdas[i] * (col_sq - 2.0 * eps * diag + eps * eps);
        first_moment += lambdas[i] * (diag - eps);
    }
    let mean = if first_moment < 0.0 && first_moment >= -ERGOTROPY_SLACK {
        0.0
    } else {
        first_moment
    };
    finish_work_statistics(mean, second_moment - mean * mean)
}

fn finish_work_statistics(mean: f64, variance: f64) -> WorkStatistics {
    let variance = variance.max(0.0);
    let nsr = (mean > NSR_ERGOTROPY_FLOOR).then(|| variance.sqrt() / mean);
    WorkStatistics { mean, variance, nsr }
}

/// Mean, variance and noise-to-signal ratio of the work extracted by
/// [`extraction_unitary`]: `Var = tr[ρ (H − U†HU)²] − ℰ²`.
pub fn work_variance(rho: &DensityMatrix, h: &HermitianOperator) -> Result<WorkStatistics> {
    check_same_dim(rho.dim(), h.dim())?;
    let passive = passive_state(rho, h)?;
    if trace_norm_of_difference(&passive, rho)? <= PASSIVE_CANONICAL_TOL {
        // identity extraction: W vanishes identically
        return Ok(finish_work_statistics(0.0, 0.0));
    }
    let state = rho.spectrum()?;
    let energies = h.eigenvalues()?;
    Ok(work_statistics_from_parts(&state, h, &energies))
}

/// `Ĥ = H / ‖H‖_∞`.
pub fn normalize_hamiltonian(h: &HermitianOperator) -> Result<HermitianOperator> {
    let norm = h.operator_norm()?;
    if !(norm > 0.0) {
        return Err(Error::domain("cannot normalize the zero operator"));
    }
    Ok(h.affine(1.0 / norm, 0.0))
}
