//! Distances and fidelities between density matrices.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::{c64, check_same_dim, psd_sqrt, DensityMatrix, HermitianOperator};

/// All distances between one pair of states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub trace: f64,
    pub hs: f64,
    pub bures: f64,
    pub fidelity: f64,
    pub bures_angle: f64,
}

fn difference(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<HermitianOperator> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let d = rho.dim();
    let diff = Mat::from_fn(d, d, |i, j| rho[(i, j)] - sigma[(i, j)]);
    Ok(HermitianOperator::symmetrized(diff.as_ref()))
}

/// `½ Σ |λ_i(ρ − σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let values = difference(rho, sigma)?.eigenvalues()?;
    Ok((0.5 * values.iter().map(|v| v.abs()).sum::<f64>()).min(1.0))
}

/// `‖ρ − σ‖₂`.
pub fn hs_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let d = rho.dim();
    let mut acc = 0.0;
    for j in 0..d {
        for i in 0..d {
            acc += (rho[(i, j)] - sigma[(i, j)]).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

fn fidelity_from_roots(root_rho: &HermitianOperator, root_sigma: &HermitianOperator) -> Result<f64> {
    // tr√(√ρ σ √ρ) = ‖√ρ √σ‖₁
    let product = root_rho.as_mat() * root_sigma.as_mat();
    let singular = product
        .singular_values()
        .map_err(|_| crate::Error::Svd { dim: root_rho.dim() })?;
    let root_f: f64 = singular.iter().sum();
    Ok((root_f * root_f).clamp(0.0, 1.0))
}

/// Uhlmann fidelity `[tr√(√ρ σ √ρ)]²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    fidelity_from_roots(&psd_sqrt(&rho.to_operator())?, &psd_sqrt(&sigma.to_operator())?)
}

fn bures_from_fidelity(f: f64) -> f64 {
    let root = f.sqrt().clamp(0.0, 1.0);
    (2.0 - 2.0 * root).max(0.0).sqrt()
}

fn angle_from_fidelity(f: f64) -> f64 {
    f.sqrt().clamp(0.0, 1.0).acos()
}

/// `√(2 − 2√F)`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(bures_from_fidelity(fidelity(rho, sigma)?))
}

/// `arccos √F`.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(angle_from_fidelity(fidelity(rho, sigma)?))
}

/// Every distance for one pair, sharing the square roots.
pub fn distance_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DistanceReport> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let f = fidelity(rho, sigma)?;
    Ok(DistanceReport {
        trace: trace_distance(rho, sigma)?,
        hs: hs_distance(rho, sigma)?,
        bures: bures_from_fidelity(f),
        fidelity: f,
        bures_angle: angle_from_fidelity(f),
    })
}

/// `vec(√ρ) = Σ_ij (√ρ)_ij |i⟩⊗|j⟩`, a purification of `ρ` on two copies of the
/// system. Index `i·d + j`.
pub fn canonical_purification(rho: &DensityMatrix) -> Result<Vec<c64>> {
    let root = psd_sqrt(&rho.to_operator())?;
    let d = rho.dim();
    Ok((0..d * d).map(|k| root[(k / d, k % d)]).collect())
}

/// Reduced state of the first factor of a vector on `ℂ^d ⊗ ℂ^d`.
pub fn partial_trace_second(psi: &[c64], d: usize) -> Mat<c64> {
    assert_eq!(psi.len(), d * d, "vector length must be d²");
    Mat::from_fn(d, d, |i, k| (0..d).map(|j| psi[i * d + j] * psi[k * d + j].conj()).sum())
}

/// Euclidean distance between two vectors.
pub fn euclidean_distance(a: &[c64], b: &[c64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ_i |λ↓(ρ)_i − λ↓(σ)_i|`.
pub fn eigenvalue_l1_deviation(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let a = rho.eigenvalues()?;
    let b = sigma.eigenvalues()?;
    // both ascending, so reversing both keeps the pairing
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_haar_unitary, sample_hs_state, sample_pure_state, RngStream};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn basis(d: usize, k: usize) -> DensityMatrix {
        let psi: Vec<c64> = (0..d).map(|i| c64::new(if i == k { 1.0 } else { 0.0 }, 0.0)).collect();
        DensityMatrix::pure(&psi).unwrap()
    }

    #[test]
    fn identical_states() {
        let rho = sample_hs_state(4, &mut RngStream::new(1, 0)).unwrap();
        let r = distance_report(&rho, &rho).unwrap();
        assert!(r.trace < 1e-12);
        assert_eq!(r.hs, 0.0);
        assert!((r.fidelity - 1.0).abs() < 1e-9);
        assert!(r.bures < 1e-4);
        assert!(r.bures_angle < 1e-4);
    }

    #[test]
    fn orthogonal_pure_states() {
        let (a, b) = (basis(3, 0), basis(3, 2));
        let r = distance_report(&a, &b).unwrap();
        assert!((r.trace - 1.0).abs() < 1e-12);
        assert!((r.hs - SQRT_2).abs() < 1e-12);
        assert!(r.fidelity < 1e-12);
        assert!((r.bures - SQRT_2).abs() < 1e-6);
        assert!((r.bures_angle - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn diagonal_trace_distance() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 0.4).abs() < 1e-12);
        let c = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let e = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert!((hs_distance(&c, &e).unwrap() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn mixed_against_pure_qubit() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let b = bures_distance(&mixed, &basis(2, 0)).unwrap();
        assert!((b - 0.765_366_864_730_179_5).abs() < 1e-9);
    }

    #[test]
    fn pure_state_fidelity_is_overlap() {
        let mut rng = RngStream::new(12, 0);
        for d in [2, 5, 9] {
            let psi: Vec<c64> = (0..d).map(|i| c64::new(i as f64 + 1.0, 0.5 * i as f64)).collect();
            let phi: Vec<c64> = (0..d).map(|i| c64::new(1.0, -(i as f64))).collect();
            let norm = |v: &[c64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let overlap: c64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
            let want = overlap.norm_sqr() / (norm(&psi) * norm(&phi));
            let f = fidelity(&DensityMatrix::pure(&psi).unwrap(), &DensityMatrix::pure(&phi).unwrap()).unwrap();
            assert!((f - want).abs() <= 1e-9, "d={d}: {f} vs {want}");
            let a = sample_pure_state(d, &mut rng).unwrap();
            let b = sample_pure_state(d, &mut rng).unwrap();
            assert!((fidelity(&a, &b).unwrap() - fidelity(&b, &a).unwrap()).abs() <= 1e-8);
        }
    }

    #[test]
    fn angle_matches_half_chord() {
        let mut rng = RngStream::new(31, 0);
        for _ in 0..20 {
            let a = sample_hs_state(4, &mut rng).unwrap();
            let b = sample_hs_state(4, &mut rng).unwrap();
            let r = distance_report(&a, &b).unwrap();
            assert!((r.bures_angle - 2.0 * (r.bures / 2.0).asin()).abs() <= 1e-9);
            assert!(r.bures_angle <= FRAC_PI_2 * r.bures + 1e-9);
        }
    }

    #[test]
    fn purification_round_trip() {
        let mut rng = RngStream::new(2, 0);
        let rho = sample_hs_state(4, &mut rng).unwrap();
        let psi = canonical_purification(&rho).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let back = partial_trace_second(&psi, 4);
        for i in 0..4 {
            for j in 0..4 {
                assert!((back[(i, j)] - rho[(i, j)]).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn purification_of_special_states() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let psi = canonical_purification(&mixed).unwrap();
        let amp = 1.0 / 3f64.sqrt();
        for (k, z) in psi.iter().enumerate() {
            let want = if k / 3 == k % 3 { amp } else { 0.0 };
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
        let pure = basis(3, 1);
        let psi = canonical_purification(&pure).unwrap();
        let back = partial_trace_second(&psi, 3);
        assert!((back[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!((psi.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isospectral_states_have_zero_eigenvalue_deviation() {
        let mut rng = RngStream::new(8, 0);
        let rho = sample_hs_state(5, &mut rng).unwrap();
        let u = sample_haar_unitary(5, &mut rng).unwrap();
        let moved = rho.conjugate_by(&u).unwrap();
        assert!(eigenvalue_l1_deviation(&rho, &moved).unwrap() < 1e-12);
        assert!(trace_distance(&rho, &moved).unwrap() > 0.0);
        let a = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((eigenvalue_l1_deviation(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_dimensions() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(trace_distance(&a, &b).is_err());
        assert!(hs_distance(&a, &b).is_err());
        assert!(fidelity(&a, &b).is_err());
        assert!(bures_distance(&a, &b).is_err());
        assert!(bures_angle(&a, &b).is_err());
        assert!(eigenvalue_l1_deviation(&a, &b).is_err());
    }
}
