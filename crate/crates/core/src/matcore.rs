//! Dense complex-matrix kernel.
//!
//! Three validated carriers sit on top of [`faer::Mat`]:
//!
//! - [`ComplexMatrix`]: any square matrix with finite entries,
//! - [`HermitianOperator`]: Hamiltonians and observables, symmetrized on construction,
//! - [`DensityMatrix`]: Hermitian, unit trace, positive semidefinite.
//!
//! Eigenvalues are always reported in ascending order. Consumers that need the
//! descending view reverse the slice themselves.

use std::ops::{Index, Mul};

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Numerical tolerances used across the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Hermiticity and trace accuracy guaranteed after construction.
    pub construction: f64,
    /// Largest deviation (hermiticity, trace, negativity) accepted by validation.
    pub validation: f64,
    /// Eigenvalues in `[-negative_clip, 0)` are treated as exact zeros.
    pub negative_clip: f64,
    /// Largest dense dimension accepted anywhere.
    pub max_dim: usize,
}

pub const TOLERANCES: Tolerances = Tolerances {
    construction: 1e-10,
    validation: 1e-8,
    negative_clip: 1e-10,
    max_dim: 4096,
};

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { dim, min: 1 });
    }
    if dim > TOLERANCES.max_dim {
        return Err(Error::DimensionTooLarge {
            dim,
            max: TOLERANCES.max_dim,
        });
    }
    Ok(())
}

pub(crate) fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

fn max_abs(mat: MatRef<'_, c64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..mat.ncols() {
        for i in 0..mat.nrows() {
            m = m.max(mat[(i, j)].norm());
        }
    }
    m
}

fn hermiticity_deviation(mat: MatRef<'_, c64>) -> f64 {
    let d = mat.nrows();
    let mut dev = 0.0f64;
    for j in 0..d {
        for i in 0..=j {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}

fn symmetrize(mat: MatRef<'_, c64>) -> Mat<c64> {
    let d = mat.nrows();
    let mut out = Mat::<c64>::zeros(d, d);
    for j in 0..d {
        out[(j, j)] = c64::new(mat[(j, j)].re, 0.0);
        for i in 0..j {
            let v = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    out
}

fn trace_of(mat: MatRef<'_, c64>) -> c64 {
    (0..mat.nrows()).map(|i| mat[(i, i)]).sum()
}

fn eigen_error(mat: MatRef<'_, c64>, detail: impl std::fmt::Debug) -> Error {
    Error::EigenSolver {
        dim: mat.nrows(),
        max_abs: max_abs(mat),
        detail: format!("{detail:?}"),
    }
}

fn eigenvalues_of(mat: MatRef<'_, c64>) -> Result<Vec<f64>> {
    mat.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| eigen_error(mat, e))
}

fn eigen_of(mat: MatRef<'_, c64>) -> Result<Spectrum> {
    let evd = mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| eigen_error(mat, e))?;
    let values = (0..mat.nrows()).map(|i| evd.S()[i].re).collect();
    Ok(Spectrum {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// `V diag(f(values)) V†`.
fn spectral_map(spectrum: &Spectrum, f: impl Fn(f64) -> f64) -> Mat<c64> {
    let d = spectrum.dim();
    let v = spectrum.vectors.as_ref();
    let scaled = Mat::<c64>::from_fn(d, d, |i, k| v[(i, k)] * f(spectrum.values[k]));
    &scaled * v.adjoint()
}

/// `(Σ s^p)^(1/p)` over nonnegative values, `p = ∞` gives the maximum.
fn schatten_from_values(values: impl Iterator<Item = f64> + Clone, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Schatten index must be >= 1, got {p}")));
    }
    let largest = values.clone().fold(0.0f64, f64::max);
    if p.is_infinite() || largest == 0.0 {
        return Ok(largest);
    }
    let sum: f64 = values.map(|s| (s / largest).powf(p)).sum();
    Ok(largest * sum.powf(1.0 / p))
}

/// Square complex matrix with finite entries.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    mat: Mat<c64>,
}

impl ComplexMatrix {
    pub fn new(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        check_dim(mat.nrows())?;
        let finite = (0..mat.ncols())
            .all(|j| (0..mat.nrows()).all(|i| mat[(i, j)].re.is_finite() && mat[(i, j)].im.is_finite()));
        if !finite {
            return Err(Error::NonFinite);
        }
        Ok(Self { mat })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Result<Self> {
        check_dim(dim)?;
        Self::new(Mat::from_fn(dim, dim, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[c64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_fn(dim, |i, j| entries[i * dim + j])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            mat: Mat::zeros(dim, dim),
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            mat: Mat::identity(dim, dim),
        })
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<c64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_mat_unchecked(self.mat.adjoint().to_owned())
    }

    pub fn trace(&self) -> c64 {
        trace_of(self.mat.as_ref())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.mat.as_ref())
    }

    /// Largest entrywise deviation between the matrix and its adjoint.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(self.mat.as_ref())
    }

    /// Singular values, nonincreasing.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        self.mat
            .singular_values()
            .map_err(|_| Error::Svd { dim: self.dim() })
    }

    /// `‖A − B‖` in the max-entry sense.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        max_abs((&self.mat - &other.mat).as_ref())
    }

    /// Largest entry of `|A†A − 1|`; zero for an exact unitary.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let gram = self.mat.adjoint() * &self.mat;
        max_abs((gram - Mat::<c64>::identity(d, d)).as_ref())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = c64;

    fn index(&self, idx: (usize, usize)) -> &c64 {
        &self.mat[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix::from_mat_unchecked(&self.mat * &rhs.mat)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `values` ascend; column `k` of `vectors` is the eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: Mat<c64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> MatRef<'_, c64> {
        self.vectors.as_ref()
    }

    /// Rebuilds `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_mat_unchecked(spectral_map(self, |x| x))
    }

    fn clip_negatives(mut self) -> Self {
        for v in &mut self.values {
            if *v < 0.0 && *v >= -TOLERANCES.validation {
                *v = 0.0;
            }
        }
        self
    }
}

/// Hermitian matrix, used for Hamiltonians and observables.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    mat: Mat<c64>,
}

impl HermitianOperator {
    /// Accepts matrices that are Hermitian up to the validation tolerance
    /// (relative to the largest entry) and symmetrizes them exactly.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let scale = m.max_abs().max(1.0);
        let deviation = m.hermiticity_deviation();
        if deviation > TOLERANCES.validation * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(m.as_mat()))
    }

    pub(crate) fn symmetrized(mat: MatRef<'_, c64>) -> Self {
        Self {
            mat: symmetrize(mat),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let d = diag.len();
        Ok(Self {
            mat: Mat::from_fn(d, d, |i, j| {
                if i == j {
                    c64::new(diag[i], 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            }),
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            mat: Mat::zeros(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_mat_unchecked(self.mat.clone())
    }

    pub fn eig(&self) -> Result<Spectrum> {
        hermitian_eig(self)
    }

    /// Ascending eigenvalues without eigenvectors.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigenvalues_of(self.as_mat())
    }

    /// `‖H‖_∞ = max |λ|`.
    pub fn operator_norm(&self) -> Result<f64> {
        let values = self.eigenvalues()?;
        Ok(values.first().map_or(0.0, |v| v.abs()).max(values.last().map_or(0.0, |v| v.abs())))
    }

    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        let values = self.eigenvalues()?;
        schatten_from_values(values.iter().map(|v| v.abs()), p)
    }

    pub fn trace(&self) -> f64 {
        trace_of(self.as_mat()).re
    }

    /// `a·H + b·1`.
    pub fn affine(&self, scale: f64, shift: f64) -> HermitianOperator {
        let d = self.dim();
        let mut mat = Mat::from_fn(d, d, |i, j| self.mat[(i, j)] * scale);
        for i in 0..d {
            mat[(i, i)] += c64::new(shift, 0.0);
        }
        Self { mat }
    }

    /// `U H U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<HermitianOperator> {
        check_same_dim(self.dim(), u.dim())?;
        let m = u.as_mat() * &self.mat * u.as_mat().adjoint();
        Ok(Self::symmetrized(m.as_ref()))
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }
}

impl Index<(usize, usize)> for HermitianOperator {
    type Output = c64;

    fn index(&self, idx: (usize, usize)) -> &c64 {
        &self.mat[idx]
    }
}

/// Quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: Mat<c64>,
}

impl DensityMatrix {
    /// Normalizes a matrix that is positive semidefinite by construction
    /// (e.g. `A A†`). The trace must be strictly positive.
    pub(crate) fn from_psd_unnormalized(mat: MatRef<'_, c64>) -> Result<Self> {
        let tr = trace_of(mat).re;
        if !(tr.is_finite() && tr > f64::MIN_POSITIVE) {
            return Err(Error::VanishingTrace);
        }
        let mut out = symmetrize(mat);
        let inv = 1.0 / tr;
        for j in 0..out.ncols() {
            for i in 0..out.nrows() {
                out[(i, j)] *= inv;
            }
        }
        Ok(Self { mat: out })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut mat = Mat::<c64>::zeros(dim, dim);
        for i in 0..dim {
            mat[(i, i)] = c64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for the normalized version of `psi`.
    pub fn pure(psi: &[c64]) -> Result<Self> {
        check_dim(psi.len())?;
        let d = psi.len();
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::domain("state vector must be nonzero and finite"));
        }
        let mat = Mat::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / norm2);
        Ok(Self {
            mat: symmetrize(mat.as_ref()),
        })
    }

    /// Diagonal state with the given populations, validated.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = populations.len();
        check_dim(d)?;
        let m = ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                c64::new(populations[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })?;
        validate_density(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_mat_unchecked(self.mat.clone())
    }

    pub fn to_operator(&self) -> HermitianOperator {
        HermitianOperator {
            mat: self.mat.clone(),
        }
    }

    /// Ascending eigenvalues with tiny negatives clipped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut values = eigenvalues_of(self.as_mat())?;
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(values)
    }

    /// Eigendecomposition with tiny negative eigenvalues clipped to zero.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut s = eigen_of(self.as_mat())?;
        for v in &mut s.values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(s)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut p = 0.0;
        for j in 0..d {
            for i in 0..d {
                p += self.mat[(i, j)].norm_sqr();
            }
        }
        p
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        check_same_dim(self.dim(), u.dim())?;
        let m = u.as_mat() * &self.mat * u.as_mat().adjoint();
        DensityMatrix::from_psd_unnormalized(m.as_ref())
    }

    /// Rebuilds a state from an eigenbasis and nonnegative weights summing to one.
    pub(crate) fn from_spectral_parts(vectors: MatRef<'_, c64>, weights: &[f64]) -> Self {
        let d = weights.len();
        let scaled = Mat::<c64>::from_fn(d, d, |i, k| vectors[(i, k)] * weights[k]);
        Self {
            mat: symmetrize((&scaled * vectors.adjoint()).as_ref()),
        }
    }
}

impl Index<(usize, usize)> for DensityMatrix {
    type Output = c64;

    fn index(&self, idx: (usize, usize)) -> &c64 {
        &self.mat[idx]
    }
}

/// Full eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eig(a: &HermitianOperator) -> Result<Spectrum> {
    eigen_of(a.as_mat())
}

/// Principal square root of a positive semidefinite operator.
///
/// Eigenvalues down to `-1e-8·max(1, ‖A‖)` are treated as zero; anything more
/// negative is rejected. Positive eigenvalues at roundoff level (`d·ε·‖A‖`) are
/// flushed to zero as well, since their square roots would otherwise leak
/// `√ε`-sized garbage into the kernel of the result.
pub fn psd_sqrt(a: &HermitianOperator) -> Result<HermitianOperator> {
    let spectrum = hermitian_eig(a)?;
    let scale = spectrum
        .values
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let min = spectrum.values.first().copied().unwrap_or(0.0);
    if min < -TOLERANCES.validation * scale {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let floor = spectrum.values.len() as f64 * f64::EPSILON * scale;
    let root = spectral_map(&spectrum, |x| if x <= floor { 0.0 } else { x.sqrt() });
    Ok(HermitianOperator::symmetrized(root.as_ref()))
}

/// Schatten `p`-norm; pass `f64::INFINITY` for the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Schatten index must be >= 1, got {p}")));
    }
    if p == 2.0 {
        let sum: f64 = (0..a.dim())
            .flat_map(|j| (0..a.dim()).map(move |i| (i, j)))
            .map(|idx| a[idx].norm_sqr())
            .sum();
        return Ok(sum.sqrt());
    }
    let s = a.singular_values()?;
    schatten_from_values(s.iter().copied(), p)
}

/// Checks a candidate state and returns it as a [`DensityMatrix`].
///
/// The input is symmetrized, eigenvalues in `[-1e-8, 0)` are clipped to zero and
/// the trace renormalized.
pub fn validate_density(m: ComplexMatrix) -> Result<DensityMatrix> {
    let deviation = m.hermiticity_deviation();
    if deviation > TOLERANCES.validation {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace();
    if !((trace.re - 1.0).abs() <= TOLERANCES.validation && trace.im.abs() <= TOLERANCES.validation) {
        return Err(Error::Trace { trace: trace.re });
    }
    let sym = symmetrize(m.as_mat());
    let spectrum = eigen_of(sym.as_ref())?;
    let min = spectrum.values.first().copied().unwrap_or(0.0);
    if min < -TOLERANCES.validation {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    if min < 0.0 {
        let spectrum = spectrum.clip_negatives();
        let total: f64 = spectrum.values.iter().sum();
        let weights: Vec<f64> = spectrum.values.iter().map(|v| v / total).collect();
        return Ok(DensityMatrix::from_spectral_parts(spectrum.vectors(), &weights));
    }
    DensityMatrix::from_psd_unnormalized(sym.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm_from_seed(d: usize, seed: u64) -> HermitianOperator {
        // small deterministic LCG, enough for shape checks
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let g = ComplexMatrix::from_fn(d, |_, _| c64::new(next(), next())).unwrap();
        HermitianOperator::symmetrized(g.as_mat())
    }

    #[test]
    fn identity_spectrum() {
        let id = HermitianOperator::from_real_diagonal(&[1.0, 1.0, 1.0]).unwrap();
        let s = id.eig().unwrap();
        for v in s.values() {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let v = s.vectors();
        let gram = v.adjoint() * v;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - c64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_spectrum_is_sorted_with_permuted_basis() {
        let h = HermitianOperator::from_real_diagonal(&[2.0, 0.0, 1.0]).unwrap();
        let s = h.eig().unwrap();
        assert_eq!(s.values().len(), 3);
        for (got, want) in s.values().iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        // eigenvalue 0 lives on basis vector 1, eigenvalue 2 on basis vector 0
        assert!((s.vectors()[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!((s.vectors()[(2, 1)].norm() - 1.0).abs() < 1e-12);
        assert!((s.vectors()[(0, 2)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_of_random_hermitian() {
        for seed in 0..20 {
            let h = herm_from_seed(6, seed);
            let s = h.eig().unwrap();
            let rebuilt = s.reconstruct();
            let diff = schatten_norm(
                &ComplexMatrix::from_fn(6, |i, j| h[(i, j)] - rebuilt[(i, j)]).unwrap(),
                2.0,
            )
            .unwrap();
            let norm = h.schatten_norm(2.0).unwrap();
            assert!(diff <= 1e-8 * norm, "seed {seed}: {diff}");
            assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let a = HermitianOperator::from_real_diagonal(&[4.0, 9.0]).unwrap();
        let r = psd_sqrt(&a).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((r[(1, 1)].re - 3.0).abs() < 1e-12);
        assert!(r[(0, 1)].norm() < 1e-12);

        let id = HermitianOperator::from_real_diagonal(&[1.0; 5]).unwrap();
        let r = psd_sqrt(&id).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((r[(i, j)] - c64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_rejects_negative_and_clips_noise() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, -1e-3]).unwrap();
        assert!(matches!(psd_sqrt(&a), Err(Error::NotPositive { .. })));
        let a = HermitianOperator::from_real_diagonal(&[1.0, -1e-11]).unwrap();
        let r = psd_sqrt(&a).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
    }

    #[test]
    fn schatten_of_diagonal() {
        let a = ComplexMatrix::from_row_major(
            2,
            &[c64::new(3.0, 0.0), c64::new(0.0, 0.0), c64::new(0.0, 0.0), c64::new(-4.0, 0.0)],
        )
        .unwrap();
        assert!((schatten_norm(&a, 1.0).unwrap() - 7.0).abs() < 1e-12);
        assert!((schatten_norm(&a, 2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((schatten_norm(&a, f64::INFINITY).unwrap() - 4.0).abs() < 1e-12);
        assert!((schatten_norm(&a, 3.0).unwrap() - 91f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let h = HermitianOperator::new(a).unwrap();
        assert!((h.schatten_norm(1.0).unwrap() - 7.0).abs() < 1e-12);
        assert!((h.operator_norm().unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn schatten_of_zero_and_bad_index() {
        let z = ComplexMatrix::zeros(3).unwrap();
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert_eq!(schatten_norm(&z, p).unwrap(), 0.0);
        }
        assert!(matches!(schatten_norm(&z, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn validation_accepts_and_rejects() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            c64::new(if i == j { 0.25 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let rho = validate_density(m).unwrap();
        assert!((rho.purity() - 0.25).abs() < 1e-14);

        assert!(matches!(
            DensityMatrix::diagonal(&[0.6, 0.6]),
            Err(Error::Trace { .. })
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[1.2, -0.2]),
            Err(Error::NotPositive { .. })
        ));
        let skew = ComplexMatrix::from_row_major(
            2,
            &[c64::new(0.5, 0.0), c64::new(0.1, 0.0), c64::new(0.0, 0.0), c64::new(0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(validate_density(skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn validation_clips_tiny_negative_eigenvalues() {
        let rho = DensityMatrix::diagonal(&[1.0 + 5e-11, -5e-11]).unwrap();
        let values = rho.eigenvalues().unwrap();
        assert!(values[0] >= 0.0);
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(rho[(1, 1)].re >= 0.0);
    }

    #[test]
    fn dimension_cap_and_shape_errors() {
        assert!(matches!(
            ComplexMatrix::zeros(TOLERANCES.max_dim + 1),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(Mat::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let mut m = Mat::<c64>::zeros(2, 2);
        m[(0, 1)] = c64::new(f64::NAN, 0.0);
        assert!(matches!(ComplexMatrix::new(m), Err(Error::NonFinite)));
    }

    #[test]
    fn eigensolver_error_carries_dimension() {
        let mut m = Mat::<c64>::zeros(3, 3);
        m[(0, 0)] = c64::new(f64::NAN, 0.0);
        let err = eigenvalues_of(m.as_ref());
        if let Err(Error::EigenSolver { dim, .. }) = err {
            assert_eq!(dim, 3);
        }
    }
}
