//! Random matrix ensembles.
//!
//! Every sampler is a pure function of its dimension and an [`RngStream`].
//! Complex Ginibre entries have independent real and imaginary parts drawn from
//! `N(0, 1/2)`, so `E|G_ij|² = 1`. All normalized quantities (states, nGUE
//! Hamiltonians) are insensitive to that convention.

use faer::Mat;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{c64, check_dim, ComplexMatrix, DensityMatrix, HermitianOperator};

const QR_ATTEMPTS: usize = 3;

/// Reproducible random stream identified by `(seed, stream_id)`.
///
/// Distinct pairs give independent ChaCha streams; equal pairs replay the same
/// sequence bit for bit.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Mixes a base seed with a list of tags (dimension, pass, ...) into a new
    /// seed, so that different experiment stages never share streams.
    pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
        tags.iter().fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample::<f64, _>(StandardNormal)
    }

    /// Complex Gaussian with `E|z|² = 1`.
    fn complex_normal(&mut self) -> c64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        c64::new(self.normal() * s, self.normal() * s)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn ginibre_mat(d: usize, rng: &mut RngStream) -> Mat<c64> {
    // column-major fill order, fixed so streams replay identically
    let mut g = Mat::<c64>::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            g[(i, j)] = rng.complex_normal();
        }
    }
    g
}

/// `d×d` complex Ginibre matrix.
pub fn sample_ginibre(d: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    check_dim(d)?;
    Ok(ComplexMatrix::from_mat_unchecked(ginibre_mat(d, rng)))
}

fn haar_mat(d: usize, rng: &mut RngStream) -> Result<Mat<c64>> {
    for _ in 0..QR_ATTEMPTS {
        let g = ginibre_mat(d, rng);
        let qr = g.qr();
        let r = qr.R();
        let phases: Option<Vec<c64>> = (0..d)
            .map(|i| {
                let rii = r[(i, i)];
                let n = rii.norm();
                (n.is_finite() && n > 0.0).then(|| rii / n)
            })
            .collect();
        let Some(phases) = phases else { continue };
        let mut q = qr.compute_Q();
        for (j, ph) in phases.iter().enumerate() {
            for i in 0..d {
                q[(i, j)] *= ph;
            }
        }
        return Ok(q);
    }
    Err(Error::QrBreakdown {
        attempts: QR_ATTEMPTS,
    })
}

/// Haar-random unitary from the QR factorization of a Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn sample_haar_unitary(d: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    check_dim(d)?;
    Ok(ComplexMatrix::from_mat_unchecked(haar_mat(d, rng)?))
}

/// Hilbert–Schmidt random state `G G† / tr(G G†)`.
pub fn sample_hs_state(d: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    check_dim(d)?;
    let g = ginibre_mat(d, rng);
    DensityMatrix::from_psd_unnormalized((&g * g.adjoint()).as_ref())
}

/// Bures random state `(1+U) G G† (1+U†)`, normalized, with independent
/// Ginibre `G` and Haar `U`.
pub fn sample_bures_state(d: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut last = Error::VanishingTrace;
    for _ in 0..2 {
        let g = ginibre_mat(d, rng);
        let mut one_plus_u = haar_mat(d, rng)?;
        for i in 0..d {
            one_plus_u[(i, i)] += c64::new(1.0, 0.0);
        }
        let a = &one_plus_u * &g;
        match DensityMatrix::from_psd_unnormalized((&a * a.adjoint()).as_ref()) {
            Ok(rho) => return Ok(rho),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Fubini–Study random pure state `|ψ⟩⟨ψ|`.
pub fn sample_pure_state(d: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    check_dim(d)?;
    loop {
        let psi: Vec<c64> = (0..d).map(|_| rng.complex_normal()).collect();
        if psi.iter().any(|z| z.norm_sqr() > 0.0) {
            return DensityMatrix::pure(&psi);
        }
    }
}

/// GUE Hamiltonian `(G + G†)/2`.
pub fn sample_gue(d: usize, rng: &mut RngStream) -> Result<HermitianOperator> {
    check_dim(d)?;
    let g = ginibre_mat(d, rng);
    Ok(HermitianOperator::symmetrized(g.as_ref()))
}

/// An nGUE draw together with its spectrum.
#[derive(Clone, Debug)]
pub struct NormalizedHamiltonian {
    pub operator: HermitianOperator,
    /// Ascending eigenvalues; the first is exactly 0 and the last exactly 1.
    pub energies: Vec<f64>,
}

/// GUE draw shifted so the ground energy is 0 and rescaled so the top energy is 1.
pub fn sample_ngue(d: usize, rng: &mut RngStream) -> Result<NormalizedHamiltonian> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d, min: 2 });
    }
    let gue = sample_gue(d, rng)?;
    let values = gue.eigenvalues()?;
    let (lo, hi) = (values[0], values[d - 1]);
    let width = hi - lo;
    if !(width > 0.0) {
        return Err(Error::DegenerateSpectrum { value: lo });
    }
    let operator = gue.affine(1.0 / width, -lo / width);
    let mut energies: Vec<f64> = values.iter().map(|e| (e - lo) / width).collect();
    energies[0] = 0.0;
    energies[d - 1] = 1.0;
    Ok(NormalizedHamiltonian { operator, energies })
}

/// nGUE Hamiltonian with spectrum spanning exactly `[0, 1]`.
pub fn sample_ngue_hamiltonian(d: usize, rng: &mut RngStream) -> Result<HermitianOperator> {
    Ok(sample_ngue(d, rng)?.operator)
}

/// Where the terms of a k-local Hamiltonian act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TermPlacement {
    /// `n_terms` terms, each on a uniformly random k-subset of sites.
    UniformRandom { n_terms: usize },
    /// Exactly one term on every k-subset of sites.
    AllSubsets,
}

/// Shape of a random k-local many-body Hamiltonian `H = Σ_α h_α`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LocalHamiltonianSpec {
    pub n_sites: usize,
    pub local_dim: usize,
    pub k: usize,
    pub placement: TermPlacement,
    /// Operator-norm cap of each term.
    pub c: f64,
}

impl LocalHamiltonianSpec {
    pub fn qubits(n_sites: usize, k: usize, placement: TermPlacement, c: f64) -> Self {
        Self {
            n_sites,
            local_dim: 2,
            k,
            placement,
            c,
        }
    }

    /// Total Hilbert-space dimension, `None` on overflow.
    pub fn dim(&self) -> Option<usize> {
        let mut d: usize = 1;
        for _ in 0..self.n_sites {
            d = d.checked_mul(self.local_dim)?;
        }
        Some(d)
    }

    pub fn validate(&self) -> Result<usize> {
        if self.n_sites == 0 || self.local_dim < 2 {
            return Err(Error::config("k-local Hamiltonian needs n_sites >= 1 and local_dim >= 2"));
        }
        if self.k == 0 || self.k > self.n_sites {
            return Err(Error::config(format!(
                "locality k = {} must satisfy 1 <= k <= n_sites = {}",
                self.k, self.n_sites
            )));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::config("term norm cap c must be positive"));
        }
        if let TermPlacement::UniformRandom { n_terms: 0 } = self.placement {
            return Err(Error::config("k-local Hamiltonian needs at least one term"));
        }
        let d = self.dim().ok_or(Error::DimensionTooLarge {
            dim: usize::MAX,
            max: crate::matcore::TOLERANCES.max_dim,
        })?;
        check_dim(d)?;
        Ok(d)
    }
}

/// A sampled k-local Hamiltonian.
#[derive(Clone, Debug)]
pub struct LocalHamiltonian {
    pub hamiltonian: HermitianOperator,
    /// Sites of each term, ascending within a term.
    pub supports: Vec<Vec<usize>>,
    /// `Σ_α ‖h_α‖_∞`, an upper bound on `‖H‖_∞` by the triangle inequality.
    pub triangle_bound: f64,
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Adds `term` acting on `sites` (identity elsewhere) into `h`.
fn embed_term(h: &mut Mat<c64>, term: &Mat<c64>, sites: &[usize], n_sites: usize, local_dim: usize) {
    let d = h.nrows();
    let block = term.nrows();
    // place value of each site's digit in the global index; site 0 is most significant
    let strides: Vec<usize> = sites
        .iter()
        .map(|&s| local_dim.pow((n_sites - 1 - s) as u32))
        .collect();
    let local_offsets: Vec<usize> = (0..block)
        .map(|mut l| {
            let mut off = 0;
            for stride in strides.iter().rev() {
                off += (l % local_dim) * stride;
                l /= local_dim;
            }
            off
        })
        .collect();
    for a in 0..d {
        let mut la = 0;
        let mut base = a;
        for stride in &strides {
            let digit = (a / stride) % local_dim;
            la = la * local_dim + digit;
            base -= digit * stride;
        }
        for (lb, off) in local_offsets.iter().enumerate() {
            h[(base + off, a)] += term[(lb, la)];
        }
    }
}

/// Random k-local Hamiltonian: each term is a GUE block on its support,
/// rescaled to operator norm exactly `c`.
pub fn build_k_local_hamiltonian(spec: &LocalHamiltonianSpec, rng: &mut RngStream) -> Result<LocalHamiltonian> {
    let d = spec.validate()?;
    let supports = match spec.placement {
        TermPlacement::AllSubsets => k_subsets(spec.n_sites, spec.k),
        TermPlacement::UniformRandom { n_terms } => (0..n_terms)
            .map(|_| {
                let mut s = rand::seq::index::sample(rng, spec.n_sites, spec.k).into_vec();
                s.sort_unstable();
                s
            })
            .collect(),
    };
    let block = spec.local_dim.pow(spec.k as u32);
    let mut h = Mat::<c64>::zeros(d, d);
    let mut triangle_bound = 0.0;
    for sites in &supports {
        let term = sample_gue(block, rng)?;
        let norm = term.operator_norm()?;
        if !(norm > 0.0) {
            return Err(Error::DegenerateSpectrum { value: 0.0 });
        }
        let scaled = term.affine(spec.c / norm, 0.0);
        let m = Mat::from_fn(block, block, |i, j| scaled[(i, j)]);
        embed_term(&mut h, &m, sites, spec.n_sites, spec.local_dim);
        triangle_bound += spec.c;
    }
    Ok(LocalHamiltonian {
        hamiltonian: HermitianOperator::symmetrized(h.as_ref()),
        supports,
        triangle_bound,
    })
}
