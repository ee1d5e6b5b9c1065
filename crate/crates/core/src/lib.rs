//! Ergotropy, von Neumann entropy and state-space distances for random quantum
//! states, plus the Monte Carlo machinery used to study how these quantities
//! concentrate in high Hilbert-space dimension.
//!
//! The crate is organized bottom-up:
//!
//! - [`matcore`]: dense Hermitian kernel and validated state/operator types,
//! - [`sampler`]: Ginibre, Haar, Hilbert–Schmidt, Bures, pure-state, GUE/nGUE
//!   and k-local ensembles driven by reproducible [`sampler::RngStream`]s,
//! - [`quantities`]: passive states, ergotropy, extraction unitaries, entropy,
//!   work fluctuations,
//! - [`metrics`]: trace, Hilbert–Schmidt and Bures distances, fidelity,
//!   purifications,
//! - [`bounds`]: closed-form continuity constants and Levy tail bounds,
//! - [`experiments`]: ensemble sweeps, tail experiments, exponent fits and
//!   inequality verification suites,
//! - [`cli`]: the `ergolab` command line and its CSV/JSON output formats.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod matcore;
pub mod metrics;
pub mod quantities;
pub mod sampler;

pub use error::{Error, Result};
pub use matcore::{c64, ComplexMatrix, DensityMatrix, HermitianOperator, Spectrum};
