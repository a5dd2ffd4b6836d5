//! Sparse principal component estimation toolkit.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`matcore`]: dense symmetric linear algebra (eigendecomposition,
//!   simplex / spectahedron / entrywise-clip projections) and the shared
//!   matrix text format;
//! - [`models`]: seeded samplers for spiked Gaussian and graph-vector
//!   distributions, planted-clique graphs, and the bottom-left transform
//!   that turns a graph into a data matrix;
//! - [`estimators`]: the semidefinite-relaxation sparse PC estimator
//!   (a mirror-prox saddle-point solver), its default tuning, the top-k
//!   truncation post-processor, and the exhaustive k-sparse eigenvector;
//! - [`cliquesolver`]: the planted-clique recovery pipeline built on the
//!   SDP estimator;
//! - [`analysis`]: the sin-theta loss, restricted covariance deviations,
//!   and empirical restricted-covariance-concentration audits.
//!
//! All randomness flows through [`models::SeededRng`]; every sampler and
//! pipeline is bit-reproducible given its seed.

pub mod analysis;
pub mod cliquesolver;
pub mod error;
pub mod estimators;
pub mod matcore;
pub mod models;

pub use error::{Error, Result};
