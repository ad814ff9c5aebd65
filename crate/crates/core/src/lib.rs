//! Max-plus (tropical) linear algebra and the tropical limit of softmax attention.
//!
//! The crate is organized bottom-up:
//!
//! - [`semiring`]: the scalar `(ℝ ∪ {⊥}, max, +)` with `⊥` as a tagged bottom element.
//! - [`linalg`]: dense tropical matrices and value vectors, products, powers,
//!   argmax witnesses and path reconstruction.
//! - [`attention`]: finite-β softmax attention, a stabilized log-sum-exp, and the
//!   two β → ∞ limits (hard attention and the log-space/tropical form).
//! - [`convergence`]: row margins, region classification, β-sweeps and the
//!   per-row agreement report between the two limits.
//! - [`pathfinding`]: the graph reading (Bellman–Ford relaxation, exhaustive
//!   path enumeration, DOT export, the built-in four-node fixture).
//! - [`io`]: the JSON and CSV file formats.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what the file formats use.

pub mod attention;
pub mod convergence;
mod error;
pub mod io;
pub mod linalg;
pub mod pathfinding;
mod real;
pub mod semiring;

pub use error::{Error, Result};
pub use real::{format_real, Real};
pub use semiring::{trop_add, trop_leq, trop_mul, Tropical};

/// Tropical scalar over `f64`.
pub type TropicalScalar = semiring::Tropical<f64>;
/// Dense tropical matrix over `f64`.
pub type Matrix = linalg::TropicalMatrix<f64>;
/// Value vector (`len × dim`) over `f64`.
pub type Values = linalg::ValueVector<f64>;
/// Path witness over `f64`.
pub type Path = linalg::PathWitness<f64>;
/// Token graph over `f64`.
pub type Graph = pathfinding::TokenGraph<f64>;
/// Query/key/value embeddings over `f64`.
pub type Embeddings = attention::EmbeddingSet<f64>;
/// Inverse temperature over `f64`.
pub type InverseTemperature = attention::Beta<f64>;
