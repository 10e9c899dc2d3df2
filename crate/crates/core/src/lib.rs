//! Laplace eigenvalue toolkit for checking the Pólya inequalities on tiling domains.
//!
//! The crate is split along the objects the checks are built from:
//!
//! * [`geometry`]: domains, isometries, measures and sampled coverage.
//! * [`tiling`]: periodic catalog tilings, validation and the `I`, `J`, `K` index sets.
//! * [`spectra`]: closed-form spectra, lattice-point counting and Weyl terms.
//! * [`fem`]: P1 finite elements with a shift-invert subspace eigensolver.
//! * [`inequality`]: counting functions and inequality reports.
//! * [`extension`]: the reflection extension operator on grid fields.
//! * [`prover`]: numerical replay of the tiling argument for the Neumann bound.
//! * [`solve`]: picks closed forms or finite elements for a given domain.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and runs sequentially otherwise.

pub mod error;
pub mod extension;
pub mod fem;
pub mod geometry;
pub mod inequality;
pub mod par;
pub mod prover;
pub mod solve;
pub mod spectra;
pub mod tiling;

pub use error::{Error, Result};
pub use par::Execution;
