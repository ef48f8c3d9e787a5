//! Hermitian exterior algebra, invariant-form cohomology of Lie-algebra
//! models, and the deformation calculus of Calabi-Yau manifolds built on them.

pub mod copolar_wp;
pub mod cy_deformation;
pub mod error;
pub mod exterior;
pub mod lie_model;
pub mod linalg;
pub mod report;

pub use error::{Error, Result};
