//! Invariant-form models of nilpotent (more generally unimodular) Lie algebras
//! with a left-invariant complex structure: structure equations, the operators
//! ∂, ∂̄, d on invariant forms, their cohomologies and the metric-dependent
//! Laplacians.

mod hermitian;
mod model;
mod operators;
mod spec;

pub use hermitian::{AeppliSplit, CohomologySpace, HermitianModel, MinimalRep, Op};
pub use model::{DdbarFailure, DdbarReport, MetricFlags, Model, Space, Theory, Validation};
pub use operators::{d_blade, generator_differentials, Operators, Which};
pub use spec::{fixtures, ModelSpec, StructureEquation, StructureTerm};
