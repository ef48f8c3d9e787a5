//! Pointwise complex exterior algebra over an n-dimensional Hermitian space.

mod blade;
mod decompose;
mod form;
mod metric;
mod vector_form;

pub use blade::{binomial, bidegree_basis, bits, degree_basis, merge_sign, subsets_of_size, Bidegree, Blade};
pub use decompose::{
    lefschetz_matrix, primitive_decompose, primitive_part, star_eigenvalue, star_split_n, torsion_tau,
};
pub use form::Form;
pub use metric::{factorial, i_pow, HermitianMetric};
pub use vector_form::{vf_basis, VectorForm};

use crate::error::{Error, Result};

/// Largest supported complex dimension (forms are stored densely over 4^n blades).
pub const MAX_DIM: usize = 7;

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimMismatch(a, b))
    }
}

/// Exterior product with a dimension check.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    same_dim(a.dim(), b.dim())?;
    Ok(a.wedge(b))
}

/// θ⌟a with a dimension check.
pub fn contract(theta: &VectorForm, a: &Form) -> Result<Form> {
    same_dim(theta.dim(), a.dim())?;
    Ok(theta.contract(a))
}

/// L^r a = ω^r∧a.
pub fn lefschetz(a: &Form, metric: &HermitianMetric, r: usize) -> Result<Form> {
    same_dim(a.dim(), metric.dim())?;
    Ok(metric.lefschetz(a, r))
}

/// Λ a, the pointwise adjoint of L.
pub fn lambda(a: &Form, metric: &HermitianMetric) -> Result<Form> {
    same_dim(a.dim(), metric.dim())?;
    Ok(metric.lambda(a))
}

/// ⋆a for the metric.
pub fn hodge_star(a: &Form, metric: &HermitianMetric) -> Result<Form> {
    same_dim(a.dim(), metric.dim())?;
    Ok(metric.star(a))
}
