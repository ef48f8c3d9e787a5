//! Calabi-Yau isomorphism T_u, the bracket and ∂̄ on T^{1,0}-valued forms,
//! and the formal Kuranishi recursion.

mod calculus;
mod kuranishi;
mod volume;

pub use calculus::{bracket, scalar_bracket, vf_delbar, vf_delbar_matrix};
pub use kuranishi::{
    deformation_directions, kuranishi_series, maurer_cartan_residual, DeformationSeries, OrderSummary, DEFAULT_ORDER,
};
pub use volume::{canonical_trivialization, cy_contract, cy_invert, tu_matrix, VolumeForm, VolumeSummary};
