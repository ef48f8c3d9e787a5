//! Co-polarised deformation directions, Hodge-Riemann pairings on H^n,
//! Weil-Petersson type metrics and holomorphic symplectic isomorphisms.
//!
//! Vector-form cohomology H^{0,q}(T^{1,0}) is represented by harmonic
//! representatives in unitary-frame coordinates; class-level maps are
//! evaluated modulo the ∂̄-exact forms of the target bidegree.

mod copolar;
mod pairings;
mod prim11;
mod vfspace;
mod wp;

pub use copolar::{
    copolarised_subspace, invert_all, polarised_subspace, primitive_n11_space, primitive_rep_search, subspace_gap,
    three_space_check, CopolarisedSpace, PrimitiveRepSearch, SpaceSummary, ThreeSpaceCheck,
};
pub use pairings::{
    h_form, integrate, pairings, period_domain_check, q_form, split_metric_dependence, split_projectors, PairingChecks,
    PairingReport,
};
pub use prim11::{primitive_11, primitive_11_rep, symplectic_maps, theta_omega_defects, Primitive11, SymplecticChecks, SymplecticMaps};
pub use vfspace::VfCohomology;
pub use wp::{gram_distance, wp_metrics, DirectionData, MetricReport};
