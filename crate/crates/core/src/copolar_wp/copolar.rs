use serde::Serialize;

use super::vfspace::VfCohomology;
use crate::cy_deformation::{cy_invert, vf_delbar, VolumeForm};
use crate::error::{Error, Result};
use crate::exterior::{lefschetz_matrix, primitive_part, Bidegree, Form, VectorForm};
use crate::lie_model::{HermitianModel, Op};
use crate::linalg::{self, CMat, CVec};

/// Projector onto (Im ∂̄)^⊥ inside Λ^{p,q}, unitary-frame coordinates.
pub(crate) fn mod_delbar_exact(h: &HermitianModel, bd: Bidegree) -> CMat {
    let dim = h.ortho_ops().positions(bd).len();
    let id = CMat::identity(dim, dim);
    match bd.q.checked_sub(1) {
        Some(q) => {
            let img = linalg::image(&h.ortho_ops().delbar_block(Bidegree::new(bd.p, q)), h.rank_tol());
            id - linalg::projector(&img)
        }
        None => id,
    }
}

pub(crate) fn require_balanced(h: &HermitianModel) -> Result<()> {
    let flags = h.model().metric_flags(h.metric());
    if flags.balanced {
        Ok(())
    } else {
        Err(Error::NotBalanced(flags.d_omega_n1_norm))
    }
}

/// Subspace of H^{0,1}(T^{1,0}) cut out by a class-level linear condition.
#[derive(Debug, Clone)]
pub struct CopolarisedSpace {
    pub ambient: VfCohomology,
    /// Orthonormal class coordinates (columns) of the subspace.
    pub coords: CMat,
    /// Harmonic representatives.
    pub basis: Vec<VectorForm>,
    pub class_map_rank: usize,
    /// Size of the class map on ∂̄-exact vector forms (zero when well defined).
    pub well_defined_defect: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpaceSummary {
    pub ambient_dimension: usize,
    pub dimension: usize,
    pub class_map_rank: usize,
    pub well_defined_defect: f64,
}

impl CopolarisedSpace {
    pub fn dimension(&self) -> usize {
        self.coords.ncols()
    }

    pub fn summary(&self) -> SpaceSummary {
        SpaceSummary {
            ambient_dimension: self.ambient.dimension(),
            dimension: self.dimension(),
            class_map_rank: self.class_map_rank,
            well_defined_defect: self.well_defined_defect,
        }
    }
}

/// Kernel of [θ] ↦ [θ⌟w] in Λ^{bd}/Im ∂̄.
fn kernel_of_class_map(h: &HermitianModel, w: &Form, bd: Bidegree) -> CopolarisedSpace {
    let ambient = VfCohomology::new(h, 1);
    let proj = mod_delbar_exact(h, bd);
    let image_of = |v: &VectorForm| -> CVec { &proj * h.coords(&v.contract(w), bd) };
    let basis = ambient.basis();
    let mut m = CMat::zeros(proj.nrows(), basis.len());
    for (c, b) in basis.iter().enumerate() {
        m.set_column(c, &image_of(b));
    }
    let mut defect = 0.0f64;
    for c in 0..ambient.exact.ncols() {
        defect = defect.max(image_of(&ambient.vector_form(&ambient.exact.column(c).into_owned())).norm());
    }
    let coords = linalg::kernel(&m, h.rank_tol());
    let reps = (0..coords.ncols()).map(|c| ambient.from_class(&coords.column(c).into_owned())).collect();
    CopolarisedSpace { class_map_rank: linalg::rank(&m, h.rank_tol()), ambient, coords, basis: reps, well_defined_defect: defect }
}

/// Co-polarised directions: [θ] with [θ⌟ω^{n−1}] = 0 in H^{n−2,n}.
pub fn copolarised_subspace(h: &HermitianModel) -> Result<CopolarisedSpace> {
    require_balanced(h)?;
    let n = h.dim();
    if n < 2 {
        return Err(Error::DimTooSmall(n));
    }
    Ok(kernel_of_class_map(h, &h.metric().omega_power(n - 1), Bidegree::new(n - 2, n)))
}

/// Polarised directions: [θ] with θ⌟ω ∂̄-exact in Λ^{0,2}.
pub fn polarised_subspace(h: &HermitianModel) -> Result<CopolarisedSpace> {
    if h.dim() < 2 {
        return Err(Error::DimTooSmall(h.dim()));
    }
    Ok(kernel_of_class_map(h, &h.metric().omega(), Bidegree::new(0, 2)))
}

/// Distance between two subspaces of the same ambient H^{0,1}(T^{1,0}).
pub fn subspace_gap(a: &CopolarisedSpace, b: &CopolarisedSpace) -> f64 {
    let pa = linalg::projector(&a.coords);
    let pb = linalg::projector(&b.coords);
    (pa - pb).norm()
}

/// T_[u] of the co-polarised space: (n−1,1) classes as harmonic-projected forms.
pub fn primitive_n11_space(h: &HermitianModel, u: &VolumeForm) -> Result<Vec<Form>> {
    let space = copolarised_subspace(h)?;
    Ok(space.basis.iter().map(|t| t.contract(u.form())).collect())
}

/// Defects of the Lefschetz three-space mechanism on Λ^{0,2} → Λ^{n−2,n}:
/// L^{n−2}(ker Δ'') vs ker Δ'' and L^{n−2}(Im ∂̄ ⊕ Im ∂̄*) vs Im ∂̄.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThreeSpaceCheck {
    pub harmonic_gap: f64,
    pub exact_gap: f64,
}

pub fn three_space_check(h: &HermitianModel) -> Result<ThreeSpaceCheck> {
    let n = h.dim();
    if n < 2 {
        return Err(Error::DimTooSmall(n));
    }
    let src = Bidegree::new(0, 2);
    let dst = Bidegree::new(n - 2, n);
    let tol = h.rank_tol();
    let l = lefschetz_chain(n, src, n - 2);
    let harm_src = linalg::kernel(&h.op_matrix(Op::LapDelbar, src)?, tol);
    let harm_dst = linalg::kernel(&h.op_matrix(Op::LapDelbar, dst)?, tol);
    let o = h.ortho_ops();
    let im_src = linalg::span_sum(&o.delbar_block(Bidegree::new(0, 1)), &o.delbar_block(src).adjoint(), tol);
    let im_dst = linalg::image(&o.delbar_block(Bidegree::new(n - 2, n - 1)), tol);
    Ok(ThreeSpaceCheck {
        harmonic_gap: linalg::subspace_distance(&(&l * harm_src), &harm_dst, tol),
        exact_gap: linalg::subspace_distance(&(&l * im_src), &im_dst, tol),
    })
}

/// Outcome of the search for a primitive representative of a primitive (n−1,1)-class.
#[derive(Debug, Clone)]
pub struct PrimitiveRepSearch {
    pub found: bool,
    pub representative: Option<Form>,
    /// α₀ ∈ Λ^{1,2} in w = ω^{n−3}∧α₀ + ξ⌟ω^{n−1}.
    pub obstruction: Form,
    pub xi: VectorForm,
    pub w: Form,
    /// |∂̄(ω^{n−3}∧α₀)|.
    pub defect: f64,
}

/// Corrected representative (θ − ∂̄ξ)⌟u of a co-polarised class, and whether it is primitive.
pub fn primitive_rep_search(h: &HermitianModel, u: &VolumeForm, theta: &VectorForm) -> Result<PrimitiveRepSearch> {
    let n = h.dim();
    if n < 3 {
        return Err(Error::DimTooSmall(n));
    }
    require_balanced(h)?;
    let g = h.metric();
    let m = h.model();
    let wn1 = g.omega_power(n - 1);
    let target = Bidegree::new(n - 2, n);
    let rhs = h.coords(&theta.degree_part(1).contract(&wn1), target);
    let src = Bidegree::new(n - 2, n - 1);
    let a = h.ortho_ops().delbar_block(src);
    let (wv, residual) = linalg::min_norm_solve(&a, &rhs, h.rank_tol());
    if residual > 1e-9 * rhs.norm().max(1.0) {
        return Err(Error::NotPrimitiveClass(residual));
    }
    let w = h.form(&wv, src);
    // ω^{n−3}∧a = w with a ∈ Λ^{1,2}, then a = α₀ + ω∧β
    let lift = lefschetz_chain(n, Bidegree::new(1, 2), n - 3);
    let (av, _) = linalg::min_norm_solve(&lift, &h.coords(&w, src), h.rank_tol());
    let a12 = h.form(&av, Bidegree::new(1, 2));
    let (alpha0, beta) = primitive_part(&a12, g)?;
    // ξ⌟ω^{n−1} = (n−1) ω^{n−2}∧(ξ⌟ω), so ξ⌟ω = β/(n−1)
    let xi = solve_xi_omega(h, &beta.scale_re(1.0 / (n as f64 - 1.0)));
    let corrected = &theta.degree_part(1) - &vf_delbar(m, &xi);
    let defect = m.delbar(&g.omega_power(n - 3).wedge(&alpha0)).max_abs();
    let found = defect <= 1e-9;
    let rep = corrected.contract(u.form());
    Ok(PrimitiveRepSearch { found, representative: Some(rep), obstruction: alpha0, xi, w, defect })
}

/// Matrix of L^r from the given bidegree, unitary-frame coordinates.
pub(crate) fn lefschetz_chain(n: usize, bd: Bidegree, r: usize) -> CMat {
    let dim = crate::exterior::bidegree_basis(n, bd).len();
    (0..r).fold(CMat::identity(dim, dim), |acc, k| lefschetz_matrix(n, Bidegree::new(bd.p + k + 1, bd.q + k + 1)) * acc)
}

/// The vector field ξ with ξ⌟ω = β for a (0,1)-form β.
fn solve_xi_omega(h: &HermitianModel, beta: &Form) -> VectorForm {
    let n = h.dim();
    let w = h.metric().omega();
    let bd = Bidegree::new(0, 1);
    let mut m = CMat::zeros(n, n);
    for j in 1..=n {
        let mut t = VectorForm::zero(n);
        t.set(j, 0, linalg::ONE);
        m.set_column(j - 1, &h.coords(&t.contract(&w), bd));
    }
    let (c, _) = linalg::min_norm_solve(&m, &h.coords(beta, bd), h.rank_tol());
    let mut xi = VectorForm::zero(n);
    for j in 1..=n {
        xi.set(j, 0, c[j - 1]);
    }
    xi
}

/// T_u⁻¹ applied to a list of forms.
pub fn invert_all(u: &VolumeForm, forms: &[Form]) -> Result<Vec<VectorForm>> {
    forms.iter().map(|f| cy_invert(u, f)).collect()
}
