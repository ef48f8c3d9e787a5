use serde::Serialize;

use super::copolar::{copolarised_subspace, lefschetz_chain, mod_delbar_exact, require_balanced};
use crate::cy_deformation::vf_delbar_matrix;
use crate::error::{Error, Result};
use crate::exterior::{bidegree_basis, vf_basis, Bidegree, Blade, Form, VectorForm};
use crate::lie_model::{HermitianModel, Op, Space, Theory};
use crate::linalg::{self, CMat};

/// Primitive (1,1)-classes: kernel of [α] ↦ [ω^{n−1}∧α] on H^{1,1}.
#[derive(Debug, Clone)]
pub struct Primitive11 {
    /// Orthonormal Δ''-harmonic (1,1) basis, unitary-frame coordinates.
    pub harmonic: CMat,
    /// Class coordinates of the primitive subspace in `harmonic`.
    pub coords: CMat,
    /// Harmonic representatives of the primitive classes.
    pub basis: Vec<Form>,
}

impl Primitive11 {
    pub fn ambient_dimension(&self) -> usize {
        self.harmonic.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.coords.ncols()
    }
}

pub fn primitive_11(h: &HermitianModel) -> Result<Primitive11> {
    require_balanced(h)?;
    let n = h.dim();
    let bd = Bidegree::new(1, 1);
    let top = Bidegree::new(n, n);
    let harmonic = h.dolbeault_harmonic(bd)?;
    let proj = mod_delbar_exact(h, top);
    let wn1 = h.metric().omega_power(n - 1);
    let mut m = CMat::zeros(proj.nrows(), harmonic.ncols());
    for c in 0..harmonic.ncols() {
        let a = h.form(&harmonic.column(c).into_owned(), bd);
        m.set_column(c, &(&proj * h.coords(&wn1.wedge(&a), top)));
    }
    let coords = linalg::kernel(&m, h.rank_tol());
    let basis = (0..coords.ncols()).map(|c| h.form(&(&harmonic * coords.column(c)), bd)).collect();
    Ok(Primitive11 { harmonic, coords, basis })
}

/// Representative α_harm + ∂̄u′ of a primitive (1,1)-class with ω^{n−1}∧rep = 0.
pub fn primitive_11_rep(h: &HermitianModel, alpha: &Form) -> Result<Form> {
    require_balanced(h)?;
    let n = h.dim();
    let bd = Bidegree::new(1, 1);
    if alpha.bidegree().is_some_and(|b| b != bd) {
        let b = alpha.bidegree().unwrap_or(bd);
        return Err(Error::UnsupportedBidegree(b.p, b.q));
    }
    let harm = h.harmonic_representative(alpha, Theory::Dolbeault)?;
    let g = h.metric();
    let wn1 = g.omega_power(n - 1);
    let src = Bidegree::new(n, n - 1);
    let rhs = -h.coords(&wn1.wedge(&harm), Bidegree::new(n, n));
    let (wv, residual) = linalg::min_norm_solve(&h.ortho_ops().delbar_block(src), &rhs, h.rank_tol());
    if residual > 1e-9 * rhs.norm().max(1.0) {
        return Err(Error::NotPrimitiveClass(residual));
    }
    let lift = lefschetz_chain(n, Bidegree::new(1, 0), n - 1);
    let (uv, _) = linalg::min_norm_solve(&lift, &wv, h.rank_tol());
    let u1 = h.form(&uv, Bidegree::new(1, 0));
    Ok(&harm + &h.model().delbar(&u1))
}

/// T_σ and its class-level checks.
#[derive(Debug, Clone)]
pub struct SymplecticMaps {
    /// T_σ on T^{1,0} ⊗ Λ^{0,q} → Λ^{1,q}, coefficient coordinates, for q = 0, 1.
    pub t_sigma: [CMat; 2],
    pub checks: SymplecticChecks,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymplecticChecks {
    pub bijective: bool,
    pub kernel_gap: f64,
    pub image_gap: f64,
    pub copolarised_dimension: usize,
    pub primitive_11_dimension: usize,
    /// Subspace gap between T_[σ](co-polarised) and the primitive (1,1)-classes.
    pub class_gap: f64,
    pub primitive_iso_check: bool,
}

fn t_sigma_matrix(n: usize, sigma: &Form, q: usize) -> CMat {
    let src = vf_basis(n, q);
    let dst: Vec<Blade> = bidegree_basis(n, Bidegree::new(1, q));
    let mut m = CMat::zeros(dst.len(), src.len());
    for (c, &(j, a)) in src.iter().enumerate() {
        let mut t = VectorForm::zero(n);
        t.set(j, a, linalg::ONE);
        m.set_column(c, &t.contract(sigma).coords(&dst));
    }
    m
}

pub fn symplectic_maps(h: &HermitianModel, sigma: &Form, tol: f64) -> Result<SymplecticMaps> {
    let n = h.dim();
    let m = h.model();
    if sigma.bidegree().is_some_and(|b| b != Bidegree::new(2, 0)) {
        let b = sigma.bidegree().unwrap_or(Bidegree::new(2, 0));
        return Err(Error::UnsupportedBidegree(b.p, b.q));
    }
    let coeff = CMat::from_fn(n, n, |i, j| {
        if i == j {
            linalg::ZERO
        } else {
            let (lo, hi, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            sigma.get(Blade::new((1 << lo) | (1 << hi), 0)) * s
        }
    });
    if linalg::rank(&coeff, h.rank_tol()) < n {
        return Err(Error::Degenerate);
    }
    let defect = m.delbar(sigma).max_abs();
    if defect > tol {
        return Err(Error::NotInKernel(defect));
    }
    let h20 = m.cohomology_dimension(Theory::Dolbeault, Space::Bidegree(Bidegree::new(2, 0)))?;
    if h20 != 1 {
        return Err(Error::NotUnique(h20));
    }
    let rt = h.rank_tol();
    let t0 = t_sigma_matrix(n, sigma, 0);
    let t1 = t_sigma_matrix(n, sigma, 1);
    let bijective = linalg::rank(&t0, rt) == t0.ncols() && linalg::rank(&t1, rt) == t1.ncols() && t1.nrows() == t1.ncols();
    let ops = m.operators();
    let ker_vf = linalg::kernel(&vf_delbar_matrix(m, 1), rt);
    let ker_forms = linalg::kernel(&ops.delbar_block(Bidegree::new(1, 1)), rt);
    let kernel_gap = linalg::subspace_distance(&(&t1 * ker_vf), &ker_forms, rt);
    let im_vf = vf_delbar_matrix(m, 0);
    let im_forms = ops.delbar_block(Bidegree::new(1, 0));
    let image_gap = linalg::subspace_distance(&(&t1 * im_vf), &im_forms, rt);

    let copol = copolarised_subspace(h)?;
    let prim = primitive_11(h)?;
    let bd = Bidegree::new(1, 1);
    let mut imgs = CMat::zeros(prim.harmonic.ncols(), copol.basis.len());
    for (c, theta) in copol.basis.iter().enumerate() {
        let f = theta.contract(sigma);
        imgs.set_column(c, &(prim.harmonic.adjoint() * h.coords(&f, bd)));
    }
    let class_gap = linalg::subspace_distance(&imgs, &prim.coords, rt);
    let same_dim = linalg::rank(&imgs, rt) == prim.dimension() && copol.dimension() == prim.dimension();
    let checks = SymplecticChecks {
        bijective,
        kernel_gap,
        image_gap,
        copolarised_dimension: copol.dimension(),
        primitive_11_dimension: prim.dimension(),
        class_gap,
        primitive_iso_check: same_dim && class_gap < 1e-8,
    };
    Ok(SymplecticMaps { t_sigma: [t0, t1], checks })
}

/// Checks that ∂̄*(θ⌟ω^{n−1}) = 0 exactly when ∂(θ⌟ω) = 0: returns
/// (|∂̄*(θ⌟ω^{n−1})|, |∂(θ⌟ω)|) for a (0,1) vector form θ.
pub fn theta_omega_defects(h: &HermitianModel, theta: &VectorForm) -> Result<(f64, f64)> {
    let n = h.dim();
    let g = h.metric();
    let a = theta.contract(&g.omega_power(n - 1));
    let bd = Bidegree::new(n - 2, n);
    let lhs = h.op_matrix(Op::DelbarStar, bd)? * h.coords(&a, bd);
    let rhs = h.model().del(&theta.contract(&g.omega()));
    Ok((lhs.norm(), g.norm(&rhs)))
}
