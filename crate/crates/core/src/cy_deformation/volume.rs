use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{bidegree_basis, Blade, vf_basis, Bidegree, Form, HermitianMetric, VectorForm};
use crate::lie_model::Model;
use crate::linalg::{self, CMat, RANK_TOL};

/// A nowhere-vanishing ∂̄-closed (n,0)-form.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeForm {
    u: Form,
    normalized: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VolumeSummary {
    pub coefficient_re: f64,
    pub coefficient_im: f64,
    pub canonical_norm_sq: f64,
    pub d_closed: bool,
}

impl VolumeForm {
    /// Wrap a user-supplied (n,0)-form after checking type, non-vanishing and ∂̄u = 0.
    pub fn new(model: &Model, u: Form) -> Result<VolumeForm> {
        let n = model.dim();
        if u.dim() != n {
            return Err(Error::DimMismatch(u.dim(), n));
        }
        if u.is_zero(1e-14) {
            return Err(Error::VanishingForm);
        }
        if u.bidegree() != Some(Bidegree::new(n, 0)) {
            let (p, q) = u.bidegree().map(|b| (b.p, b.q)).unwrap_or((n, 0));
            return Err(Error::UnsupportedBidegree(p, q));
        }
        let defect = model.delbar(&u).max_abs();
        if defect > 1e-9 * u.max_abs() {
            return Err(Error::NoTrivialization(format!("the (n,0)-form is not holomorphic (|∂̄u| = {defect:.3e})")));
        }
        Ok(VolumeForm { u, normalized: false })
    }

    pub fn form(&self) -> &Form {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rescale by a positive real so that |u|²_K = 1/n! for the given metric.
    pub fn normalize(&self, metric: &HermitianMetric) -> VolumeForm {
        let s = metric.norm(&self.u);
        VolumeForm { u: self.u.scale_re(1.0 / s), normalized: true }
    }

    /// i^{n²}∫u∧ū with Vol = 1, relative to ∫dV_ω = 1; equals the unitary-frame |u|².
    pub fn denominator(&self, metric: &HermitianMetric) -> f64 {
        metric.norm_sq(&self.u)
    }

    pub fn summary(&self, model: &Model, metric: &HermitianMetric) -> VolumeSummary {
        let top = self.u.get(Blade::new((1u32 << self.dim()) - 1, 0));
        VolumeSummary {
            coefficient_re: top.re,
            coefficient_im: top.im,
            canonical_norm_sq: metric.canonical_norm_sq(&self.u),
            d_closed: model.d(&self.u).is_zero(1e-9),
        }
    }
}

/// The normalized e^1∧…∧e^n, provided it spans the invariant H^{n,0}.
pub fn canonical_trivialization(model: &Model, metric: &HermitianMetric) -> Result<VolumeForm> {
    let n = model.dim();
    if metric.dim() != n {
        return Err(Error::DimMismatch(metric.dim(), n));
    }
    let all: Vec<usize> = (1..=n).collect();
    let top = Form::monomial(n, &all, &[]);
    let defect = model.delbar(&top).max_abs();
    if defect > 1e-9 {
        return Err(Error::NoTrivialization(format!("h^{{{n},0}} = 0: ∂̄(e^1∧…∧e^{n}) has size {defect:.3e}")));
    }
    Ok(VolumeForm::new(model, top)?.normalize(metric))
}

/// T_u(θ) = θ⌟u.
pub fn cy_contract(u: &VolumeForm, theta: &VectorForm) -> Result<Form> {
    if theta.dim() != u.dim() {
        return Err(Error::DimMismatch(theta.dim(), u.dim()));
    }
    Ok(theta.contract(&u.u))
}

/// Matrix of T_u from (0,q) vector-form coordinates to (n−1,q) form coordinates.
pub fn tu_matrix(u: &VolumeForm, q: usize) -> CMat {
    let n = u.dim();
    let src = vf_basis(n, q);
    let dst = bidegree_basis(n, Bidegree::new(n - 1, q));
    let mut m = CMat::zeros(dst.len(), src.len());
    for (c, &(j, a)) in src.iter().enumerate() {
        let mut t = VectorForm::zero(n);
        t.set(j, a, linalg::ONE);
        m.set_column(c, &t.contract(&u.u).coords(&dst));
    }
    m
}

/// T_u⁻¹ on an (n−1,q)-form.
pub fn cy_invert(u: &VolumeForm, a: &Form) -> Result<VectorForm> {
    let n = u.dim();
    if a.dim() != n {
        return Err(Error::DimMismatch(a.dim(), n));
    }
    if let Some((b, _)) = a.terms().find(|(b, _)| b.holo.count_ones() as usize + 1 != n) {
        let bd = b.bidegree();
        return Err(Error::UnsupportedBidegree(bd.p, bd.q));
    }
    let mut out = VectorForm::zero(n);
    for q in 0..=n {
        let part = a.bidegree_part(Bidegree::new(n - 1, q));
        if part.is_zero(0.0) {
            continue;
        }
        let m = tu_matrix(u, q);
        let (v, _) = linalg::min_norm_solve(&m, &part.coords(&bidegree_basis(n, Bidegree::new(n - 1, q))), RANK_TOL);
        out = &out + &VectorForm::from_coords(n, q, &v);
    }
    Ok(out)
}
