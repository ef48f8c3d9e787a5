use serde::Serialize;

use super::calculus::{bracket, vf_delbar};
use super::volume::{cy_invert, VolumeForm};
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, VectorForm};
use crate::lie_model::{HermitianModel, Op};
use crate::linalg::{self, CMat};

/// Default truncation order of the formal series.
pub const DEFAULT_ORDER: usize = 6;

/// Formal solution Φ(t) = Σ Φ_k t^k of ∂̄Φ = ½[Φ,Φ] to a finite order.
#[derive(Debug, Clone)]
pub struct DeformationSeries {
    pub direction: VectorForm,
    /// Φ_1, …, Φ_N.
    pub phis: Vec<VectorForm>,
    /// ψ_2, …, ψ_N with Φ_k⌟u = ∂ψ_k.
    pub psis: Vec<Form>,
    /// Maurer-Cartan residual at orders 1..=N (order 1 is |∂̄Φ_1|).
    pub residuals: Vec<f64>,
    /// Distance of ψ_k from Im(∂∂̄)*.
    pub psi_projection_defects: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderSummary {
    pub order: usize,
    pub phi_norm: f64,
    pub psi_norm: Option<f64>,
    pub residual: f64,
}

impl DeformationSeries {
    pub fn order(&self) -> usize {
        self.phis.len()
    }

    pub fn summary(&self, h: &HermitianModel) -> Vec<OrderSummary> {
        let g = h.metric();
        (0..self.phis.len())
            .map(|k| OrderSummary {
                order: k + 1,
                phi_norm: g.vf_norm_sq(&self.phis[k]).max(0.0).sqrt(),
                psi_norm: if k == 0 { None } else { Some(g.norm(&self.psis[k - 1])) },
                residual: self.residuals[k],
            })
            .collect()
    }
}

/// Matrix of ∂̄∂ : Λ^{n−2,1} → Λ^{n−1,2} in the unitary frame.
fn delbar_del(h: &HermitianModel) -> CMat {
    let n = h.dim();
    let o = h.ortho_ops();
    o.delbar_block(Bidegree::new(n - 1, 1)) * o.del_block(Bidegree::new(n - 2, 1))
}

/// ½ Σ_{l=1}^{k−1} [Φ_l, Φ_{k−l}].
fn bracket_sum(h: &HermitianModel, phis: &[VectorForm], k: usize) -> Result<VectorForm> {
    let n = h.dim();
    let mut acc = VectorForm::zero(n);
    for l in 1..k {
        acc = &acc + &bracket(h.model(), &phis[l - 1], &phis[k - l - 1])?;
    }
    Ok(acc.scale(num_complex::Complex64::new(0.5, 0.0)))
}

/// Formal Kuranishi series in the direction of the class of η (a ∂̄-closed (0,1) vector form).
/// Φ_1⌟u is the ω-minimal d-closed representative of [η⌟u]; for k ≥ 2, ψ_k is the
/// minimal-norm solution of ∂̄∂ψ_k = ½Σ[Φ_l⌟u, Φ_{k−l}⌟u] and Φ_k = T_u⁻¹(∂ψ_k).
pub fn kuranishi_series(h: &HermitianModel, u: &VolumeForm, eta: &VectorForm, order: usize) -> Result<DeformationSeries> {
    let n = h.dim();
    if order == 0 {
        return Err(Error::OrderOutOfRange(order));
    }
    if n < 2 {
        return Err(Error::DimTooSmall(n));
    }
    if u.dim() != n || eta.dim() != n {
        return Err(Error::DimMismatch(eta.dim(), n));
    }
    let model = h.model();
    let eta = eta.degree_part(1);
    let defect = vf_delbar(model, &eta).max_abs();
    if defect > 1e-9 * eta.max_abs().max(1.0) {
        return Err(Error::NotInKernel(defect));
    }
    let w1 = h.minimal_d_closed_rep(&eta.contract(u.form()))?.form;
    let mut phis = vec![cy_invert(u, &w1)?];
    let mut psis = Vec::new();
    let mut proj = Vec::new();
    let a = delbar_del(h);
    let row_space = linalg::image(&a.adjoint(), h.rank_tol());
    let target = Bidegree::new(n - 1, 2);
    let src = Bidegree::new(n - 2, 1);
    for k in 2..=order {
        let rhs_form = bracket_sum(h, &phis, k)?.contract(u.form());
        let rhs = h.coords(&rhs_form, target);
        let (v, residual) = linalg::min_norm_solve(&a, &rhs, h.rank_tol());
        if residual > 1e-9 * rhs.norm().max(1.0) {
            return Err(Error::ObstructionNotExact { order: k, residual });
        }
        proj.push((&v - linalg::projector(&row_space) * &v).norm());
        let psi = h.form(&v, src);
        phis.push(cy_invert(u, &h.model().del(&psi))?);
        psis.push(psi);
    }
    let mut series = DeformationSeries { direction: eta, phis, psis, residuals: vec![], psi_projection_defects: proj };
    series.residuals = (1..=order).map(|k| maurer_cartan_residual(h, &series, k)).collect::<Result<_>>()?;
    Ok(series)
}

/// ‖∂̄Φ_k − ½Σ_{l=1}^{k−1}[Φ_l, Φ_{k−l}]‖ in the metric.
pub fn maurer_cartan_residual(h: &HermitianModel, series: &DeformationSeries, k: usize) -> Result<f64> {
    if k == 0 || k > series.phis.len() {
        return Err(Error::OrderOutOfRange(k));
    }
    let defect = &vf_delbar(h.model(), &series.phis[k - 1]) - &bracket_sum(h, &series.phis, k)?;
    Ok(h.metric().vf_norm_sq(&defect).max(0.0).sqrt())
}

/// Deformation directions: T_u⁻¹ of an orthonormal basis of Δ''-harmonic (n−1,1)-forms.
pub fn deformation_directions(h: &HermitianModel, u: &VolumeForm) -> Result<Vec<VectorForm>> {
    let n = h.dim();
    let bd = Bidegree::new(n - 1, 1);
    let lap = h.op_matrix(Op::LapDelbar, bd)?;
    let harm = linalg::kernel(&lap, h.rank_tol());
    h.forms_of(&harm, bd).iter().map(|f| cy_invert(u, f)).collect()
}
