use super::volume::{cy_invert, VolumeForm};
use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::exterior::{vf_basis, Blade, Form, VectorForm};
use crate::lie_model::Model;
use crate::linalg::{self, CMat};

/// ∂̄ on T^{1,0}-valued (0,q)-forms, fixed by (∂̄θ)⌟e^m = ∂̄(θ⌟e^m) + (−1)^q θ⌟∂̄e^m.
/// Equivalently ∂̄(θ⌟a) = (∂̄θ)⌟a − (−1)^q θ⌟∂̄a for every form a.
pub fn vf_delbar(model: &Model, theta: &VectorForm) -> VectorForm {
    let n = model.dim();
    let mut out = VectorForm::zero(n);
    for q in 0..=n {
        let part = theta.degree_part(q);
        if part.is_zero(0.0) {
            continue;
        }
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        let comps: Vec<(usize, Form)> = (1..=n)
            .map(|m| {
                let e = Form::e(n, m);
                let f = &model.delbar(&part.part(m)) + &part.contract(&model.delbar(&e)).scale_re(sign);
                (m, f)
            })
            .collect();
        out = &out + &VectorForm::from_parts(n, &comps);
    }
    out
}

/// e^k([Z_i, Z_j]) = −ι_{Z_j} ι_{Z_i} d e^k.
fn frame_bracket(model: &Model, i: usize, j: usize) -> Vec<(usize, Complex64)> {
    model
        .structure()
        .iter()
        .enumerate()
        .map(|(k, de)| (k + 1, -de.interior(i, false).interior(j, false).get(Blade::new(0, 0))))
        .filter(|(_, c)| c.norm() > 0.0)
        .collect()
}

/// Bracket of T^{1,0}-valued (0,*)-forms, the negative of the Frölicher-Nijenhuis bracket:
/// [α⊗Z_i, β⊗Z_j] = −(α∧β⊗[Z_i,Z_j] + α∧ι_{Z_i}dβ⊗Z_j − ι_{Z_j}dα∧β⊗Z_i).
/// With this sign [θ₁⌟u, θ₂⌟u] = ∂(θ₁⌟(θ₂⌟u)) whenever ∂(θ_i⌟u) = 0.
pub fn bracket(model: &Model, phi: &VectorForm, psi: &VectorForm) -> Result<VectorForm> {
    let n = model.dim();
    if phi.dim() != n || psi.dim() != n {
        return Err(Error::DimMismatch(phi.dim().max(psi.dim()), n));
    }
    let mut parts: Vec<Form> = vec![Form::zero(n); n];
    let alphas: Vec<Form> = (1..=n).map(|i| phi.part(i)).collect();
    let betas: Vec<Form> = (1..=n).map(|j| psi.part(j)).collect();
    let dalphas: Vec<Form> = alphas.iter().map(|a| model.d(a)).collect();
    let dbetas: Vec<Form> = betas.iter().map(|b| model.d(b)).collect();
    for i in 1..=n {
        let a = &alphas[i - 1];
        if a.is_zero(0.0) {
            continue;
        }
        for j in 1..=n {
            let b = &betas[j - 1];
            if b.is_zero(0.0) {
                continue;
            }
            let ab = a.wedge(b);
            for (k, c) in frame_bracket(model, i, j) {
                parts[k - 1] -= &ab.scale(c);
            }
            parts[j - 1] -= &a.wedge(&dbetas[j - 1].interior(i, false));
            parts[i - 1] += &dalphas[i - 1].interior(j, false).wedge(b);
        }
    }
    let indexed: Vec<(usize, Form)> = parts.into_iter().enumerate().map(|(k, f)| (k + 1, f)).collect();
    Ok(VectorForm::from_parts(n, &indexed))
}

/// Bracket transported to (n−1,*)-forms: [a, b] = T_u[T_u⁻¹a, T_u⁻¹b].
pub fn scalar_bracket(model: &Model, u: &VolumeForm, a: &Form, b: &Form) -> Result<Form> {
    let phi = cy_invert(u, a)?;
    let psi = cy_invert(u, b)?;
    Ok(bracket(model, &phi, &psi)?.contract(u.form()))
}

/// Matrix of vector ∂̄ from (0,q) to (0,q+1) vector-form coordinates.
pub fn vf_delbar_matrix(model: &Model, q: usize) -> CMat {
    let n = model.dim();
    let src = vf_basis(n, q);
    let dst_len = vf_basis(n, q + 1).len();
    let mut m = CMat::zeros(dst_len, src.len());
    for (c, &(j, a)) in src.iter().enumerate() {
        let mut t = VectorForm::zero(n);
        t.set(j, a, linalg::ONE);
        if q < n {
            m.set_column(c, &vf_delbar(model, &t).coords(q + 1));
        }
    }
    m
}
