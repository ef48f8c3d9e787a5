use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{i_pow, star_eigenvalue, Form, HermitianMetric};
use crate::lie_model::{HermitianModel, Model, Op};
use crate::linalg::{self, CMat, CVec};

/// ∫F for an invariant top form, with the standard volume form
/// i^{n²} e^1∧…∧e^n∧ē^1∧…∧ē^n of total volume 1.
pub fn integrate(f: &Form) -> Complex64 {
    let n = f.dim();
    f.top_coefficient() / i_pow((n * n) as i64)
}

/// Q(α,β) = (−1)^{n(n−1)/2} ∫α∧β.
pub fn q_form(a: &Form, b: &Form) -> Complex64 {
    let n = a.dim();
    let s = if (n * (n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    integrate(&a.wedge(b)) * s
}

/// H(α,β) = i^n Q(α, β̄) = i^{n²}∫α∧β̄.
pub fn h_form(a: &Form, b: &Form) -> Complex64 {
    i_pow(a.dim() as i64) * q_form(a, &b.conj())
}

/// Hodge-Riemann data on Δ-harmonic n-forms.
#[derive(Debug, Clone)]
pub struct PairingReport {
    /// Orthonormal Δ-harmonic n-forms.
    pub harmonic: Vec<Form>,
    pub q: CMat,
    pub h: CMat,
    /// Orthonormal coordinates (in `harmonic`) of the ⋆-eigenspaces.
    pub plus_coords: CMat,
    pub minus_coords: CMat,
    pub plus_basis: Vec<Form>,
    pub minus_basis: Vec<Form>,
    pub checks: PairingChecks,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairingChecks {
    pub dimension: usize,
    pub plus_dimension: usize,
    pub minus_dimension: usize,
    pub q_rank: usize,
    pub q_nondegenerate: bool,
    pub h_plus_min_eigenvalue: f64,
    pub h_minus_max_eigenvalue: f64,
    pub h_cross_max: f64,
    pub h_plus_matches_norm: f64,
    pub star_invariance_defect: f64,
}

impl PairingChecks {
    /// Overall verdict: Q non-degenerate, H definite on each part, parts H-orthogonal.
    pub fn passes(&self, tol: f64) -> bool {
        self.q_nondegenerate
            && (self.plus_dimension == 0 || self.h_plus_min_eigenvalue > tol)
            && (self.minus_dimension == 0 || self.h_minus_max_eigenvalue < -tol)
            && self.h_cross_max < tol
            && self.h_plus_matches_norm < tol
    }
}

fn gram(forms: &[Form], f: impl Fn(&Form, &Form) -> Complex64) -> CMat {
    CMat::from_fn(forms.len(), forms.len(), |i, j| f(&forms[i], &forms[j]))
}

pub fn pairings(h: &HermitianModel) -> Result<PairingReport> {
    let n = h.dim();
    let g = h.metric();
    let tol = h.rank_tol();
    let harm = linalg::kernel(&h.degree_matrix(Op::Lap, n)?, tol);
    let harmonic: Vec<Form> = (0..harm.ncols()).map(|c| h.degree_form(&harm.column(c).into_owned(), n)).collect();
    let eps = star_eigenvalue(n);
    let k = harmonic.len();
    // ⋆/ε restricted to the harmonic space, and how far ⋆ leaves it
    let mut s = CMat::zeros(k, k);
    let mut leak = 0.0f64;
    for (j, a) in harmonic.iter().enumerate() {
        let sv = h.degree_coords(&g.star(a), n) / eps;
        let c = harm.adjoint() * &sv;
        leak = leak.max((&sv - &harm * &c).norm());
        s.set_column(j, &c);
    }
    let id = CMat::identity(k, k);
    let half = Complex64::new(0.5, 0.0);
    let plus_coords = linalg::image(&((&id + &s) * half), tol);
    let minus_coords = linalg::image(&((&id - &s) * half), tol);
    let to_forms = |m: &CMat| -> Vec<Form> {
        (0..m.ncols()).map(|c| h.degree_form(&(&harm * m.column(c)), n)).collect::<Vec<_>>()
    };
    let plus_basis = to_forms(&plus_coords);
    let minus_basis = to_forms(&minus_coords);
    let q = gram(&harmonic, q_form);
    let hm = gram(&harmonic, h_form);
    let hp = gram(&plus_basis, h_form);
    let hn = gram(&minus_basis, h_form);
    let cross = CMat::from_fn(plus_basis.len(), minus_basis.len(), |i, j| h_form(&plus_basis[i], &minus_basis[j]));
    // plus basis is orthonormal in the pointwise metric, so H = ∫dV · id there
    let vol = integrate(&g.volume_form()).re;
    let norm_gap = linalg::max_abs(&(&hp - CMat::identity(hp.nrows(), hp.ncols()) * Complex64::new(vol, 0.0)));
    let q_rank = linalg::rank(&q, tol);
    let checks = PairingChecks {
        dimension: k,
        plus_dimension: plus_basis.len(),
        minus_dimension: minus_basis.len(),
        q_rank,
        q_nondegenerate: q_rank == k,
        h_plus_min_eigenvalue: linalg::min_eigenvalue(&hp),
        h_minus_max_eigenvalue: -linalg::min_eigenvalue(&(-&hn)),
        h_cross_max: linalg::max_abs(&cross),
        h_plus_matches_norm: norm_gap,
        star_invariance_defect: leak,
    };
    Ok(PairingReport { harmonic, q, h: hm, plus_coords, minus_coords, plus_basis, minus_basis, checks })
}

/// Is the class of φ a point of the period domain: Q(φ,φ) = 0 and H(φ,φ) > 0.
pub fn period_domain_check(report: &PairingReport, phi: &Form, tol: f64) -> Result<bool> {
    let n = phi.dim();
    if phi.degree().is_some_and(|k| k != n) {
        return Err(Error::WrongDegree { expected: n, found: phi.degree().unwrap_or(0) });
    }
    if !report.plus_basis.is_empty() || !phi.is_zero(0.0) {
        // distance of φ from the plus span, in the coefficient norm of its H-Gram
        let k = report.plus_basis.len();
        let g = gram(&report.plus_basis, h_form);
        let rhs = CVec::from_fn(k, |i, _| h_form(phi, &report.plus_basis[i]));
        let (c, _) = linalg::min_norm_solve(&g, &rhs, 1e-10);
        let mut proj = Form::zero(n);
        for (i, b) in report.plus_basis.iter().enumerate() {
            proj += &b.scale(c[i]);
        }
        let defect = (&proj - phi).max_abs();
        if defect > tol.max(1e-9) * phi.max_abs().max(1.0) * 1e3 {
            return Err(Error::NotInPlusSpace(defect));
        }
    }
    let qv = q_form(phi, phi);
    let hv = h_form(phi, phi);
    Ok(qv.norm() <= tol && hv.re > tol)
}

/// Projectors onto the plus and minus parts of H^n, in class coordinates
/// relative to the harmonic space of the identity metric.
pub fn split_projectors(model: &Model, metric: &HermitianMetric) -> Result<(CMat, CMat)> {
    let n = model.dim();
    let h = HermitianModel::new(model, metric)?;
    let reference = HermitianModel::new(model, &HermitianMetric::identity(n))?;
    let ref_harm = reference.derham_harmonic(n)?;
    let rep = pairings(&h)?;
    let classes = |forms: &[Form]| -> CMat {
        let mut m = CMat::zeros(ref_harm.ncols(), forms.len());
        for (c, f) in forms.iter().enumerate() {
            m.set_column(c, &(ref_harm.adjoint() * reference.degree_coords(f, n)));
        }
        linalg::projector(&linalg::image(&m, h.rank_tol()))
    };
    Ok((classes(&rep.plus_basis), classes(&rep.minus_basis)))
}

/// Largest gap between the plus/minus projectors of two metrics.
pub fn split_metric_dependence(model: &Model, a: &HermitianMetric, b: &HermitianMetric) -> Result<f64> {
    let (pa, ma) = split_projectors(model, a)?;
    let (pb, mb) = split_projectors(model, b)?;
    Ok(linalg::max_abs(&(pa - pb)).max(linalg::max_abs(&(ma - mb))))
}
