use serde::Serialize;

use super::copolar::{require_balanced, CopolarisedSpace};
use super::pairings::integrate;
use crate::cy_deformation::{cy_invert, VolumeForm};
use crate::error::{Error, Result};
use crate::exterior::{i_pow, primitive_decompose, Form, VectorForm};
use crate::lie_model::HermitianModel;
use crate::linalg::{self, CMat};

/// Per-direction data for the decomposition formulas.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DirectionData {
    pub index: usize,
    /// |θ'⌟u|² for the minimal d-closed representative.
    pub rep_norm_sq: f64,
    /// |(θ'⌟u)_prim|².
    pub prim_norm_sq: f64,
    /// |ζ|² in θ'⌟u = (θ'⌟u)_prim + ω∧ζ.
    pub zeta_norm_sq: f64,
    pub g2: f64,
    pub gamma: f64,
    /// |G2 − (prim + 2ζ)/den|.
    pub g2_formula_defect: f64,
    /// |γ − (prim − 2ζ)/den|.
    pub gamma_formula_defect: f64,
    /// |(G2 − γ) − 4ζ/den|.
    pub gap_formula_defect: f64,
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    /// Indices (into the co-polarised basis) of the directions used.
    pub directions: Vec<usize>,
    /// Directions dropped because no d-closed representative exists.
    pub excluded: Vec<(usize, String)>,
    /// Adjusted representatives θ'.
    pub representatives: Vec<VectorForm>,
    pub gram_g1: CMat,
    pub gram_g2: CMat,
    pub gram_gamma: CMat,
    pub per_direction: Vec<DirectionData>,
    /// i^{n²}∫u∧ū.
    pub denominator: f64,
    /// ∫dV_ω.
    pub volume: f64,
    pub asymmetry: f64,
    pub g1_min_eigenvalue: f64,
    pub g2_min_eigenvalue: f64,
    pub gamma_min_eigenvalue: f64,
    pub g2_minus_gamma_min_eigenvalue: f64,
}

impl MetricReport {
    pub fn g2_minus_gamma_psd(&self, tol: f64) -> bool {
        self.g2_minus_gamma_min_eigenvalue >= -tol
    }

    pub fn max_formula_defect(&self) -> f64 {
        self.per_direction
            .iter()
            .map(|d| d.g2_formula_defect.max(d.gamma_formula_defect).max(d.gap_formula_defect))
            .fold(0.0, f64::max)
    }
}

fn symmetrize(m: CMat, worst: &mut f64) -> CMat {
    let scale = linalg::max_abs(&m).max(1.0);
    let (h, asym) = linalg::hermitian_part(&m);
    *worst = worst.max(asym / scale);
    h
}

/// G1, G2 and γ on the co-polarised basis, with the per-direction decomposition data.
pub fn wp_metrics(h: &HermitianModel, u: &VolumeForm, space: &CopolarisedSpace) -> Result<MetricReport> {
    require_balanced(h)?;
    let g = h.metric();
    let n = h.dim();
    let inn = i_pow((n * n) as i64);
    let uf = u.form();
    let denominator = (inn * integrate(&uf.wedge(&uf.conj()))).re;
    let volume = integrate(&g.volume_form()).re;
    if denominator <= 0.0 {
        return Err(Error::VanishingForm);
    }
    // (−1)^{n+1} i^{n²}∫β̄∧α = −i^{n²}∫α∧β̄
    let sign = -1.0;

    let mut directions = Vec::new();
    let mut excluded = Vec::new();
    let mut thetas = Vec::new();
    let mut reps: Vec<Form> = Vec::new();
    for (i, theta) in space.basis.iter().enumerate() {
        let a = theta.contract(uf);
        match h.minimal_d_closed_rep(&a) {
            Ok(rep) => {
                thetas.push(cy_invert(u, &rep.form)?);
                reps.push(rep.form);
                directions.push(i);
            }
            Err(e) => excluded.push((i, e.to_string())),
        }
    }

    let k = reps.len();
    let mut asymmetry = 0.0f64;
    let g1 = CMat::from_fn(k, k, |a, b| g.vf_inner(&thetas[a], &thetas[b]));
    let g2 = CMat::from_fn(k, k, |a, b| g.inner(&reps[a], &reps[b]) * (volume / denominator));
    let gamma = CMat::from_fn(k, k, |a, b| inn * integrate(&reps[a].wedge(&reps[b].conj())) * (sign / denominator));
    let g1 = symmetrize(g1, &mut asymmetry);
    let g2 = symmetrize(g2, &mut asymmetry);
    let gamma = symmetrize(gamma, &mut asymmetry);
    if asymmetry > 1e-8 {
        return Err(Error::Asymmetric(asymmetry));
    }

    let mut per_direction = Vec::with_capacity(k);
    for (slot, rep) in reps.iter().enumerate() {
        let (prim, zeta) = primitive_decompose(rep, g)?;
        let p = g.norm_sq(&prim);
        let z = g.norm_sq(&zeta);
        let scale = volume / denominator;
        let g2v = g2[(slot, slot)].re;
        let gv = gamma[(slot, slot)].re;
        per_direction.push(DirectionData {
            index: directions[slot],
            rep_norm_sq: g.norm_sq(rep),
            prim_norm_sq: p,
            zeta_norm_sq: z,
            g2: g2v,
            gamma: gv,
            g2_formula_defect: (g2v - (p + 2.0 * z) * scale).abs(),
            gamma_formula_defect: (gv - (p - 2.0 * z) * scale).abs(),
            gap_formula_defect: ((g2v - gv) - 4.0 * z * scale).abs(),
        });
    }
    let diff = &g2 - &gamma;
    let finite = |x: f64| if x.is_finite() { x } else { 0.0 };
    Ok(MetricReport {
        directions,
        excluded,
        representatives: thetas,
        g1_min_eigenvalue: finite(linalg::min_eigenvalue(&g1)),
        g2_min_eigenvalue: finite(linalg::min_eigenvalue(&g2)),
        gamma_min_eigenvalue: finite(linalg::min_eigenvalue(&gamma)),
        g2_minus_gamma_min_eigenvalue: finite(linalg::min_eigenvalue(&diff)),
        gram_g1: g1,
        gram_g2: g2,
        gram_gamma: gamma,
        per_direction,
        denominator,
        volume,
        asymmetry,
    })
}

/// Entrywise distance between two Gram matrices.
pub fn gram_distance(a: &CMat, b: &CMat) -> f64 {
    linalg::max_abs(&(a - b))
}

