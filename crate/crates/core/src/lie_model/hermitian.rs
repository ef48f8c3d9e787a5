use num_complex::Complex64;

use super::model::{Model, Space, Theory};
use super::operators::Operators;
use crate::error::{Error, Result};
use crate::exterior::{bidegree_basis, Bidegree, Form, HermitianMetric};
use crate::linalg::{self, CMat, CVec, RANK_TOL};

/// A model together with an invariant Hermitian metric. All operator
/// matrices live in the unitary coframe, where adjoints are conjugate transposes.
#[derive(Debug, Clone)]
pub struct HermitianModel {
    model: Model,
    metric: HermitianMetric,
    ortho: Operators,
    rank_tol: f64,
}

/// Operators available as matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    D,
    Del,
    Delbar,
    DStar,
    DelStar,
    DelbarStar,
    /// Δ' = ∂∂* + ∂*∂
    LapDel,
    /// Δ'' = ∂̄∂̄* + ∂̄*∂̄
    LapDelbar,
    /// Δ = dd* + d*d
    Lap,
    /// Aeppli Laplacian
    LapAeppli,
}

/// Cohomology space with dimension from both oracles and a harmonic basis.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    pub theory: Theory,
    pub space: Space,
    pub dimension: usize,
    /// dim ker − rank of the exact image.
    pub rank_dimension: usize,
    /// dim ker of the theory's Laplacian.
    pub harmonic_dimension: usize,
    /// Orthonormal harmonic representatives.
    pub basis: Vec<Form>,
}

impl HermitianModel {
    pub fn new(model: &Model, metric: &HermitianMetric) -> Result<HermitianModel> {
        if metric.dim() != model.dim() {
            return Err(Error::DimMismatch(metric.dim(), model.dim()));
        }
        if !model.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let a = metric.frame();
        let n = model.dim();
        let de_f: Vec<Form> = (0..n)
            .map(|al| {
                let mut f = Form::zero(n);
                for (be, de) in model.structure().iter().enumerate() {
                    f += &de.scale(a[(al, be)]);
                }
                metric.to_ortho(&f)
            })
            .collect();
        Ok(HermitianModel { model: model.clone(), metric: metric.clone(), ortho: Operators::new(&de_f), rank_tol: RANK_TOL })
    }

    /// Model with its default metric (identity unless stated in the spec).
    pub fn with_default_metric(model: &Model) -> Result<HermitianModel> {
        HermitianModel::new(model, model.default_metric())
    }

    pub fn with_rank_tol(mut self, tol: f64) -> HermitianModel {
        self.rank_tol = tol;
        self
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn metric(&self) -> &HermitianMetric {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn ortho_ops(&self) -> &Operators {
        &self.ortho
    }

    // ---- coordinates ------------------------------------------------------

    /// Unitary-frame coordinates of the (p,q) part of a form.
    pub fn coords(&self, f: &Form, bd: Bidegree) -> CVec {
        self.metric.to_ortho(f).coords(&bidegree_basis(self.dim(), bd))
    }

    pub fn form(&self, v: &CVec, bd: Bidegree) -> Form {
        self.metric.from_ortho(&Form::from_coords(self.dim(), &bidegree_basis(self.dim(), bd), v))
    }

    pub fn degree_coords(&self, f: &Form, k: usize) -> CVec {
        self.ortho.coords(&self.metric.to_ortho(f), k)
    }

    pub fn degree_form(&self, v: &CVec, k: usize) -> Form {
        self.metric.from_ortho(&self.ortho.form(v, k))
    }

    /// Columns of a coordinate matrix as forms.
    pub fn forms_of(&self, m: &CMat, bd: Bidegree) -> Vec<Form> {
        (0..m.ncols()).map(|c| self.form(&m.column(c).into_owned(), bd)).collect()
    }

    // ---- operator matrices ------------------------------------------------

    fn raw(&self, op: Op, src: Bidegree) -> CMat {
        let o = &self.ortho;
        let n = self.dim();
        let below = |p: usize, q: usize| -> Option<Bidegree> { Some(Bidegree::new(p.checked_sub(1)?, q)) };
        match op {
            Op::Del => o.del_block(src),
            Op::Delbar => o.delbar_block(src),
            Op::DelStar => match below(src.p, src.q) {
                Some(b) => o.del_block(b).adjoint(),
                None => CMat::zeros(0, o.positions(src).len()),
            },
            Op::DelbarStar => match src.q.checked_sub(1) {
                Some(q) => o.delbar_block(Bidegree::new(src.p, q)).adjoint(),
                None => CMat::zeros(0, o.positions(src).len()),
            },
            _ => unreachable!("bidegree operator {op:?} n={n}"),
        }
    }

    /// Matrix of a bidegree-preserving or bidegree-shifting operator on Λ^{p,q}.
    /// For d, d* and Δ use [`HermitianModel::degree_matrix`].
    pub fn op_matrix(&self, op: Op, src: Bidegree) -> Result<CMat> {
        let n = self.dim();
        if !src.valid_for(n) {
            return Err(Error::UnsupportedBidegree(src.p, src.q));
        }
        let sq = |a: CMat| -> CMat { a.adjoint() * a };
        let dim = bidegree_basis(n, src).len();
        Ok(match op {
            Op::Del | Op::Delbar | Op::DelStar | Op::DelbarStar => self.raw(op, src),
            Op::LapDel => sq(self.raw(Op::Del, src)) + sq(self.raw(Op::DelStar, src)),
            Op::LapDelbar => sq(self.raw(Op::Delbar, src)) + sq(self.raw(Op::DelbarStar, src)),
            Op::LapAeppli => {
                let del_s = self.raw(Op::DelStar, src);
                let delbar_s = self.raw(Op::DelbarStar, src);
                let ddbar = self.ddbar(src);
                // (∂∂̄)* restricted to (p,q): adjoint of ∂∂̄ from (p−1,q−1)
                let ddbar_s = match (src.p.checked_sub(1), src.q.checked_sub(1)) {
                    (Some(p), Some(q)) => self.ddbar(Bidegree::new(p, q)).adjoint(),
                    _ => CMat::zeros(0, dim),
                };
                // ∂∂̄* from (p−1,q+1) into (p,q); its adjoint on (p,q)
                let from_left = match src.p.checked_sub(1) {
                    Some(p) if src.q < n => {
                        let s = Bidegree::new(p, src.q + 1);
                        (self.ortho.del_block(Bidegree::new(p, src.q)) * self.raw(Op::DelbarStar, s)).adjoint()
                    }
                    _ => CMat::zeros(0, dim),
                };
                // ∂∂̄* applied to (p,q): lands in (p+1,q−1)
                let to_right = match src.q.checked_sub(1) {
                    Some(q) if src.p < n => self.ortho.del_block(Bidegree::new(src.p, q)) * self.raw(Op::DelbarStar, src),
                    _ => CMat::zeros(0, dim),
                };
                sq(del_s) + sq(delbar_s) + sq(ddbar) + sq(ddbar_s) + sq(from_left) + sq(to_right)
            }
            Op::D | Op::DStar | Op::Lap => {
                return Err(Error::InvalidArgument(format!("{op:?} does not preserve bidegree; use degree_matrix")))
            }
        })
    }

    /// ∂∂̄ : Λ^{p,q} → Λ^{p+1,q+1} in the unitary frame.
    pub fn ddbar(&self, src: Bidegree) -> CMat {
        self.ortho.del_block(Bidegree::new(src.p, src.q + 1)) * self.ortho.delbar_block(src)
    }

    /// Matrices on total degree k: d, ∂, ∂̄ map k → k+1; adjoints map k → k−1;
    /// Laplacians are square.
    pub fn degree_matrix(&self, op: Op, k: usize) -> Result<CMat> {
        let n = self.dim();
        if k > 2 * n {
            return Err(Error::WrongDegree { expected: 2 * n, found: k });
        }
        let o = &self.ortho;
        let dim = o.basis(k).len();
        let down = |m: &dyn Fn(usize) -> CMat| -> CMat {
            if k == 0 {
                CMat::zeros(0, dim)
            } else {
                m(k - 1).adjoint()
            }
        };
        let sq = |a: CMat| -> CMat { a.adjoint() * a };
        Ok(match op {
            Op::D => o.d(k),
            Op::Del => o.del(k),
            Op::Delbar => o.delbar(k),
            Op::DStar => down(&|j| o.d(j)),
            Op::DelStar => down(&|j| o.del(j)),
            Op::DelbarStar => down(&|j| o.delbar(j)),
            Op::Lap => sq(o.d(k)) + sq(down(&|j| o.d(j))),
            Op::LapDel => sq(o.del(k)) + sq(down(&|j| o.del(j))),
            Op::LapDelbar => sq(o.delbar(k)) + sq(down(&|j| o.delbar(j))),
            Op::LapAeppli => {
                return Err(Error::InvalidArgument("the Aeppli Laplacian is graded by bidegree".into()))
            }
        })
    }

    // ---- cohomology -------------------------------------------------------

    pub fn cohomology(&self, theory: Theory, space: Space) -> Result<CohomologySpace> {
        let rank_dimension = self.model.cohomology_dimension(theory, space)?;
        let (harm, to_forms): (CMat, Box<dyn Fn(&CMat) -> Vec<Form>>) = match (theory, space) {
            (Theory::DeRham, Space::Degree(k)) => {
                let lap = self.degree_matrix(Op::Lap, k)?;
                (linalg::kernel(&lap, self.rank_tol), Box::new(move |m: &CMat| {
                    (0..m.ncols()).map(|c| self.degree_form(&m.column(c).into_owned(), k)).collect()
                }))
            }
            (Theory::Dolbeault, Space::Bidegree(bd)) => {
                let lap = self.op_matrix(Op::LapDelbar, bd)?;
                (linalg::kernel(&lap, self.rank_tol), Box::new(move |m: &CMat| self.forms_of(m, bd)))
            }
            (Theory::Aeppli, Space::Bidegree(bd)) => {
                let lap = self.op_matrix(Op::LapAeppli, bd)?;
                (linalg::kernel(&lap, self.rank_tol), Box::new(move |m: &CMat| self.forms_of(m, bd)))
            }
            (t, s) => return Err(Error::InvalidArgument(format!("{t:?} cohomology is not graded by {s:?}"))),
        };
        let harmonic_dimension = harm.ncols();
        Ok(CohomologySpace {
            theory,
            space,
            dimension: rank_dimension,
            rank_dimension,
            harmonic_dimension,
            basis: to_forms(&harm),
        })
    }

    /// Orthonormal harmonic basis (unitary-frame coordinates) of H^{p,q}_{∂̄}.
    pub fn dolbeault_harmonic(&self, bd: Bidegree) -> Result<CMat> {
        Ok(linalg::kernel(&self.op_matrix(Op::LapDelbar, bd)?, self.rank_tol))
    }

    /// Orthonormal Δ-harmonic basis in degree k.
    pub fn derham_harmonic(&self, k: usize) -> Result<CMat> {
        Ok(linalg::kernel(&self.degree_matrix(Op::Lap, k)?, self.rank_tol))
    }

    /// Orthogonal projection of a closed form onto the harmonic space of its theory.
    pub fn harmonic_representative(&self, f: &Form, theory: Theory) -> Result<Form> {
        let tol = 1e-9 * f.max_abs().max(1.0);
        match theory {
            Theory::DeRham => {
                let k = f.degree().unwrap_or(0);
                let defect = self.model.d(f).max_abs();
                if defect > tol {
                    return Err(Error::NotInKernel(defect));
                }
                let h = self.derham_harmonic(k)?;
                let v = self.degree_coords(f, k);
                Ok(self.degree_form(&(linalg::projector(&h) * v), k))
            }
            Theory::Dolbeault | Theory::Aeppli => {
                let Some(bd) = f.bidegree() else {
                    return Ok(Form::zero(self.dim()));
                };
                let defect = match theory {
                    Theory::Dolbeault => self.model.delbar(f).max_abs(),
                    _ => self.model.del(&self.model.delbar(f)).max_abs(),
                };
                if defect > tol {
                    return Err(Error::NotInKernel(defect));
                }
                let op = if theory == Theory::Dolbeault { Op::LapDelbar } else { Op::LapAeppli };
                let h = linalg::kernel(&self.op_matrix(op, bd)?, self.rank_tol);
                let v = self.coords(f, bd);
                Ok(self.form(&(linalg::projector(&h) * v), bd))
            }
        }
    }

    /// ω-minimal d-closed representative of the Dolbeault class of a ∂̄-closed form:
    /// α_harm + ∂̄v with v the minimal-norm solution of ∂∂̄v = −∂α_harm.
    pub fn minimal_d_closed_rep(&self, f: &Form) -> Result<MinimalRep> {
        let n = self.dim();
        let Some(bd) = f.bidegree() else {
            return Ok(MinimalRep { form: Form::zero(n), harmonic: Form::zero(n), potential: Form::zero(n), residual: 0.0, projection_defect: 0.0 });
        };
        let harmonic = self.harmonic_representative(f, Theory::Dolbeault)?;
        let target = Bidegree::new(bd.p + 1, bd.q);
        let rhs = -self.coords(&self.model.del(&harmonic), target);
        let Some(q) = bd.q.checked_sub(1) else {
            let r = rhs.norm();
            if r > 1e-9 * harmonic.max_abs().max(1.0) {
                return Err(Error::NoDClosedRepresentative(r));
            }
            return Ok(MinimalRep { form: harmonic.clone(), harmonic, potential: Form::zero(n), residual: r, projection_defect: 0.0 });
        };
        let p = bd.p;
        let src = Bidegree::new(p, q);
        let a = self.ddbar(src);
        let (v, residual) = linalg::min_norm_solve(&a, &rhs, self.rank_tol);
        if residual > 1e-9 * rhs.norm().max(1.0) {
            return Err(Error::NoDClosedRepresentative(residual));
        }
        let row_space = linalg::image(&a.adjoint(), self.rank_tol);
        let projection_defect = (&v - linalg::projector(&row_space) * &v).norm();
        let potential = self.form(&v, src);
        let form = &harmonic + &self.model.delbar(&potential);
        Ok(MinimalRep { form, harmonic, potential, residual, projection_defect })
    }

    /// Dimensions in the Aeppli split ker ∂∂̄ = ker Δ_A ⊕ (Im ∂ + Im ∂̄), with
    /// the largest pairwise inner product between the pieces.
    pub fn aeppli_split(&self, bd: Bidegree) -> Result<AeppliSplit> {
        let ker_ddbar = linalg::kernel(&self.ddbar(bd), self.rank_tol);
        let harm = linalg::kernel(&self.op_matrix(Op::LapAeppli, bd)?, self.rank_tol);
        let exact = linalg::image(&super::model::del_plus_delbar_image(&self.ortho, bd), self.rank_tol);
        let overlap = linalg::max_abs(&(harm.adjoint() * &exact));
        let outside = linalg::max_abs(&(&harm - linalg::projector(&ker_ddbar) * &harm))
            .max(linalg::max_abs(&(&exact - linalg::projector(&ker_ddbar) * &exact)));
        Ok(AeppliSplit {
            ker_ddbar: ker_ddbar.ncols(),
            harmonic: harm.ncols(),
            exact: exact.ncols(),
            orthogonality_defect: overlap.max(outside),
        })
    }

    /// Matrix of a linear map between total degrees in the unitary frame.
    fn frame_matrix(&self, src: usize, dst: usize, f: impl Fn(&Form) -> Form) -> CMat {
        let o = &self.ortho;
        let cols = o.basis(src).len();
        let mut m = CMat::zeros(o.basis(dst).len(), cols);
        for c in 0..cols {
            let mut e = CVec::zeros(cols);
            e[c] = Complex64::new(1.0, 0.0);
            let img = o.coords(&f(&o.form(&e, src)), dst);
            m.set_column(c, &img);
        }
        m
    }

    /// Largest entry of [Λ,∂] − i(∂̄* + τ̄*) and [Λ,∂̄] + i(∂* + τ*) over all degrees,
    /// with τ = [Λ, ∂ω∧·].
    pub fn commutation_defects(&self) -> (f64, f64) {
        let n = self.dim();
        let unit = HermitianMetric::identity(n);
        let omega = unit.omega();
        let del_w = self.ortho.apply(&omega, super::operators::Which::Del);
        let delbar_w = self.ortho.apply(&omega, super::operators::Which::Delbar);
        let i = Complex64::new(0.0, 1.0);
        let (mut first, mut second) = (0.0f64, 0.0f64);
        for k in 1..=2 * n {
            let lam = |a: &Form| unit.lambda(a);
            let tau = |a: &Form| &unit.lambda(&del_w.wedge(a)) - &del_w.wedge(&unit.lambda(a));
            let tau_bar = |a: &Form| &unit.lambda(&delbar_w.wedge(a)) - &delbar_w.wedge(&unit.lambda(a));
            let del = |a: &Form| self.ortho.apply(a, super::operators::Which::Del);
            let delbar = |a: &Form| self.ortho.apply(a, super::operators::Which::Delbar);
            let lhs1 = self.frame_matrix(k, k - 1, |a| &lam(&del(a)) - &del(&lam(a)));
            let lhs2 = self.frame_matrix(k, k - 1, |a| &lam(&delbar(a)) - &delbar(&lam(a)));
            let tau_s = self.frame_matrix(k - 1, k, tau).adjoint();
            let tau_bar_s = self.frame_matrix(k - 1, k, tau_bar).adjoint();
            let del_s = self.ortho.del(k - 1).adjoint();
            let delbar_s = self.ortho.delbar(k - 1).adjoint();
            first = first.max(linalg::max_abs(&(lhs1 - (delbar_s + tau_bar_s) * i)));
            second = second.max(linalg::max_abs(&(lhs2 + (del_s + tau_s) * i)));
        }
        (first, second)
    }

    /// L² inner product of invariant forms (Vol = 1).
    pub fn inner(&self, a: &Form, b: &Form) -> Complex64 {
        self.metric.inner(a, b)
    }

    pub fn norm(&self, a: &Form) -> f64 {
        self.metric.norm(a)
    }
}

#[derive(Debug, Clone)]
pub struct MinimalRep {
    pub form: Form,
    pub harmonic: Form,
    /// v_min with ∂∂̄v_min = −∂α_harm.
    pub potential: Form,
    pub residual: f64,
    /// Distance of v_min from Im(∂∂̄)*.
    pub projection_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AeppliSplit {
    pub ker_ddbar: usize,
    pub harmonic: usize,
    pub exact: usize,
    pub orthogonality_defect: f64,
}
