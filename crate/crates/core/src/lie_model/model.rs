use num_complex::Complex64;
use serde::Serialize;

use super::operators::{d_blade, generator_differentials, Operators, Which};
use super::spec::ModelSpec;
use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Blade, Form, HermitianMetric};
use crate::linalg::{self, CMat, RANK_TOL};

const VALIDATION_TOL: f64 = 1e-9;

/// Validated invariant-form model: structure equations with ∂, ∂̄, d
/// assembled on all invariant forms at build time.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    de: Vec<Form>,
    ops: Operators,
    unimodular: bool,
    unimodular_defect: f64,
    default_metric: HermitianMetric,
}

/// Result of [`Model::validate`]: every structural verdict with its defect.
#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub integrable: bool,
    pub d_squared_zero: bool,
    pub d_squared_defect: f64,
    pub unimodular: bool,
    pub unimodular_defect: f64,
    pub metric_positive: bool,
    pub all_structure_zero: bool,
}

impl Model {
    /// Build and validate. Integrability and d² = 0 are hard errors;
    /// non-unimodularity is recorded and enforced by adjoint-dependent code.
    pub fn build(spec: &ModelSpec) -> Result<Model> {
        let de = spec.structure_forms();
        let n = spec.complex_dim;
        for (k, f) in de.iter().enumerate() {
            if !f.bidegree_part(Bidegree::new(0, 2)).is_zero(VALIDATION_TOL) {
                return Err(Error::IntegrabilityViolated(k + 1));
            }
        }
        let (defect, generator) = d_squared_defect(&de);
        if defect > VALIDATION_TOL {
            return Err(Error::NotClosedSquare { generator, defect });
        }
        let default_metric = spec.metric()?;
        let unimodular_defect = trace_form(&de).max_abs();
        let ops = Operators::new(&de);
        debug_assert_eq!(ops.dim(), n);
        Ok(Model {
            spec: spec.clone(),
            de,
            ops,
            unimodular: unimodular_defect <= VALIDATION_TOL,
            unimodular_defect,
            default_metric,
        })
    }

    pub fn from_json(text: &str) -> Result<Model> {
        Model::build(&ModelSpec::from_json(text)?)
    }

    /// Abelian model in dimension n (all structure constants zero).
    pub fn torus(n: usize) -> Model {
        Model::build(&ModelSpec::from_forms(&format!("torus{n}"), &vec![Form::zero(n); n])).expect("torus is valid")
    }

    /// Non-failing structural report; build errors are turned into false verdicts.
    pub fn validate(spec: &ModelSpec) -> Validation {
        let de = spec.structure_forms();
        let integrable = de.iter().all(|f| f.bidegree_part(Bidegree::new(0, 2)).is_zero(VALIDATION_TOL));
        let (d2, _) = d_squared_defect(&de);
        let tr = trace_form(&de).max_abs();
        Validation {
            integrable,
            d_squared_zero: d2 <= VALIDATION_TOL,
            d_squared_defect: d2,
            unimodular: tr <= VALIDATION_TOL,
            unimodular_defect: tr,
            metric_positive: spec.metric().is_ok(),
            all_structure_zero: de.iter().all(|f| f.is_zero(0.0)),
        }
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.complex_dim
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn unimodular_defect(&self) -> f64 {
        self.unimodular_defect
    }

    pub fn default_metric(&self) -> &HermitianMetric {
        &self.default_metric
    }

    /// d e^k (k = 1..n).
    pub fn structure(&self) -> &[Form] {
        &self.de
    }

    pub fn operators(&self) -> &Operators {
        &self.ops
    }

    pub fn d(&self, f: &Form) -> Form {
        self.ops.apply(f, Which::D)
    }

    pub fn del(&self, f: &Form) -> Form {
        self.ops.apply(f, Which::Del)
    }

    pub fn delbar(&self, f: &Form) -> Form {
        self.ops.apply(f, Which::Delbar)
    }

    /// True when all structure constants vanish.
    pub fn is_abelian(&self) -> bool {
        self.de.iter().all(|f| f.is_zero(0.0))
    }

    /// Dimension of a cohomology space by the rank oracle (metric-free).
    pub fn cohomology_dimension(&self, theory: Theory, space: Space) -> Result<usize> {
        let ops = &self.ops;
        match (theory, space) {
            (Theory::DeRham, Space::Degree(k)) => {
                let closed = ops.basis(k).len() - linalg::rank(&ops.d(k), RANK_TOL);
                let exact = if k == 0 { 0 } else { linalg::rank(&ops.d(k - 1), RANK_TOL) };
                Ok(closed - exact)
            }
            (Theory::Dolbeault, Space::Bidegree(bd)) => {
                let src = ops.delbar_block(bd);
                let closed = src.ncols() - linalg::rank(&src, RANK_TOL);
                let exact = if bd.q == 0 { 0 } else { linalg::rank(&ops.delbar_block(Bidegree::new(bd.p, bd.q - 1)), RANK_TOL) };
                Ok(closed - exact)
            }
            (Theory::Aeppli, Space::Bidegree(bd)) => {
                let ddbar = ddbar_block(ops, bd);
                let closed = ddbar.ncols() - linalg::rank(&ddbar, RANK_TOL);
                let exact = linalg::rank(&del_plus_delbar_image(ops, bd), RANK_TOL);
                Ok(closed - exact)
            }
            (t, s) => Err(Error::InvalidArgument(format!("{t:?} cohomology is not graded by {s:?}"))),
        }
    }

    /// Subspace test of the ∂∂̄-lemma on every bidegree.
    pub fn ddbar_lemma_check(&self) -> DdbarReport {
        let n = self.dim();
        let ops = &self.ops;
        let mut failures = Vec::new();
        let mut witness = None;
        for k in 0..=2 * n {
            for p in (0..=k.min(n)).rev() {
                let q = k - p;
                if q > n {
                    continue;
                }
                let bd = Bidegree::new(p, q);
                let basis: Vec<Blade> = crate::exterior::bidegree_basis(n, bd);
                if basis.is_empty() {
                    continue;
                }
                // pure-type d-closed: ∂ and ∂̄ both vanish
                let closed_eq = linalg::hcat(&ops.del_block(bd).transpose(), &ops.delbar_block(bd).transpose()).transpose();
                let closed = linalg::kernel(&closed_eq, RANK_TOL);
                let exact = exact_union(ops, bd);
                let target = linalg::intersection(&closed, &exact, RANK_TOL);
                let ddbar_img = if p == 0 || q == 0 {
                    CMat::zeros(basis.len(), 0)
                } else {
                    linalg::image(&ddbar_block(ops, Bidegree::new(p - 1, q - 1)), RANK_TOL)
                };
                if target.ncols() != ddbar_img.ncols() {
                    let extra = linalg::complement_in(&target, &ddbar_img, RANK_TOL);
                    if witness.is_none() && extra.ncols() > 0 {
                        let v = extra.column(0).into_owned();
                        witness = Some(normalise_phase(Form::from_coords(n, &basis, &v)));
                    }
                    failures.push(DdbarFailure { bidegree: bd, excess: target.ncols() - ddbar_img.ncols() });
                }
            }
        }
        DdbarReport { holds: failures.is_empty(), failures, witness }
    }

    /// Kähler, balanced and Gauduchon verdicts for a metric.
    pub fn metric_flags(&self, metric: &HermitianMetric) -> MetricFlags {
        let n = self.dim();
        let w = metric.omega();
        let dw = self.d(&w);
        let wn1 = metric.omega_power(n.saturating_sub(1));
        let dwn1 = self.d(&wn1);
        let ddbar_wn1 = self.del(&self.delbar(&wn1));
        let lambda_dw = metric.lambda(&dw);
        let tol = VALIDATION_TOL * w.max_abs().max(1.0).powi(n as i32);
        MetricFlags {
            kahler: dw.max_abs() <= tol,
            balanced: dwn1.max_abs() <= tol,
            gauduchon: ddbar_wn1.max_abs() <= tol,
            lambda_d_omega_zero: lambda_dw.max_abs() <= tol,
            d_omega_norm: dw.max_abs(),
            d_omega_n1_norm: dwn1.max_abs(),
            ddbar_omega_n1_norm: ddbar_wn1.max_abs(),
        }
    }

    /// d of a single blade (uncached, by the Leibniz rule).
    pub fn d_of_blade(&self, b: Blade) -> Form {
        d_blade(self.dim(), &generator_differentials(&self.de), b)
    }
}

/// Image of ∂ from (p−1,q) plus ∂̄ from (p,q−1), as columns in the (p,q) basis.
pub(crate) fn del_plus_delbar_image(ops: &Operators, bd: Bidegree) -> CMat {
    let a = if bd.p == 0 { CMat::zeros(ops.positions(bd).len(), 0) } else { ops.del_block(Bidegree::new(bd.p - 1, bd.q)) };
    let b = if bd.q == 0 { CMat::zeros(ops.positions(bd).len(), 0) } else { ops.delbar_block(Bidegree::new(bd.p, bd.q - 1)) };
    linalg::hcat(&a, &b)
}

/// ∂∂̄ : Λ^{p,q} → Λ^{p+1,q+1}.
pub(crate) fn ddbar_block(ops: &Operators, bd: Bidegree) -> CMat {
    ops.del_block(Bidegree::new(bd.p, bd.q + 1)) * ops.delbar_block(bd)
}

/// Span of Im ∂ + Im ∂̄ + (Im d ∩ Λ^{p,q}) inside Λ^{p,q}.
fn exact_union(ops: &Operators, bd: Bidegree) -> CMat {
    let k = bd.degree();
    let mut cols = del_plus_delbar_image(ops, bd);
    if k > 0 {
        let d = ops.d(k - 1);
        let rows = ops.positions(bd);
        let others: Vec<usize> = (0..d.nrows()).filter(|r| !rows.contains(r)).collect();
        let off = CMat::from_fn(others.len(), d.ncols(), |r, c| d[(others[r], c)]);
        let pre = linalg::kernel(&off, RANK_TOL);
        let img = &d * pre;
        let pure = CMat::from_fn(rows.len(), img.ncols(), |r, c| img[(rows[r], c)]);
        cols = linalg::hcat(&cols, &pure);
    }
    cols
}

/// Scale so the largest coefficient becomes real and positive, then to unit max.
fn normalise_phase(f: Form) -> Form {
    let (_, z) = f.terms().fold((0.0, Complex64::new(0.0, 0.0)), |(m, best), (_, z)| {
        if z.norm() > m + 1e-12 {
            (z.norm(), z)
        } else {
            (m, best)
        }
    });
    if z.norm() == 0.0 {
        f
    } else {
        f.scale(z.inv())
    }
}

/// Largest defect of d² on the generators, with the offending generator's name.
fn d_squared_defect(de: &[Form]) -> (f64, String) {
    let n = de.len();
    let gens = generator_differentials(de);
    let mut worst = (0.0, String::new());
    for (g, dg) in gens.iter().enumerate() {
        let mut ddg = Form::zero(n);
        for (b, z) in dg.terms() {
            ddg += &d_blade(n, &gens, b).scale(z);
        }
        let m = ddg.max_abs();
        if m > worst.0 {
            let name = if g < n { format!("e{}", g + 1) } else { format!("eb{}", g - n + 1) };
            worst = (m, name);
        }
    }
    worst
}

/// Σ_k Z_k⌟d e^k + Z̄_k⌟d ē^k: the trace form of the Lie algebra, zero iff unimodular.
fn trace_form(de: &[Form]) -> Form {
    let n = de.len();
    let mut t = Form::zero(n);
    for (k, f) in de.iter().enumerate() {
        t += &f.interior(k + 1, false);
        t += &f.conj().interior(k + 1, true);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theory {
    DeRham,
    Dolbeault,
    Aeppli,
}

impl std::str::FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theory> {
        match s.to_ascii_lowercase().as_str() {
            "derham" | "de_rham" | "de-rham" | "drham" => Ok(Theory::DeRham),
            "dolbeault" => Ok(Theory::Dolbeault),
            "aeppli" => Ok(Theory::Aeppli),
            other => Err(Error::InvalidArgument(format!("unknown theory '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    Degree(usize),
    Bidegree(Bidegree),
}

#[derive(Debug, Clone, Serialize)]
pub struct DdbarFailure {
    pub bidegree: Bidegree,
    /// dim({d-closed} ∩ {exact}) − dim Im ∂∂̄ at this bidegree.
    pub excess: usize,
}

#[derive(Debug, Clone)]
pub struct DdbarReport {
    pub holds: bool,
    pub failures: Vec<DdbarFailure>,
    pub witness: Option<Form>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricFlags {
    pub kahler: bool,
    pub balanced: bool,
    pub gauduchon: bool,
    pub lambda_d_omega_zero: bool,
    pub d_omega_norm: f64,
    pub d_omega_n1_norm: f64,
    pub ddbar_omega_n1_norm: f64,
}
