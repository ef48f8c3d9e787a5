use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exterior::{
    bidegree_basis, factorial, i_pow, primitive_decompose, primitive_part, star_split_n, vf_basis, Bidegree, Form,
    HermitianMetric, VectorForm,
};
use crate::lie_model::{HermitianModel, Model};
use crate::linalg::{self, CMat};

/// Identity families run by the suite, in report order.
pub const FAMILIES: [&str; 5] = ["star", "lefschetz", "commutation", "contraction", "primitive"];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FamilyResult {
    pub family: String,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_defect: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdentityReport {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub families: Vec<FamilyResult>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.families.iter().all(|f| f.failed == 0)
    }

    pub fn max_defect(&self) -> f64 {
        self.families.iter().map(|f| f.max_defect).fold(0.0, f64::max)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResult> {
        self.families.iter().find(|f| f.family == name)
    }
}

/// Suite switches. `flip_star` negates ⋆ inside the suite to confirm the star family detects sign errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    pub flip_star: bool,
}

struct Tally {
    tol: f64,
    checks: usize,
    failed: usize,
    max: f64,
}

impl Tally {
    fn new(tol: f64) -> Tally {
        Tally { tol, checks: 0, failed: 0, max: 0.0 }
    }

    fn record(&mut self, defect: f64) {
        self.checks += 1;
        let defect = if defect.is_finite() { defect } else { f64::INFINITY };
        if !(defect <= self.tol) {
            self.failed += 1;
        }
        self.max = self.max.max(defect);
    }

    fn finish(self, family: &str) -> FamilyResult {
        FamilyResult {
            family: family.to_string(),
            checks: self.checks,
            passed: self.checks - self.failed,
            failed: self.failed,
            max_defect: self.max,
        }
    }
}

fn cz<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random (p,q)-form with unit largest coefficient.
fn random_form<R: Rng>(n: usize, bd: Bidegree, rng: &mut R) -> Form {
    let mut f = Form::zero(n);
    for b in bidegree_basis(n, bd) {
        f.set(b, cz(rng));
    }
    normalize(f)
}

fn normalize(f: Form) -> Form {
    let m = f.max_abs();
    if m > 0.0 {
        f.scale_re(1.0 / m)
    } else {
        f
    }
}

fn random_vf<R: Rng>(n: usize, q: usize, rng: &mut R) -> VectorForm {
    let mut t = VectorForm::zero(n);
    for (j, a) in vf_basis(n, q) {
        t.set(j, a, cz(rng));
    }
    t
}

fn bidegrees(n: usize) -> Vec<Bidegree> {
    (0..=n).flat_map(|p| (0..=n).map(move |q| Bidegree::new(p, q))).collect()
}

fn diff(a: &Form, b: &Form) -> f64 {
    (a - b).max_abs()
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

struct Ctx<'a> {
    n: usize,
    g: &'a HermitianMetric,
    flip: bool,
}

impl Ctx<'_> {
    fn star(&self, a: &Form) -> Form {
        let s = self.g.star(a);
        if self.flip {
            s.scale_re(-1.0)
        } else {
            s
        }
    }
}

fn star_family<R: Rng>(c: &Ctx, rng: &mut R, t: &mut Tally) {
    let (n, g) = (c.n, c.g);
    let dv = g.volume_form();
    t.record(diff(&c.star(&Form::one(n)), &dv));
    for bd in bidegrees(n) {
        let k = bd.degree();
        let a = random_form(n, bd, rng);
        let b = random_form(n, bd, rng);
        // ⋆⋆ = (−1)^k
        t.record(diff(&c.star(&c.star(&a)), &a.scale_re(sign(k))));
        // ⋆b̄∧a = ⟨a,b⟩ dV
        t.record(diff(&c.star(&b.conj()).wedge(&a), &dv.scale(g.inner(&a, &b))));
        // primitive forms: ⋆v = (−1)^{k(k−1)/2} i^{p−q} ω^{n−k}∧v/(n−k)!
        if k <= n {
            let (v, _) = primitive_part(&a, g).expect("homogeneous");
            let coef = i_pow(bd.p as i64 - bd.q as i64) * sign(k * (k.max(1) - 1) / 2) / factorial(n - k);
            t.record(diff(&c.star(&v), &g.omega_power(n - k).wedge(&v).scale(coef)));
        }
    }
    let u = random_form(n, Bidegree::new(n, 0), rng);
    t.record(diff(&c.star(&u), &u.scale(i_pow((n * n) as i64))));
    if n >= 2 {
        let v = random_form(n, Bidegree::new(n - 2, 0), rng);
        let wv = g.omega().wedge(&v);
        t.record(diff(&c.star(&wv), &wv.scale(i_pow(((n - 2) * (n - 2)) as i64))));
    }
    // ⋆-split of a middle-degree form
    let mut a = Form::zero(n);
    for p in 0..=n {
        a += &random_form(n, Bidegree::new(p, n - p), rng);
    }
    let eps = crate::exterior::star_eigenvalue(n);
    let (plus, minus) = star_split_n(&a, g).expect("middle degree");
    t.record(diff(&(&plus + &minus), &a));
    if !c.flip {
        t.record(diff(&g.star(&plus), &plus.scale(eps)));
        t.record(diff(&g.star(&minus), &minus.scale(-eps)));
    } else {
        t.record(diff(&c.star(&plus), &plus.scale(eps)));
    }
    t.record(g.inner(&plus, &minus).norm());
}

fn lefschetz_family<R: Rng>(c: &Ctx, rng: &mut R, t: &mut Tally) {
    let (n, g) = (c.n, c.g);
    for bd in bidegrees(n) {
        if bd.p == n || bd.q == n {
            continue;
        }
        let a = random_form(n, bd, rng);
        let b = random_form(n, Bidegree::new(bd.p + 1, bd.q + 1), rng);
        t.record((g.inner(&g.lefschetz(&a, 1), &b) - g.inner(&a, &g.lambda(&b))).norm());
    }
    let a = random_form(n, Bidegree::new(n / 2, n - n / 2), rng);
    t.record(diff(&g.lefschetz(&a, 0), &a));
    // ⟨ω^{n−2}α, ω^{n−2}β⟩ = (n−2)! (l−2)!/(n−l)! ⟨ω^{n−l}α, ω^{n−l}β⟩ on Λ^{0,2}
    if n >= 2 {
        let al = random_form(n, Bidegree::new(0, 2), rng);
        let be = random_form(n, Bidegree::new(0, 2), rng);
        let lhs = g.inner(&g.lefschetz(&al, n - 2), &g.lefschetz(&be, n - 2));
        t.record((lhs - g.inner(&al, &be) * factorial(n - 2) * factorial(n - 2)).norm());
        for l in 3..=n {
            let rhs = g.inner(&g.lefschetz(&al, n - l), &g.lefschetz(&be, n - l)) * factorial(n - 2) * factorial(l - 2)
                / factorial(n - l);
            t.record((lhs - rhs).norm());
        }
    }
    // ω∧a = (ω²/2)∧Λa on Λ^{n−1,1}
    if n >= 2 {
        let a = random_form(n, Bidegree::new(n - 1, 1), rng);
        let rhs = g.omega_power(2).scale_re(0.5).wedge(&g.lambda(&a));
        t.record(diff(&g.omega().wedge(&a), &rhs));
    }
}

fn commutation_family<R: Rng>(c: &Ctx, rng: &mut R, t: &mut Tally) {
    let (n, g) = (c.n, c.g);
    // [L^r, Λ] = r(k−n+r−1) L^{r−1} on k-forms
    for bd in bidegrees(n) {
        let k = bd.degree();
        let a = random_form(n, bd, rng);
        let la = g.lambda(&a);
        for r in 1..=n {
            let lhs = &g.lefschetz(&la, r) - &g.lambda(&g.lefschetz(&a, r));
            let coef = r as f64 * (k as f64 - n as f64 + r as f64 - 1.0);
            t.record(diff(&lhs, &g.lefschetz(&a, r - 1).scale_re(coef)));
        }
    }
    // τ = [Λ, ∂ω∧·] is linear and of type (1,0)
    if n >= 2 {
        let dw = random_form(n, Bidegree::new(2, 1), rng);
        let a = random_form(n, Bidegree::new(1, 1), rng);
        let b = random_form(n, Bidegree::new(1, 1), rng);
        let tau = |x: &Form| crate::exterior::torsion_tau(x, g, &dw).expect("valid torsion input");
        t.record(diff(&tau(&(&a + &b)), &(&tau(&a) + &tau(&b))));
        let ta = tau(&a);
        t.record(diff(&ta.bidegree_part(Bidegree::new(2, 1)), &ta));
    }
}

fn contraction_family<R: Rng>(c: &Ctx, rng: &mut R, t: &mut Tally) {
    let (n, g) = (c.n, c.g);
    // θ⌟(a∧b) = Σ ē^J∧((Z_j⌟a)∧b − a∧(Z_j⌟b)) for a 1-form a
    for q in 0..=1.min(n) {
        let theta = random_vf(n, q, rng);
        let a = random_form(n, Bidegree::new(1, 0), rng);
        let b = random_form(n, Bidegree::new(1, 1), rng);
        let lhs = theta.contract(&a.wedge(&b));
        let mut rhs = Form::zero(n);
        for j in 1..=n {
            let part = theta.part(j);
            let leib = &a.interior(j, false).wedge(&b) - &a.wedge(&b.interior(j, false));
            rhs += &part.wedge(&leib);
        }
        t.record(diff(&lhs, &rhs));
    }
    if n >= 2 {
        let theta = random_vf(n, 1, rng);
        let w = g.omega();
        t.record(diff(&theta.contract(&g.omega_power(2)), &w.wedge(&theta.contract(&w)).scale_re(2.0)));
        // ω∧(θ⌟u) = 0 ⟺ θ⌟ω = 0 ⟺ θ⌟ω^{n−1} = 0, as equal kernels of the three linear maps
        let u = Form::monomial(n, &(1..=n).collect::<Vec<_>>(), &[]);
        let basis = vf_basis(n, 1);
        let cols = |f: &dyn Fn(&VectorForm) -> Form| -> CMat {
            let mut m = CMat::zeros(1 << (2 * n), basis.len());
            for (col, &(j, s)) in basis.iter().enumerate() {
                let mut e = VectorForm::zero(n);
                e.set(j, s, linalg::ONE);
                let img = f(&e);
                for (b, z) in img.terms() {
                    m[(b.index(n), col)] = z;
                }
            }
            m
        };
        let wn1 = g.omega_power(n - 1);
        let k1 = linalg::kernel(&cols(&|e| w.wedge(&e.contract(&u))), linalg::RANK_TOL);
        let k2 = linalg::kernel(&cols(&|e| e.contract(&w)), linalg::RANK_TOL);
        let k3 = linalg::kernel(&cols(&|e| e.contract(&wn1)), linalg::RANK_TOL);
        t.record(linalg::subspace_distance(&k1, &k2, linalg::RANK_TOL).max(linalg::subspace_distance(&k2, &k3, linalg::RANK_TOL)));
    }
}

fn primitive_family<R: Rng>(c: &Ctx, rng: &mut R, t: &mut Tally) {
    let (n, g) = (c.n, c.g);
    if n >= 2 {
        let a = random_form(n, Bidegree::new(n - 1, 1), rng);
        let (prim, zeta) = primitive_decompose(&a, g).expect("supported bidegree");
        t.record(g.lambda(&prim).max_abs());
        t.record(diff(&(&prim + &g.omega().wedge(&zeta)), &a));
        t.record((g.norm_sq(&a) - g.norm_sq(&prim) - 2.0 * g.norm_sq(&zeta)).abs());
        t.record(g.inner(&prim, &g.omega().wedge(&zeta)).norm());
        // primitive (n−1,1)-forms are in the minus space
        let (plus, _) = star_split_n(&prim, g).expect("middle degree");
        t.record(plus.max_abs());
    }
    if n >= 2 {
        let a = random_form(n, Bidegree::new(1, 2), rng);
        let (a0, beta) = primitive_decompose(&a, g).expect("supported bidegree");
        t.record(g.lambda(&a0).max_abs());
        t.record(diff(&(&a0 + &g.omega().wedge(&beta)), &a));
    }
    // i^{n²} u∧ū = |u|²_ω ω^n
    let u = random_form(n, Bidegree::new(n, 0), rng);
    let lhs = u.wedge(&u.conj()).scale(i_pow((n * n) as i64));
    t.record(diff(&lhs, &g.omega_power(n).scale_re(g.canonical_norm_sq(&u))));
    let (plus, minus) = star_split_n(&u, g).expect("middle degree");
    t.record(diff(&plus, &u).max(minus.max_abs()));
}

/// Runs every family for each dimension with `trials` random metrics and inputs.
pub fn run_identity_suite(dims: &[usize], trials: usize, seed: u64, tolerance: f64, opts: SuiteOptions) -> IdentityReport {
    type Family = fn(&Ctx, &mut ChaCha8Rng, &mut Tally);
    let runners: [Family; 5] = [star_family, lefschetz_family, commutation_family, contraction_family, primitive_family];
    let mut families = Vec::new();
    for (idx, (name, run)) in FAMILIES.iter().zip(runners).enumerate() {
        let mut tally = Tally::new(tolerance);
        for &n in dims {
            // one stream per (family, dimension), derived from the run seed
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((idx as u64) << 8 | n as u64);
            for _ in 0..trials {
                let g = HermitianMetric::random(n, &mut rng);
                let ctx = Ctx { n, g: &g, flip: opts.flip_star };
                run(&ctx, &mut rng, &mut tally);
            }
        }
        families.push(tally.finish(name));
    }
    IdentityReport { dims: dims.to_vec(), trials, seed, tolerance, families }
}

/// Model-level commutation defects ([Λ,∂̄] and [Λ,∂] relations) for `trials` random metrics.
pub fn model_commutation(model: &Model, trials: usize, seed: u64) -> Option<f64> {
    if !model.is_unimodular() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0xC0);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let g = if t == 0 { model.default_metric().clone() } else { HermitianMetric::random(model.dim(), &mut rng) };
        let h = HermitianModel::new(model, &g).ok()?;
        let (a, b) = h.commutation_defects();
        worst = worst.max(a).max(b);
    }
    Some(worst)
}
