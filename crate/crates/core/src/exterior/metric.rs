use num_complex::Complex64;
use rand::Rng;

use super::blade::{merge_sign, subsets_of_size, Blade};
use super::form::Form;
use super::vector_form::VectorForm;
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, CMat, I, ONE, ZERO};

/// Hermitian metric ω = i Σ h_{αβ} e^α∧ē^β.
///
/// Internally the metric is reduced to a unitary coframe f = A e with
/// A = Lᵀ for the Cholesky factor h = L L*; in that coframe ω = i Σ f^α∧f̄^α
/// and the canonical blades are orthonormal.
#[derive(Debug, Clone)]
pub struct HermitianMetric {
    n: usize,
    h: CMat,
    a: CMat,
    a_minors: Vec<Complex64>,
    b_minors: Vec<Complex64>,
    by_size: Vec<Vec<u32>>,
}

const METRIC_TOL: f64 = 1e-10;

impl HermitianMetric {
    pub fn new(h: CMat) -> Result<HermitianMetric> {
        let n = h.nrows();
        if h.ncols() != n {
            return Err(Error::InvalidMetric(format!("matrix is {}x{}", n, h.ncols())));
        }
        if n == 0 || n > super::MAX_DIM {
            return Err(Error::DimOutOfRange(n));
        }
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMetric("non-finite entry".into()));
        }
        let asym = crate::linalg::max_abs(&(&h - h.adjoint()));
        let scale = crate::linalg::max_abs(&h).max(1.0);
        if asym > METRIC_TOL * scale {
            return Err(Error::InvalidMetric(format!("not Hermitian (asymmetry {asym:.3e})")));
        }
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let lmin = min_eigenvalue(&h);
        if lmin <= METRIC_TOL * scale {
            return Err(Error::InvalidMetric(format!("not positive definite (min eigenvalue {lmin:.3e})")));
        }
        let l = h.clone().cholesky().ok_or_else(|| Error::InvalidMetric("Cholesky failed".into()))?.l();
        let a = l.transpose();
        let b = a.clone().try_inverse().ok_or_else(|| Error::InvalidMetric("singular frame".into()))?;
        let by_size: Vec<Vec<u32>> = (0..=n).map(|k| subsets_of_size(n, k)).collect();
        let a_minors = minors(&a, &by_size);
        let b_minors = minors(&b, &by_size);
        Ok(HermitianMetric { n, h, a, a_minors, b_minors, by_size })
    }

    pub fn identity(n: usize) -> HermitianMetric {
        HermitianMetric::new(CMat::identity(n, n)).expect("identity metric is valid")
    }

    /// Random metric h = M M* + I/2 with Gaussian-like entries of M in [-1,1].
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMetric {
        let m = CMat::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let h = &m * m.adjoint() + CMat::identity(n, n) * Complex64::new(0.5, 0.0);
        HermitianMetric::new(h).expect("random metric is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.h
    }

    /// The coframe change f = A e.
    pub fn frame(&self) -> &CMat {
        &self.a
    }

    fn minor(table: &[Complex64], n: usize, rows: u32, cols: u32) -> Complex64 {
        table[((rows as usize) << n) | cols as usize]
    }

    /// The fundamental form ω = i Σ h_{αβ} e^α∧ē^β.
    pub fn omega(&self) -> Form {
        let n = self.n;
        let mut w = Form::zero(n);
        for al in 0..n {
            for be in 0..n {
                w.add_to(Blade::new(1 << al, 1 << be), I * self.h[(al, be)]);
            }
        }
        w
    }

    /// ω^k (with ω^0 = 1).
    pub fn omega_power(&self, k: usize) -> Form {
        let w = self.omega();
        (0..k).fold(Form::one(self.n), |acc, _| acc.wedge(&w))
    }

    /// dV = ω^n / n!.
    pub fn volume_form(&self) -> Form {
        self.from_ortho(&top_ortho_volume(self.n))
    }

    /// Coefficients of `a` in the unitary coframe.
    pub fn to_ortho(&self, a: &Form) -> Form {
        self.transform(a, &self.b_minors)
    }

    /// Inverse of [`HermitianMetric::to_ortho`].
    pub fn from_ortho(&self, a: &Form) -> Form {
        self.transform(a, &self.a_minors)
    }

    fn transform(&self, a: &Form, table: &[Complex64]) -> Form {
        let n = self.n;
        let mut out = Form::zero(n);
        for (blade, z) in a.terms() {
            let hs = &self.by_size[blade.holo.count_ones() as usize];
            let ks = &self.by_size[blade.anti.count_ones() as usize];
            for &h2 in hs {
                let mh = Self::minor(table, n, blade.holo, h2);
                if mh == ZERO {
                    continue;
                }
                let zh = z * mh;
                for &k2 in ks {
                    let mk = Self::minor(table, n, blade.anti, k2);
                    if mk != ZERO {
                        out.add_to(Blade::new(h2, k2), zh * mk.conj());
                    }
                }
            }
        }
        out
    }

    /// Vector-form coefficients in the unitary frame (F_α dual to f^α).
    pub fn vf_to_ortho(&self, v: &VectorForm) -> VectorForm {
        let n = self.n;
        let mut out = VectorForm::zero(n);
        for (j, anti, z) in v.terms() {
            for &k2 in &self.by_size[anti.count_ones() as usize] {
                let mk = Self::minor(&self.b_minors, n, anti, k2);
                if mk == ZERO {
                    continue;
                }
                for al in 0..n {
                    out.add_to(al + 1, k2, z * self.a[(al, j - 1)] * mk.conj());
                }
            }
        }
        out
    }

    pub fn vf_from_ortho(&self, v: &VectorForm) -> VectorForm {
        let n = self.n;
        let binv = self.a.clone().try_inverse().expect("frame is invertible");
        let mut out = VectorForm::zero(n);
        for (al, anti, z) in v.terms() {
            for &k in &self.by_size[anti.count_ones() as usize] {
                let mk = Self::minor(&self.a_minors, n, anti, k);
                if mk == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.add_to(j + 1, k, z * binv[(j, al - 1)] * mk.conj());
                }
            }
        }
        out
    }

    /// Pointwise inner product ⟨a,b⟩, linear in `a`, antilinear in `b`.
    pub fn inner(&self, a: &Form, b: &Form) -> Complex64 {
        let fa = self.to_ortho(a);
        let fb = self.to_ortho(b);
        fa.raw().iter().zip(fb.raw()).map(|(x, y)| x * y.conj()).sum()
    }

    pub fn norm_sq(&self, a: &Form) -> f64 {
        let fa = self.to_ortho(a);
        fa.raw().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self, a: &Form) -> f64 {
        self.norm_sq(a).sqrt()
    }

    pub fn vf_inner(&self, a: &VectorForm, b: &VectorForm) -> Complex64 {
        let fa = self.vf_to_ortho(a);
        let fb = self.vf_to_ortho(b);
        let mut s = ZERO;
        for (j, k, z) in fa.terms() {
            s += z * fb.get(j, k).conj();
        }
        s
    }

    pub fn vf_norm_sq(&self, a: &VectorForm) -> f64 {
        self.vf_inner(a, a).re
    }

    /// L^r a = ω^r ∧ a.
    pub fn lefschetz(&self, a: &Form, r: usize) -> Form {
        self.omega_power(r).wedge(a)
    }

    /// Λ, the pointwise adjoint of L.
    pub fn lambda(&self, a: &Form) -> Form {
        self.from_ortho(&lambda_ortho(&self.to_ortho(a)))
    }

    /// Hodge star on k-forms, normalised by ⋆b̄∧a = ⟨a,b⟩ dV (equivalently
    /// a∧⋆b̄ = (−1)^k ⟨a,b⟩ dV). On (n,0)-forms ⋆u = i^{n²}u.
    pub fn star(&self, a: &Form) -> Form {
        self.from_ortho(&star_ortho(&self.to_ortho(a)))
    }

    /// Pointwise norm of an (n,0)-form viewed as a section of the canonical
    /// bundle: |u|²_K = ⟨u,u⟩/n!, the normalisation in which i^{n²} u∧ū = |u|²_K ω^n.
    pub fn canonical_norm_sq(&self, u: &Form) -> f64 {
        self.norm_sq(u) / factorial(self.n)
    }
}

/// Table of minors det(M[S,T]) for |S| = |T|, indexed by (S << n) | T.
fn minors(m: &CMat, by_size: &[Vec<u32>]) -> Vec<Complex64> {
    let n = m.nrows();
    let mut t = vec![ZERO; 1 << (2 * n)];
    t[0] = ONE;
    for k in 1..=n {
        for &s in &by_size[k] {
            let r0 = s.trailing_zeros() as usize;
            let srest = s & (s - 1);
            for &c in &by_size[k] {
                let mut acc = ZERO;
                for (pos, col) in super::blade::bits(c).into_iter().enumerate() {
                    let sub = t[((srest as usize) << n) | (c & !(1 << col)) as usize];
                    let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                    acc += m[(r0, col)] * sub * sign;
                }
                t[((s as usize) << n) | c as usize] = acc;
            }
        }
    }
    t
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Powers of i.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// dV = i^{n²} f^1∧…∧f^n∧f̄^1∧…∧f̄^n in the unitary coframe.
fn top_ortho_volume(n: usize) -> Form {
    let full = (1u32 << n) - 1;
    Form::from_blade(n, Blade::new(full, full), i_pow((n * n) as i64))
}

/// Λ in the unitary coframe: Λ f^T = Σ_α −i · s_α(T) f^{T∖{α,ᾱ}}.
pub(crate) fn lambda_ortho(a: &Form) -> Form {
    let n = a.dim();
    let mut out = Form::zero(n);
    for (i, z) in a.raw().iter().enumerate() {
        if *z == ZERO {
            continue;
        }
        for al in 0..n {
            let pair = (1usize << al) | (1usize << (n + al));
            if i & pair == pair {
                let rest = i & !pair;
                out.raw_mut()[rest] += -I * z * merge_sign(pair, rest);
            }
        }
    }
    out
}

/// ⋆ in the unitary coframe: ⋆f^C = (−1)^{pq+p+q} i^{n²} ε(S) f^{∁S}, S the type swap of C.
pub(crate) fn star_ortho(a: &Form) -> Form {
    let n = a.dim();
    let kappa = i_pow((n * n) as i64);
    let full = (1usize << (2 * n)) - 1;
    let mut out = Form::zero(n);
    for (b, z) in a.terms() {
        let (p, q) = (b.holo.count_ones(), b.anti.count_ones());
        let pq = p * q + p + q;
        let s = Blade::new(b.anti, b.holo).index(n);
        let comp = full & !s;
        let sign = if pq % 2 == 0 { 1.0 } else { -1.0 };
        out.raw_mut()[comp] += z * kappa * (sign * merge_sign(s, comp));
    }
    out
}
