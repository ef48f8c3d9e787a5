use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::blade::{merge_sign, Bidegree, Blade};
use crate::linalg::{CVec, ZERO};

/// Complex exterior form on an n-dimensional Hermitian space, stored densely
/// over the 4^n canonical blades of the coframe (e^1..e^n, ē^1..ē^n).
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    n: usize,
    c: Vec<Complex64>,
}

impl Form {
    pub fn zero(n: usize) -> Form {
        assert!(n <= super::MAX_DIM, "dimension {n} exceeds MAX_DIM");
        Form { n, c: vec![ZERO; 1 << (2 * n)] }
    }

    /// The constant function 1.
    pub fn one(n: usize) -> Form {
        Form::scalar(n, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, z: Complex64) -> Form {
        let mut f = Form::zero(n);
        f.c[0] = z;
        f
    }

    pub fn from_blade(n: usize, b: Blade, z: Complex64) -> Form {
        let mut f = Form::zero(n);
        f.c[b.index(n)] = z;
        f
    }

    /// Wedge of generators in the given order: e^{holo[0]}∧…∧ē^{anti[0]}∧…
    /// (1-based indices; repeated indices give zero).
    pub fn monomial(n: usize, holo: &[usize], anti: &[usize]) -> Form {
        let mut f = Form::one(n);
        for &i in holo {
            f = f.wedge(&Form::e(n, i));
        }
        for &j in anti {
            f = f.wedge(&Form::ebar(n, j));
        }
        f
    }

    /// Holomorphic generator e^i (1-based).
    pub fn e(n: usize, i: usize) -> Form {
        Form::from_blade(n, Blade::new(1 << (i - 1), 0), Complex64::new(1.0, 0.0))
    }

    /// Antiholomorphic generator ē^i (1-based).
    pub fn ebar(n: usize, i: usize) -> Form {
        Form::from_blade(n, Blade::new(0, 1 << (i - 1)), Complex64::new(1.0, 0.0))
    }

    /// Assemble from coefficients over an explicit blade list.
    pub fn from_coords(n: usize, basis: &[Blade], v: &CVec) -> Form {
        let mut f = Form::zero(n);
        for (b, z) in basis.iter().zip(v.iter()) {
            f.c[b.index(n)] += *z;
        }
        f
    }

    /// Coefficients over an explicit blade list (components outside it are dropped).
    pub fn coords(&self, basis: &[Blade]) -> CVec {
        CVec::from_iterator(basis.len(), basis.iter().map(|b| self.c[b.index(self.n)]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, b: Blade) -> Complex64 {
        self.c[b.index(self.n)]
    }

    pub fn set(&mut self, b: Blade, z: Complex64) {
        let n = self.n;
        self.c[b.index(n)] = z;
    }

    pub fn add_to(&mut self, b: Blade, z: Complex64) {
        let n = self.n;
        self.c[b.index(n)] += z;
    }

    pub(crate) fn raw(&self) -> &[Complex64] {
        &self.c
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [Complex64] {
        &mut self.c
    }

    /// Nonzero terms in canonical blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, Complex64)> + '_ {
        let n = self.n;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(move |(i, z)| (Blade::from_index(i, n), *z))
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "wedge of forms of different dimension");
        let mut out = Form::zero(self.n);
        let nz: Vec<(usize, Complex64)> = nonzero(&other.c);
        for (i, a) in nonzero(&self.c) {
            for &(j, b) in &nz {
                if i & j == 0 {
                    out.c[i | j] += a * b * merge_sign(i, j);
                }
            }
        }
        out
    }

    /// Complex conjugate: conj(z e^H∧ē^K) = z̄ (−1)^{|H||K|} e^K∧ē^H.
    pub fn conj(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (b, z) in self.terms() {
            let sign = if (b.holo.count_ones() * b.anti.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            out.c[Blade::new(b.anti, b.holo).index(self.n)] += z.conj() * sign;
        }
        out
    }

    pub fn bidegree_part(&self, bd: Bidegree) -> Form {
        let mut out = Form::zero(self.n);
        for (b, z) in self.terms() {
            if b.bidegree() == bd {
                out.set(b, z);
            }
        }
        out
    }

    pub fn degree_part(&self, k: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (b, z) in self.terms() {
            if b.degree() == k {
                out.set(b, z);
            }
        }
        out
    }

    /// The common bidegree of all nonzero terms, if there is one.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms().map(|(b, _)| b.bidegree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The common total degree of all nonzero terms, if there is one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms().map(|(b, _)| b.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Interior product with the frame vector dual to e^j (`anti = false`) or ē^j.
    pub fn interior(&self, j: usize, anti: bool) -> Form {
        let bit = if anti { 1usize << (self.n + j - 1) } else { 1usize << (j - 1) };
        let mut out = Form::zero(self.n);
        for (i, z) in nonzero(&self.c) {
            if i & bit != 0 {
                let sign = if (i & (bit - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out.c[i & !bit] += z * sign;
            }
        }
        out
    }

    /// Coefficient of e^1∧…∧e^n∧ē^1∧…∧ē^n; the integral of an invariant top form with Vol = 1.
    pub fn top_coefficient(&self) -> Complex64 {
        *self.c.last().expect("nonempty")
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector (metric-free).
    pub fn coeff_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn scale(&self, z: Complex64) -> Form {
        Form { n: self.n, c: self.c.iter().map(|x| x * z).collect() }
    }

    pub fn scale_re(&self, r: f64) -> Form {
        self.scale(Complex64::new(r, 0.0))
    }

    /// Human-readable sum of terms, for reports.
    pub fn describe(&self, tol: f64) -> String {
        let parts: Vec<String> = self
            .terms()
            .filter(|(_, z)| z.norm() > tol)
            .map(|(b, z)| format!("({:.6}{:+.6}i) {}", z.re, z.im, b.label()))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn nonzero(c: &[Complex64]) -> Vec<(usize, Complex64)> {
    c.iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(i, z)| (i, *z)).collect()
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.n, rhs.n, "sum of forms of different dimension");
        Form { n: self.n, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        assert_eq!(self.n, rhs.n, "difference of forms of different dimension");
        Form { n: self.n, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        assert_eq!(self.n, rhs.n, "sum of forms of different dimension");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        assert_eq!(self.n, rhs.n, "difference of forms of different dimension");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a -= b;
        }
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale_re(-1.0)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale_re(-1.0)
    }
}

impl Mul<Complex64> for &Form {
    type Output = Form;
    fn mul(self, z: Complex64) -> Form {
        self.scale(z)
    }
}

impl Mul<Complex64> for Form {
    type Output = Form;
    fn mul(self, z: Complex64) -> Form {
        self.scale(z)
    }
}

impl Mul<f64> for &Form {
    type Output = Form;
    fn mul(self, r: f64) -> Form {
        self.scale_re(r)
    }
}

impl Mul<f64> for Form {
    type Output = Form;
    fn mul(self, r: f64) -> Form {
        self.scale_re(r)
    }
}
