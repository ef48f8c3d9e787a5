use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::blade::{Blade, bidegree_basis, Bidegree};
use super::form::Form;
use crate::linalg::{CVec, ZERO};

/// T^{1,0}-valued (0,q)-form Σ θ^j_J ē^J ⊗ Z_j, where Z_j is the frame
/// vector dual to e^j. Stored densely over (j, J).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorForm {
    n: usize,
    c: Vec<Complex64>,
}

impl VectorForm {
    pub fn zero(n: usize) -> VectorForm {
        VectorForm { n, c: vec![ZERO; n << n] }
    }

    /// ē^J ⊗ Z_j with J given as 1-based indices wedged in the order listed.
    pub fn unit(n: usize, j: usize, anti: &[usize]) -> VectorForm {
        VectorForm::from_parts(n, &[(j, Form::monomial(n, &[], anti))])
    }

    /// Σ α_j ⊗ Z_j from (0,q)-form parts; holomorphic components of α_j are ignored.
    pub fn from_parts(n: usize, parts: &[(usize, Form)]) -> VectorForm {
        let mut v = VectorForm::zero(n);
        for (j, alpha) in parts {
            for (b, z) in alpha.terms() {
                if b.holo == 0 {
                    v.c[(j - 1) * (1 << n) + b.anti as usize] += z;
                }
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient θ^j_J (j 1-based, J an anti mask).
    pub fn get(&self, j: usize, anti: u32) -> Complex64 {
        self.c[(j - 1) * (1 << self.n) + anti as usize]
    }

    pub fn set(&mut self, j: usize, anti: u32, z: Complex64) {
        let n = self.n;
        self.c[(j - 1) * (1 << n) + anti as usize] = z;
    }

    pub fn add_to(&mut self, j: usize, anti: u32, z: Complex64) {
        let n = self.n;
        self.c[(j - 1) * (1 << n) + anti as usize] += z;
    }

    /// Nonzero terms as (j, J, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, Complex64)> + '_ {
        let n = self.n;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(move |(i, z)| (i / (1 << n) + 1, (i % (1 << n)) as u32, *z))
    }

    /// The (0,q)-form coefficient of Z_j.
    pub fn part(&self, j: usize) -> Form {
        let mut f = Form::zero(self.n);
        for a in 0..(1u32 << self.n) {
            f.set(Blade::new(0, a), self.get(j, a));
        }
        f
    }

    /// Restriction to form degree q.
    pub fn degree_part(&self, q: usize) -> VectorForm {
        let mut out = VectorForm::zero(self.n);
        for (j, a, z) in self.terms() {
            if a.count_ones() as usize == q {
                out.set(j, a, z);
            }
        }
        out
    }

    /// θ⌟a = Σ ē^J ∧ (Z_j ⌟ a): contract the vector part, then wedge the form part on the left.
    pub fn contract(&self, a: &Form) -> Form {
        assert_eq!(self.n, a.dim(), "contraction across different dimensions");
        let mut out = Form::zero(self.n);
        for j in 1..=self.n {
            let part = self.part(j);
            if part.is_zero(0.0) {
                continue;
            }
            let inner = a.interior(j, false);
            if inner.is_zero(0.0) {
                continue;
            }
            out += &part.wedge(&inner);
        }
        out
    }

    /// Coordinates over the ordered basis of (0,q) vector forms (see [`vf_basis`]).
    pub fn coords(&self, q: usize) -> CVec {
        let basis = vf_basis(self.n, q);
        CVec::from_iterator(basis.len(), basis.iter().map(|&(j, a)| self.get(j, a)))
    }

    pub fn from_coords(n: usize, q: usize, v: &CVec) -> VectorForm {
        let mut out = VectorForm::zero(n);
        for (&(j, a), z) in vf_basis(n, q).iter().zip(v.iter()) {
            out.add_to(j, a, *z);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn scale(&self, z: Complex64) -> VectorForm {
        VectorForm { n: self.n, c: self.c.iter().map(|x| x * z).collect() }
    }
}

/// Ordered basis (j, J) of (0,q) vector forms: j-major, J in canonical order.
pub fn vf_basis(n: usize, q: usize) -> Vec<(usize, u32)> {
    let anti: Vec<u32> = bidegree_basis(n, Bidegree::new(0, q)).iter().map(|b| b.anti).collect();
    let mut out = Vec::with_capacity(n * anti.len());
    for j in 1..=n {
        for &a in &anti {
            out.push((j, a));
        }
    }
    out
}

impl Add<&VectorForm> for &VectorForm {
    type Output = VectorForm;
    fn add(self, rhs: &VectorForm) -> VectorForm {
        assert_eq!(self.n, rhs.n);
        VectorForm { n: self.n, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&VectorForm> for &VectorForm {
    type Output = VectorForm;
    fn sub(self, rhs: &VectorForm) -> VectorForm {
        assert_eq!(self.n, rhs.n);
        VectorForm { n: self.n, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &VectorForm {
    type Output = VectorForm;
    fn neg(self) -> VectorForm {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &VectorForm {
    type Output = VectorForm;
    fn mul(self, z: Complex64) -> VectorForm {
        self.scale(z)
    }
}
