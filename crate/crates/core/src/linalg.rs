//! Dense complex linear algebra on top of nalgebra's SVD: ranks, kernels,
//! images, minimal-norm solves and subspace arithmetic.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Largest singular values below this are treated as an exactly zero operator.
const ZERO_OPERATOR: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Full singular value decomposition `a = u diag(s) v^H` with `v` square.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
    rows: usize,
}

impl Svd {
    pub fn new(a: &CMat) -> Svd {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Svd { u: CMat::identity(m, m), s: vec![], v: CMat::identity(n, n), rows: m };
        }
        let padded = if m < n {
            let mut p = CMat::zeros(n, n);
            p.view_mut((0, 0), (m, n)).copy_from(a);
            p
        } else {
            a.clone()
        };
        let svd = padded.svd(true, true);
        let u = svd.u.expect("u requested");
        let v = svd.v_t.expect("v_t requested").adjoint();
        let s: Vec<f64> = svd.singular_values.iter().copied().collect();
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
        let u = CMat::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let v = CMat::from_fn(v.nrows(), order.len(), |r, c| v[(r, order[c])]);
        let s = order.iter().map(|&i| s[i]).collect();
        Svd { u, s, v, rows: m }
    }

    pub fn threshold(&self, rel: f64) -> f64 {
        let smax = self.s.first().copied().unwrap_or(0.0);
        if smax <= ZERO_OPERATOR {
            f64::INFINITY
        } else {
            rel * smax
        }
    }

    pub fn rank(&self, rel: f64) -> usize {
        let t = self.threshold(rel);
        self.s.iter().filter(|&&x| x > t).count()
    }

    /// Orthonormal basis of the kernel, as columns.
    pub fn kernel(&self, rel: f64) -> CMat {
        let r = self.rank(rel);
        let n = self.v.nrows();
        self.v.columns(r, n - r).into_owned()
    }

    /// Orthonormal basis of the column space, as columns.
    pub fn image(&self, rel: f64) -> CMat {
        let r = self.rank(rel);
        self.u.view((0, 0), (self.rows, r)).into_owned()
    }

    /// Minimal-norm least-squares solution of `a x = b`.
    pub fn solve(&self, b: &CVec, rel: f64) -> CVec {
        let r = self.rank(rel);
        let n = self.v.nrows();
        let mut x = CVec::zeros(n);
        for k in 0..r {
            let uk = self.u.view((0, k), (self.rows, 1));
            let coeff = (uk.adjoint() * b)[(0, 0)] / self.s[k];
            x += self.v.column(k) * coeff;
        }
        x
    }
}

pub fn rank(a: &CMat, rel: f64) -> usize {
    Svd::new(a).rank(rel)
}

pub fn kernel(a: &CMat, rel: f64) -> CMat {
    Svd::new(a).kernel(rel)
}

pub fn image(a: &CMat, rel: f64) -> CMat {
    Svd::new(a).image(rel)
}

/// Minimal-norm least-squares solve; returns the solution and the residual norm.
pub fn min_norm_solve(a: &CMat, b: &CVec, rel: f64) -> (CVec, f64) {
    let x = Svd::new(a).solve(b, rel);
    let res = (a * &x - b).norm();
    (x, res)
}

/// Orthogonal projector onto the span of orthonormal columns `q`.
pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Orthonormal basis of the span of the columns of `a` and `b` together.
pub fn span_sum(a: &CMat, b: &CMat, rel: f64) -> CMat {
    image(&hcat(a, b), rel)
}

/// Orthonormal basis of the intersection of two column spans.
pub fn intersection(a: &CMat, b: &CMat, rel: f64) -> CMat {
    let qa = image(a, rel);
    let qb = image(b, rel);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let stacked = hcat(&qa, &(-&qb));
    let k = kernel(&stacked, rel);
    let comb = &qa * k.rows(0, qa.ncols());
    image(&comb, rel)
}

/// Orthonormal basis of the orthogonal complement of `b` inside `a`.
pub fn complement_in(a: &CMat, b: &CMat, rel: f64) -> CMat {
    let qa = image(a, rel);
    let qb = image(b, rel);
    let resid = &qa - projector(&qb) * &qa;
    image(&resid, rel)
}

pub fn hcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows(), "hcat row mismatch");
    let mut m = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

/// Largest absolute entry, zero for an empty matrix.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Distance between the column spans of two matrices, measured as the
/// spectral gap of their orthogonal projectors (Frobenius norm).
pub fn subspace_distance(a: &CMat, b: &CMat, rel: f64) -> f64 {
    let pa = projector(&image(a, rel));
    let pb = projector(&image(b, rel));
    (pa - pb).norm()
}

/// Hermitian part `(a + a^H)/2` and the asymmetry `|a - a^H|_max`.
pub fn hermitian_part(a: &CMat) -> (CMat, f64) {
    let ah = a.adjoint();
    let asym = max_abs(&(a - &ah));
    ((a + ah) * Complex64::new(0.5, 0.0), asym)
}

/// Smallest eigenvalue of a Hermitian matrix (infinite for an empty one).
pub fn min_eigenvalue(a: &CMat) -> f64 {
    if a.nrows() == 0 {
        return f64::INFINITY;
    }
    let (h, _) = hermitian_part(a);
    h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rank_and_kernel_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let svd = Svd::new(&a);
        assert_eq!(svd.rank(RANK_TOL), 1);
        let k = svd.kernel(RANK_TOL);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-12);
    }

    #[test]
    fn zero_operator_has_full_kernel() {
        let a = CMat::zeros(2, 3);
        assert_eq!(rank(&a, RANK_TOL), 0);
        assert_eq!(kernel(&a, RANK_TOL).ncols(), 3);
        assert_eq!(image(&a, RANK_TOL).ncols(), 0);
    }

    #[test]
    fn empty_shapes_are_handled() {
        let a = CMat::zeros(0, 2);
        assert_eq!(kernel(&a, RANK_TOL).ncols(), 2);
        let b = CMat::zeros(3, 0);
        assert_eq!(rank(&b, RANK_TOL), 0);
        assert_eq!(kernel(&b, RANK_TOL).ncols(), 0);
    }

    #[test]
    fn min_norm_solution_is_orthogonal_to_kernel() {
        let a = CMat::from_row_slice(1, 2, &[c(1.0), c(1.0)]);
        let b = CVec::from_vec(vec![c(2.0)]);
        let (x, res) = min_norm_solve(&a, &b, RANK_TOL);
        assert!(res < 1e-12);
        assert!((x[0] - c(1.0)).norm() < 1e-12 && (x[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let a = CMat::from_row_slice(3, 2, &[c(1.0), c(0.0), c(0.0), c(1.0), c(0.0), c(0.0)]);
        let b = CMat::from_row_slice(3, 2, &[c(0.0), c(0.0), c(1.0), c(0.0), c(0.0), c(1.0)]);
        let i = intersection(&a, &b, RANK_TOL);
        assert_eq!(i.ncols(), 1);
        assert!((i[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
