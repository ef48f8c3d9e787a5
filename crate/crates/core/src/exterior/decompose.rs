use num_complex::Complex64;

use super::blade::{bidegree_basis, Bidegree};
use super::form::Form;
use super::metric::{i_pow, HermitianMetric};
use crate::error::{Error, Result};
use crate::linalg::{min_norm_solve, CMat, RANK_TOL};

/// Matrix of L: Λ^{p-1,q-1} → Λ^{p,q} in the unitary coframe, where ω = i Σ f^α∧f̄^α.
pub fn lefschetz_matrix(n: usize, bd: Bidegree) -> CMat {
    let src = if bd.p == 0 || bd.q == 0 { vec![] } else { bidegree_basis(n, Bidegree::new(bd.p - 1, bd.q - 1)) };
    let dst = bidegree_basis(n, bd);
    let w = HermitianMetric::identity(n).omega();
    let mut m = CMat::zeros(dst.len(), src.len());
    for (c, b) in src.iter().enumerate() {
        let img = w.wedge(&Form::from_blade(n, *b, Complex64::new(1.0, 0.0)));
        for (r, t) in dst.iter().enumerate() {
            m[(r, c)] = img.get(*t);
        }
    }
    m
}

/// Orthogonal Lefschetz split of a homogeneous (p,q)-form: a = a₀ + ω∧β with
/// Λa₀ = 0 and β of type (p−1,q−1). Solved by least squares in the unitary coframe.
pub fn primitive_part(a: &Form, metric: &HermitianMetric) -> Result<(Form, Form)> {
    let n = metric.dim();
    if a.dim() != n {
        return Err(Error::DimMismatch(a.dim(), n));
    }
    let Some(bd) = a.bidegree() else {
        if a.is_zero(0.0) {
            return Ok((Form::zero(n), Form::zero(n)));
        }
        return Err(Error::UnsupportedBidegree(usize::MAX, usize::MAX));
    };
    if bd.p == 0 || bd.q == 0 {
        return Ok((a.clone(), Form::zero(n)));
    }
    let fa = metric.to_ortho(a);
    let dst = bidegree_basis(n, bd);
    let src = bidegree_basis(n, Bidegree::new(bd.p - 1, bd.q - 1));
    let l = lefschetz_matrix(n, bd);
    let (beta, _) = min_norm_solve(&l, &fa.coords(&dst), RANK_TOL);
    let fbeta = Form::from_coords(n, &src, &beta);
    let beta = metric.from_ortho(&fbeta);
    let prim = a - &metric.omega().wedge(&beta);
    Ok((prim, beta))
}

/// Decomposition of an (n−1,1)- or (1,2)-form into primitive part and ω-factor:
/// a = a_prim + ω∧ζ with ζ of type (n−2,0), resp. (0,1).
pub fn primitive_decompose(a: &Form, metric: &HermitianMetric) -> Result<(Form, Form)> {
    let n = metric.dim();
    match a.bidegree() {
        None if a.is_zero(0.0) => Ok((Form::zero(n), Form::zero(n))),
        Some(bd) if (n >= 2 && bd == Bidegree::new(n - 1, 1)) || bd == Bidegree::new(1, 2) => {
            primitive_part(a, metric)
        }
        Some(bd) => Err(Error::UnsupportedBidegree(bd.p, bd.q)),
        None => Err(Error::UnsupportedBidegree(usize::MAX, usize::MAX)),
    }
}

/// ⋆-eigenspace split of an n-form: a = plus + minus with ⋆plus = ε plus,
/// ⋆minus = −ε minus, ε = 1 for even n and i for odd n.
pub fn star_split_n(a: &Form, metric: &HermitianMetric) -> Result<(Form, Form)> {
    let n = metric.dim();
    if a.dim() != n {
        return Err(Error::DimMismatch(a.dim(), n));
    }
    if let Some(k) = a.degree() {
        if k != n {
            return Err(Error::WrongDegree { expected: n, found: k });
        }
    } else if !a.is_zero(0.0) {
        let found = a.terms().map(|(b, _)| b.degree()).find(|&k| k != n).unwrap_or(n);
        return Err(Error::WrongDegree { expected: n, found });
    }
    let eps = star_eigenvalue(n);
    let s = metric.star(a).scale(eps.inv());
    let plus = (a + &s).scale_re(0.5);
    let minus = (a - &s).scale_re(0.5);
    Ok((plus, minus))
}

/// ε with ε² = (−1)^n: 1 for even n, i for odd n.
pub fn star_eigenvalue(n: usize) -> Complex64 {
    if n.is_multiple_of(2) {
        i_pow(0)
    } else {
        i_pow(1)
    }
}

/// τ(a) = [Λ, ∂ω∧·](a) = Λ(∂ω∧a) − ∂ω∧Λa.
pub fn torsion_tau(a: &Form, metric: &HermitianMetric, d_omega: &Form) -> Result<Form> {
    let n = metric.dim();
    if a.dim() != n {
        return Err(Error::DimMismatch(a.dim(), n));
    }
    if d_omega.dim() != n {
        return Err(Error::DimMismatch(d_omega.dim(), n));
    }
    if let Some(bd) = d_omega.bidegree() {
        if bd != Bidegree::new(2, 1) {
            return Err(Error::UnsupportedBidegree(bd.p, bd.q));
        }
    }
    let first = metric.lambda(&d_omega.wedge(a));
    let second = d_omega.wedge(&metric.lambda(a));
    Ok(&first - &second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn omega_in_dim_two_is_pure_multiple() {
        let g = HermitianMetric::identity(2);
        let (p, z) = primitive_decompose(&g.omega(), &g).unwrap();
        assert!(p.is_zero(1e-12));
        assert!((&z - &Form::one(2)).max_abs() < 1e-12);
    }

    #[test]
    fn primitive_input_is_fixed() {
        let g = HermitianMetric::identity(3);
        let v = Form::monomial(3, &[1, 2], &[3]);
        let (p, z) = primitive_decompose(&v, &g).unwrap();
        assert!((&p - &v).max_abs() < 1e-12);
        assert!(z.is_zero(1e-12));
    }

    #[test]
    fn rejects_unsupported_bidegree() {
        let g = HermitianMetric::identity(3);
        assert!(matches!(primitive_decompose(&Form::e(3, 1), &g), Err(Error::UnsupportedBidegree(1, 0))));
    }

    #[test]
    fn star_split_requires_middle_degree() {
        let g = HermitianMetric::identity(3);
        assert!(matches!(star_split_n(&Form::e(3, 1), &g), Err(Error::WrongDegree { expected: 3, found: 1 })));
    }

    #[test]
    fn torsion_vanishes_without_d_omega() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = HermitianMetric::random(3, &mut rng);
        let a = Form::monomial(3, &[1], &[2]);
        assert!(torsion_tau(&a, &g, &Form::zero(3)).unwrap().is_zero(0.0));
    }
}
