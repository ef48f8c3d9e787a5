use crate::cy_deformation::vf_delbar_matrix;
use crate::exterior::{vf_basis, VectorForm};
use crate::lie_model::HermitianModel;
use crate::linalg::{self, CMat, CVec};

/// H^{0,q}(T^{1,0}) on invariant vector forms, in unitary-frame coordinates
/// where the pointwise inner product is the standard one.
#[derive(Debug, Clone)]
pub struct VfCohomology {
    n: usize,
    q: usize,
    to_ortho: CMat,
    from_ortho: CMat,
    /// Orthonormal basis of ker ∂̄ ∩ (Im ∂̄)^⊥ (harmonic representatives).
    pub harmonic: CMat,
    /// Orthonormal basis of Im ∂̄ in degree q.
    pub exact: CMat,
}

fn transport(h: &HermitianModel, q: usize) -> CMat {
    let n = h.dim();
    let basis = vf_basis(n, q);
    let mut m = CMat::zeros(basis.len(), basis.len());
    for (c, &(j, a)) in basis.iter().enumerate() {
        let mut t = VectorForm::zero(n);
        t.set(j, a, linalg::ONE);
        m.set_column(c, &h.metric().vf_to_ortho(&t).coords(q));
    }
    m
}

impl VfCohomology {
    pub fn new(h: &HermitianModel, q: usize) -> VfCohomology {
        let n = h.dim();
        let tol = h.rank_tol();
        let to_ortho = transport(h, q);
        let from_ortho = to_ortho.clone().try_inverse().expect("frame change is invertible");
        let delbar_q = if q < n {
            transport(h, q + 1) * vf_delbar_matrix(h.model(), q) * &from_ortho
        } else {
            CMat::zeros(0, to_ortho.ncols())
        };
        let exact = if q == 0 {
            CMat::zeros(to_ortho.nrows(), 0)
        } else {
            let prev = transport(h, q - 1);
            let inv = prev.try_inverse().expect("frame change is invertible");
            linalg::image(&(&to_ortho * vf_delbar_matrix(h.model(), q - 1) * inv), tol)
        };
        let closed = linalg::kernel(&delbar_q, tol);
        let harmonic = linalg::complement_in(&closed, &exact, tol);
        VfCohomology { n, q, to_ortho, from_ortho, harmonic, exact }
    }

    pub fn dimension(&self) -> usize {
        self.harmonic.ncols()
    }

    pub fn coords(&self, v: &VectorForm) -> CVec {
        &self.to_ortho * v.coords(self.q)
    }

    pub fn vector_form(&self, c: &CVec) -> VectorForm {
        VectorForm::from_coords(self.n, self.q, &(&self.from_ortho * c))
    }

    /// Harmonic basis as vector forms.
    pub fn basis(&self) -> Vec<VectorForm> {
        (0..self.harmonic.ncols()).map(|c| self.vector_form(&self.harmonic.column(c).into_owned())).collect()
    }

    /// Class coordinates (in the harmonic basis) of a ∂̄-closed vector form.
    pub fn class_coords(&self, v: &VectorForm) -> CVec {
        self.harmonic.adjoint() * self.coords(v)
    }

    /// Vector form with the given class coordinates.
    pub fn from_class(&self, c: &CVec) -> VectorForm {
        self.vector_form(&(&self.harmonic * c))
    }
}
