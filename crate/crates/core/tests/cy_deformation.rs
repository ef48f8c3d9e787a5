use hdl_core::cy_deformation::*;
use hdl_core::exterior::{vf_basis, Bidegree, Form, HermitianMetric, VectorForm};
use hdl_core::lie_model::{fixtures, HermitianModel, Model};
use hdl_core::linalg::{self, CVec, RANK_TOL};
use hdl_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn iwasawa() -> Model {
    Model::from_json(fixtures::IWASAWA).unwrap()
}

fn random_vf(n: usize, q: usize, rng: &mut ChaCha8Rng) -> VectorForm {
    let len = vf_basis(n, q).len();
    let v = CVec::from_fn(len, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    VectorForm::from_coords(n, q, &v)
}

fn setup(model: &Model) -> (HermitianModel, VolumeForm) {
    let h = HermitianModel::with_default_metric(model).unwrap();
    let u = canonical_trivialization(model, h.metric()).unwrap();
    (h, u)
}

/// Random (0,1) vector forms θ with ∂(θ⌟u) = 0, from a kernel basis.
fn admissible(model: &Model, u: &VolumeForm, rng: &mut ChaCha8Rng) -> VectorForm {
    let n = model.dim();
    let t = tu_matrix(u, 1);
    let del = model.operators().del_block(Bidegree::new(n - 1, 1));
    let k = linalg::kernel(&(del * t), RANK_TOL);
    let c = CVec::from_fn(k.ncols(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    VectorForm::from_coords(n, 1, &(k * c))
}

#[test]
fn trivializations() {
    for n in 2..=3 {
        let t = Model::torus(n);
        let g = HermitianMetric::identity(n);
        let u = canonical_trivialization(&t, &g).unwrap();
        let fact: f64 = (1..=n).map(|x| x as f64).product();
        assert!((g.canonical_norm_sq(u.form()) - 1.0 / fact).abs() < 1e-12);
        assert!(u.is_normalized());
    }
    let m = iwasawa();
    let u = canonical_trivialization(&m, &HermitianMetric::identity(3)).unwrap();
    assert!(m.d(u.form()).is_zero(1e-12));
    // d e^1 = e^1∧ē^1 makes ∂̄(e^1∧e^2) ≠ 0
    let text = r#"{"name":"x","complex_dim":2,"structure":[{"d_of":1,"terms":[{"coeff":[1,0],"holo":[1],"anti":[1]}]}]}"#;
    let bad = Model::from_json(text).unwrap();
    let e12 = Form::e(2, 1).wedge(&Form::e(2, 2));
    assert!(!bad.delbar(&e12).is_zero(1e-12));
    assert!(matches!(canonical_trivialization(&bad, &HermitianMetric::identity(2)), Err(Error::NoTrivialization(_))));
    assert!(matches!(VolumeForm::new(&m, Form::zero(3)), Err(Error::VanishingForm)));
}

#[test]
fn contraction_and_inverse_are_mutually_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = iwasawa();
    let g = HermitianMetric::random(3, &mut rng);
    let u = canonical_trivialization(&m, &g).unwrap();
    for q in 0..=3 {
        let th = random_vf(3, q, &mut rng);
        let back = cy_invert(&u, &cy_contract(&u, &th).unwrap()).unwrap();
        assert!((&back - &th).max_abs() < 1e-10);
    }
    assert!(cy_invert(&u, &Form::e(3, 1)).is_err());
}

#[test]
fn tu_is_an_isometry_for_the_flat_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (h, u) = setup(&Model::torus(3));
    for q in 0..=3 {
        let th = random_vf(3, q, &mut rng);
        let a = h.metric().norm_sq(&cy_contract(&u, &th).unwrap());
        assert!((a - h.metric().vf_norm_sq(&th)).abs() < 1e-10);
    }
}

#[test]
fn tu_preserves_kernel_and_image_of_delbar() {
    let m = iwasawa();
    let (_, u) = setup(&m);
    let n = 3;
    for q in 0..n {
        let t = tu_matrix(&u, q);
        let t1 = tu_matrix(&u, q + 1);
        let vd = vf_delbar_matrix(&m, q);
        let fd = m.operators().delbar_block(Bidegree::new(n - 1, q));
        // T_u ∘ ∂̄ = ∂̄ ∘ T_u
        assert!(linalg::max_abs(&(&t1 * &vd - &fd * &t)) < 1e-12);
        let ker_v = linalg::kernel(&vd, RANK_TOL);
        let ker_f = linalg::kernel(&fd, RANK_TOL);
        assert!(linalg::subspace_distance(&(&t * ker_v), &ker_f, RANK_TOL) < 1e-9);
        let img_v = &t1 * &vd;
        assert!(linalg::subspace_distance(&img_v, &fd, RANK_TOL) < 1e-9);
    }
}

#[test]
fn vector_delbar_squares_to_zero_and_obeys_contraction_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in [Model::torus(3), iwasawa(), Model::from_json(fixtures::STEP2_OBSTRUCTED).unwrap()] {
        let g = HermitianMetric::identity(3);
        let w = g.omega();
        let w2 = g.omega_power(2);
        for _ in 0..20 {
            let xi = random_vf(3, 0, &mut rng);
            let th = random_vf(3, 1, &mut rng);
            let dd = vf_delbar(&m, &vf_delbar(&m, &th));
            assert!(dd.max_abs() < 1e-10);
            let lhs = m.delbar(&xi.contract(&w2));
            let rhs = &vf_delbar(&m, &xi).contract(&w2) - &xi.contract(&m.delbar(&w2));
            assert!((&lhs - &rhs).max_abs() < 1e-10);
            let lhs = m.delbar(&th.contract(&w));
            let rhs = &vf_delbar(&m, &th).contract(&w) + &th.contract(&m.delbar(&w));
            assert!((&lhs - &rhs).max_abs() < 1e-10);
        }
    }
}

#[test]
fn bracket_vanishes_on_the_torus_and_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = Model::torus(3);
    let a = random_vf(3, 1, &mut rng);
    let b = random_vf(3, 1, &mut rng);
    assert!(bracket(&t, &a, &b).unwrap().is_zero(0.0));
    let m = iwasawa();
    for _ in 0..20 {
        let a = random_vf(3, 1, &mut rng);
        let b = random_vf(3, 1, &mut rng);
        let ab = bracket(&m, &a, &b).unwrap();
        let ba = bracket(&m, &b, &a).unwrap();
        assert!((&ab - &ba).max_abs() < 1e-12);
        assert!(!ab.is_zero(1e-9));
    }
}

#[test]
fn delbar_is_a_derivation_of_the_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = iwasawa();
    for (p, q) in [(0, 0), (0, 1), (1, 1), (1, 0)] {
        let a = random_vf(3, p, &mut rng);
        let b = random_vf(3, q, &mut rng);
        let lhs = vf_delbar(&m, &bracket(&m, &a, &b).unwrap());
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = &bracket(&m, &vf_delbar(&m, &a), &b).unwrap()
            + &bracket(&m, &a, &vf_delbar(&m, &b)).unwrap().scale(Complex64::new(sign, 0.0));
        assert!((&lhs - &rhs).max_abs() < 1e-10, "({p},{q})");
    }
}

#[test]
fn tian_todorov_on_iwasawa() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let m = iwasawa();
    let (_, u) = setup(&m);
    for _ in 0..50 {
        let t1 = admissible(&m, &u, &mut rng);
        let t2 = admissible(&m, &u, &mut rng);
        let a = cy_contract(&u, &t1).unwrap();
        let b = cy_contract(&u, &t2).unwrap();
        let lhs = scalar_bracket(&m, &u, &a, &b).unwrap();
        let rhs = m.del(&t1.contract(&t2.contract(u.form())));
        assert!((&lhs - &rhs).max_abs() < 1e-8, "{} {} {} {}", (&lhs - &rhs).max_abs(), (&lhs + &rhs).max_abs(), lhs.max_abs(), rhs.max_abs());
    }
}

#[test]
fn bracket_of_closed_direction_is_delbar_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = iwasawa();
    let k = linalg::kernel(&vf_delbar_matrix(&m, 1), RANK_TOL);
    for _ in 0..10 {
        let c = CVec::from_fn(k.ncols(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let phi = VectorForm::from_coords(3, 1, &(&k * c));
        let br = bracket(&m, &phi, &phi).unwrap();
        assert!(vf_delbar(&m, &br).max_abs() < 1e-10);
    }
}

#[test]
fn torus_series_are_linear() {
    for n in 2..=3 {
        let t = Model::torus(n);
        let (h, u) = setup(&t);
        let dirs = deformation_directions(&h, &u).unwrap();
        assert_eq!(dirs.len(), n * n);
        for eta in &dirs {
            let s = kuranishi_series(&h, &u, eta, 6).unwrap();
            assert_eq!(s.phis.len(), 6);
            assert!(s.residuals.iter().all(|r| *r < 1e-10));
            assert!(s.phis[1..].iter().all(|p| p.is_zero(1e-12)));
            assert!(s.psi_projection_defects.iter().all(|d| *d < 1e-9));
        }
    }
}

#[test]
fn maurer_cartan_residual_detects_missing_terms() {
    let m = iwasawa();
    let (h, u) = setup(&m);
    let dirs = deformation_directions(&h, &u).unwrap();
    let mut checked = 0;
    for eta in &dirs {
        let Ok(s) = kuranishi_series(&h, &u, eta, 3) else { continue };
        for k in 1..=3 {
            assert!(maurer_cartan_residual(&h, &s, k).unwrap() < 1e-9);
            let phi = &s.phis[k - 1];
            assert!(m.del(&phi.contract(u.form())).is_zero(1e-9));
        }
        let br = bracket(&m, &s.phis[0], &s.phis[0]).unwrap();
        let mut broken = s.clone();
        broken.phis[1] = VectorForm::zero(3);
        let want = 0.5 * h.metric().vf_norm_sq(&br).sqrt();
        assert!((maurer_cartan_residual(&h, &broken, 2).unwrap() - want).abs() < 1e-9);
        checked += 1;
    }
    assert!(checked > 0);
    assert!(matches!(maurer_cartan_residual(&h, &kuranishi_series(&h, &u, &dirs[0], 1).unwrap_or_else(|_| panic!()), 2), Err(Error::OrderOutOfRange(2))));
}

#[test]
fn iwasawa_directions_are_unobstructed() {
    let m = iwasawa();
    let (h, u) = setup(&m);
    let dirs = deformation_directions(&h, &u).unwrap();
    assert_eq!(dirs.len(), 6);
    for eta in &dirs {
        let s = kuranishi_series(&h, &u, eta, 4).unwrap();
        assert!(s.residuals.iter().all(|r| *r < 1e-9));
    }
}

#[test]
fn obstructed_nilmanifold_reports_failing_order() {
    let m = Model::from_json(fixtures::STEP2_OBSTRUCTED).unwrap();
    let (h, u) = setup(&m);
    let dirs = deformation_directions(&h, &u).unwrap();
    let err = kuranishi_series(&h, &u, &dirs[0], 3).unwrap_err();
    assert!(matches!(err, Error::ObstructionNotExact { order: 2, .. }), "{err:?}");
}
