use hdl_core::exterior::{binomial, Bidegree, Form, HermitianMetric};
use hdl_core::lie_model::{fixtures, HermitianModel, Model, ModelSpec, Op, Space, Theory};
use hdl_core::linalg;
use hdl_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn iwasawa() -> Model {
    Model::from_json(fixtures::IWASAWA).unwrap()
}

fn random_form(n: usize, bd: Bidegree, rng: &mut ChaCha8Rng) -> Form {
    let basis = hdl_core::exterior::bidegree_basis(n, bd);
    let v = linalg::CVec::from_fn(basis.len(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    Form::from_coords(n, &basis, &v)
}

#[test]
fn iwasawa_structure_expands_through_conjugation() {
    let m = iwasawa();
    let e3 = Form::e(3, 3);
    let want = -&Form::e(3, 1).wedge(&Form::e(3, 2));
    assert!((&m.del(&e3) - &want).max_abs() < 1e-12);
    assert!(m.delbar(&e3).is_zero(1e-12));
    let eb3 = Form::ebar(3, 3);
    let want_bar = -&Form::ebar(3, 1).wedge(&Form::ebar(3, 2));
    assert!((&m.delbar(&eb3) - &want_bar).max_abs() < 1e-12);
    assert!(m.is_unimodular());
}

#[test]
fn iwasawa_delbar_on_01_has_rank_one() {
    let m = iwasawa();
    let b = m.operators().delbar_block(Bidegree::new(0, 1));
    assert_eq!(linalg::rank(&b, linalg::RANK_TOL), 1);
}

#[test]
fn torus_grid_is_binomial_by_both_oracles() {
    for n in 2..=3 {
        let m = Model::torus(n);
        let h = HermitianModel::with_default_metric(&m).unwrap();
        for p in 0..=n {
            for q in 0..=n {
                let c = h.cohomology(Theory::Dolbeault, Space::Bidegree(Bidegree::new(p, q))).unwrap();
                let want = (binomial(n, p) * binomial(n, q)) as usize;
                assert_eq!((c.rank_dimension, c.harmonic_dimension), (want, want));
            }
        }
    }
}

#[test]
fn iwasawa_regressions_agree_across_oracles() {
    let h = HermitianModel::with_default_metric(&iwasawa()).unwrap();
    let h01 = h.cohomology(Theory::Dolbeault, Space::Bidegree(Bidegree::new(0, 1))).unwrap();
    assert_eq!((h01.rank_dimension, h01.harmonic_dimension), (2, 2));
    let b1 = h.cohomology(Theory::DeRham, Space::Degree(1)).unwrap();
    assert_eq!((b1.rank_dimension, b1.harmonic_dimension), (4, 4));
    for k in 0..=6 {
        let c = h.cohomology(Theory::DeRham, Space::Degree(k)).unwrap();
        assert_eq!(c.rank_dimension, c.harmonic_dimension, "degree {k}");
    }
    for p in 0..=3 {
        for q in 0..=3 {
            let bd = Space::Bidegree(Bidegree::new(p, q));
            for t in [Theory::Dolbeault, Theory::Aeppli] {
                let c = h.cohomology(t, bd).unwrap();
                assert_eq!(c.rank_dimension, c.harmonic_dimension, "{t:?} ({p},{q})");
            }
        }
    }
}

#[test]
fn ddbar_lemma_verdicts() {
    for n in 2..=3 {
        assert!(Model::torus(n).ddbar_lemma_check().holds);
    }
    let m = iwasawa();
    let rep = m.ddbar_lemma_check();
    assert!(!rep.holds);
    let w = rep.witness.unwrap();
    assert_eq!(w.bidegree(), Some(Bidegree::new(2, 0)));
    let e12 = Form::e(3, 1).wedge(&Form::e(3, 2));
    assert!((&w - &e12).max_abs() < 1e-10);
    // d-closed, ∂-exact (it is −∂e³), not ∂∂̄-exact: Λ^{1,-1} is empty
    assert!(m.d(&w).is_zero(1e-12));
    assert!((&m.del(&Form::e(3, 3)) + &w).max_abs() < 1e-12);
}

#[test]
fn iwasawa_standard_metric_flags() {
    let m = iwasawa();
    let f = m.metric_flags(&HermitianMetric::identity(3));
    assert!(!f.kahler && f.balanced && f.gauduchon && f.lambda_d_omega_zero);
    let t = Model::torus(2).metric_flags(&HermitianMetric::identity(2));
    assert!(t.kahler && t.balanced && t.gauduchon);
}

#[test]
fn balanced_implies_gauduchon_on_random_metrics() {
    let m = iwasawa();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let f = m.metric_flags(&HermitianMetric::random(3, &mut rng));
        assert!(!f.balanced || f.gauduchon);
        assert_eq!(f.balanced, f.lambda_d_omega_zero);
    }
}

#[test]
fn not_closed_square_is_reported() {
    let text = r#"{"name":"bad","complex_dim":3,"structure":[
        {"d_of":1,"terms":[{"coeff":[1,0],"holo":[2,3]}]},
        {"d_of":2,"terms":[{"coeff":[-1,0],"holo":[1,2]}]}]}"#;
    assert!(matches!(Model::from_json(text), Err(Error::NotClosedSquare { .. })));
    let v = Model::validate(&ModelSpec::from_json(text).unwrap());
    assert!(!v.d_squared_zero && v.integrable);
}

#[test]
fn integrability_violation_is_reported() {
    let text = r#"{"name":"bad","complex_dim":2,"structure":[{"d_of":2,"terms":[{"coeff":[1,0],"anti":[1,2]}]}]}"#;
    assert!(matches!(Model::from_json(text), Err(Error::IntegrabilityViolated(2))));
}

#[test]
fn non_unimodular_model_refuses_adjoints() {
    // d e^1 = e^1 ∧ ē^1 − ē^1 ∧ e^1 style: de^2 = e^1∧e^2 is not unimodular
    let text = r#"{"name":"nu","complex_dim":2,"structure":[{"d_of":2,"terms":[{"coeff":[1,0],"holo":[1,2]}]}]}"#;
    let m = Model::from_json(text).unwrap();
    assert!(!m.is_unimodular());
    assert!(matches!(HermitianModel::with_default_metric(&m), Err(Error::NotUnimodular)));
    assert!(m.cohomology_dimension(Theory::Dolbeault, Space::Bidegree(Bidegree::new(0, 0))).is_ok());
}

#[test]
fn commutation_relations_on_iwasawa() {
    let h = HermitianModel::with_default_metric(&iwasawa()).unwrap();
    let (a, b) = h.commutation_defects();
    assert!(a < 1e-8 && b < 1e-8, "{a} {b}");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = HermitianMetric::random(3, &mut rng);
    let (a, b) = HermitianModel::new(&iwasawa(), &g).unwrap().commutation_defects();
    assert!(a < 1e-8 && b < 1e-8, "random metric {a} {b}");
}

#[test]
fn laplacian_is_square_of_delbar_plus_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = HermitianMetric::random(3, &mut rng);
    let h = HermitianModel::new(&iwasawa(), &g).unwrap();
    for k in 0..=6 {
        let d = h.degree_matrix(Op::Delbar, k).unwrap();
        let ds = h.degree_matrix(Op::DelbarStar, k).unwrap();
        let lap = h.degree_matrix(Op::LapDelbar, k).unwrap();
        let up = if k < 6 { h.degree_matrix(Op::DelbarStar, k + 1).unwrap() * &d } else { linalg::CMat::zeros(lap.nrows(), lap.ncols()) };
        let down = if k > 0 { h.degree_matrix(Op::Delbar, k - 1).unwrap() * &ds } else { linalg::CMat::zeros(lap.nrows(), lap.ncols()) };
        assert!(linalg::max_abs(&(lap - up - down)) < 1e-10);
    }
}

#[test]
fn adjoints_are_exact_in_the_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = HermitianMetric::random(3, &mut rng);
    let m = iwasawa();
    let h = HermitianModel::new(&m, &g).unwrap();
    for _ in 0..5 {
        let a = random_form(3, Bidegree::new(1, 1), &mut rng);
        let b = random_form(3, Bidegree::new(1, 2), &mut rng);
        let ds = h.op_matrix(Op::DelbarStar, Bidegree::new(1, 2)).unwrap();
        let dsb = h.form(&(ds * h.coords(&b, Bidegree::new(1, 2))), Bidegree::new(1, 1));
        let lhs = h.inner(&m.delbar(&a), &b);
        let rhs = h.inner(&a, &dsb);
        assert!((lhs - rhs).norm() < 1e-10);
    }
}

#[test]
fn harmonic_representative_is_class_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let m = iwasawa();
    let h = HermitianModel::with_default_metric(&m).unwrap();
    let basis = h.cohomology(Theory::Dolbeault, Space::Bidegree(Bidegree::new(1, 1))).unwrap().basis;
    for b in &basis {
        let r = h.harmonic_representative(b, Theory::Dolbeault).unwrap();
        assert!((&r - b).max_abs() < 1e-10);
        let shifted = b + &m.delbar(&random_form(3, Bidegree::new(1, 0), &mut rng));
        let r2 = h.harmonic_representative(&shifted, Theory::Dolbeault).unwrap();
        assert!((&r2 - b).max_abs() < 1e-10);
    }
    let not_closed = Form::ebar(3, 3);
    assert!(matches!(h.harmonic_representative(&not_closed, Theory::Dolbeault), Err(Error::NotInKernel(_))));
}

#[test]
fn minimal_d_closed_representatives() {
    let t = Model::torus(2);
    let h = HermitianModel::with_default_metric(&t).unwrap();
    let a = Form::e(2, 1).wedge(&Form::ebar(2, 2));
    let r = h.minimal_d_closed_rep(&a).unwrap();
    assert!((&r.form - &a).max_abs() < 1e-12 && r.potential.is_zero(1e-12));

    let m = iwasawa();
    let h = HermitianModel::with_default_metric(&m).unwrap();
    // e^3∧ē^1: ∂̄-closed, ∂(e^3∧ē^1) = −e^1∧e^2∧ē^1 is not ∂∂̄-exact
    let a = Form::e(3, 3).wedge(&Form::ebar(3, 1));
    assert!(m.delbar(&a).is_zero(1e-12));
    assert!(matches!(h.minimal_d_closed_rep(&a), Err(Error::NoDClosedRepresentative(_))));
    // d-closed harmonic input is returned unchanged
    let b = Form::e(3, 1).wedge(&Form::ebar(3, 2));
    let r = h.minimal_d_closed_rep(&b).unwrap();
    assert!((&r.form - &b).max_abs() < 1e-12);
    assert!(m.d(&r.form).is_zero(1e-10));
}

#[test]
fn aeppli_split_is_orthogonal() {
    let h = HermitianModel::with_default_metric(&iwasawa()).unwrap();
    for p in 0..=3 {
        for q in 0..=3 {
            let s = h.aeppli_split(Bidegree::new(p, q)).unwrap();
            assert_eq!(s.ker_ddbar, s.harmonic + s.exact, "({p},{q})");
            assert!(s.orthogonality_defect < 1e-9);
        }
    }
}

#[test]
fn harmonic_chain_for_primitive_n11_forms() {
    let m = iwasawa();
    let h = HermitianModel::with_default_metric(&m).unwrap();
    let bd = Bidegree::new(2, 1);
    let lap_dd = h.op_matrix(Op::LapDelbar, bd).unwrap();
    let lap_d = h.op_matrix(Op::LapDel, bd).unwrap();
    let g = h.metric();
    for c in 0..linalg::kernel(&lap_dd, linalg::RANK_TOL).ncols() {
        let v = h.form(&linalg::kernel(&lap_dd, linalg::RANK_TOL).column(c).into_owned(), bd);
        if !g.lambda(&v).is_zero(1e-10) {
            continue;
        }
        assert!((&lap_d * h.coords(&v, bd)).norm() < 1e-9);
        assert!(m.d(&v).is_zero(1e-9));
    }
}

#[test]
fn n0_kernels_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = HermitianMetric::random(3, &mut rng);
    let h = HermitianModel::new(&iwasawa(), &g).unwrap();
    let bd = Bidegree::new(3, 0);
    let k2 = linalg::kernel(&h.op_matrix(Op::LapDelbar, bd).unwrap(), linalg::RANK_TOL);
    let k1 = linalg::kernel(&h.op_matrix(Op::LapDel, bd).unwrap(), linalg::RANK_TOL);
    assert!(linalg::subspace_distance(&k1, &k2, linalg::RANK_TOL) < 1e-9);
}
