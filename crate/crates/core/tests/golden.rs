//! Closed-form fixtures for the two-parameter model and the Chebyshev family.

use nlrpb::cryptoherm::{
    factorize_h, from_crypto, from_nlrpb, hermitize, spectral_expansions, verify_chwrt,
};
use nlrpb::linalg::{inverse, jacobi_eigh, residual_norm, spd_sqrt};
use nlrpb::models::{chebyshev_model, chebyshev_paper_normalization, two_param_model};
use nlrpb::pseudoboson::{build_ladders, build_metrics, commutator_defect, rescale, verify_axioms};
use nlrpb::{Matrix, Vector};

fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

fn r2() -> f64 {
    2f64.sqrt()
}

fn r3() -> f64 {
    3f64.sqrt()
}

fn cheb2_metric() -> Matrix {
    m(&[&[3.0, -r2()], &[-r2(), 6.0]]).scale(0.25)
}

fn h3() -> Matrix {
    m(&[&[r3(), r2(), 0.0], &[r2(), r3(), 1.0], &[0.0, 1.0, r3()]])
}

/// Listed N = 4 eigenvectors (all constants 1).
fn n4_listed() -> (Vec<Vector>, Vec<Vector>) {
    let s = (2.0 + r2()).sqrt();
    let phi = vec![
        [-r2() * s, r2() + 1.0, -s, 1.0],
        [1.0, -0.5 * r2() * s + 0.5 * s, -0.5 * r2(), 0.5 * s],
        [1.0, 0.5 * r2() * s - 0.5 * s, -0.5 * r2(), -0.5 * s],
        [r2() * s, r2() + 1.0, s, 1.0],
    ];
    let eta = vec![
        [-0.5 * r2() * s, r2() + 1.0, -s, 1.0],
        [1.0, -r2() * s + s, -r2(), s],
        [1.0, r2() * s - s, -r2(), -s],
        [0.5 * r2() * s, r2() + 1.0, s, 1.0],
    ];
    (
        phi.into_iter().map(Vector::from).collect(),
        eta.into_iter().map(Vector::from).collect(),
    )
}

/// Listed N = 5 ground-state pair.
fn n5_listed() -> (Vector, Vector) {
    let q = (10.0 + 2.0 * 5f64.sqrt()).sqrt();
    let r5 = 5f64.sqrt();
    let phi0 = Vector::from([
        1.0,
        -0.25 * q,
        0.25 + 0.25 * r5,
        q / 8.0 - q * r5 / 8.0,
        -0.25 + 0.25 * r5,
    ]);
    let eta0 = Vector::from([
        0.5 + 0.5 * r5,
        -0.25 * q - 0.25 * q * r5,
        1.5 + 0.5 * r5,
        -0.5 * q,
        1.0,
    ]);
    (phi0, eta0)
}

#[test]
fn two_param_ladders_are_a_and_b() {
    for (beta, delta) in [(2.0, -1.0), (1.0, -1.0), (0.5, -3.0), (-2.0, 0.7)] {
        let model = two_param_model(beta, delta).unwrap();
        let l = build_ladders(&model.system);
        assert!(
            residual_norm(&l.a, &model.a).unwrap() < 1e-12,
            "a for ({beta},{delta})"
        );
        assert!(
            residual_norm(&l.b, &model.b).unwrap() < 1e-12,
            "b for ({beta},{delta})"
        );
        assert!(verify_axioms(&model.system, &l).pass);
    }
}

#[test]
fn two_param_matrix_and_intertwining() {
    let (beta, delta) = (2.0, -1.0);
    let model = two_param_model(beta, delta).unwrap();
    // MS_Φ = S_Φ𝔐 with 𝔐 = Mᵀ
    let want_m = m(&[
        &[1.0 - delta / beta, delta - beta],
        &[1.0 / delta - 1.0 / beta, 1.0 - beta / delta],
    ]);
    assert!(residual_norm(&model.m, &want_m).unwrap() < 1e-15);
    let metrics = build_metrics(&model.system);
    let lhs = &model.m * &metrics.s_phi;
    let rhs = &metrics.s_phi * &model.m.transpose();
    assert!(residual_norm(&lhs, &rhs).unwrap() < 1e-12);

    let inv = inverse(&metrics.s_phi).unwrap();
    assert!(residual_norm(&inv, &Matrix::from_diag(&[0.5, 1.0])).unwrap() < 1e-14);

    assert!(
        verify_chwrt(&model.m, &Matrix::from_diag(&[0.5, 1.0]))
            .unwrap()
            .pass
    );

    let pair = from_nlrpb(&model.system).unwrap();
    assert!(residual_norm(&pair.h, &model.m).unwrap() < 1e-14);
    assert!(residual_norm(&pair.theta, &Matrix::from_diag(&[0.5, 1.0])).unwrap() < 1e-14);
}

#[test]
fn n2_family() {
    let sys = chebyshev_paper_normalization(2).unwrap();
    let metrics = build_metrics(&sys);
    assert!(residual_norm(&metrics.s_eta, &cheb2_metric()).unwrap() < 1e-15);

    let eig = jacobi_eigh(&metrics.s_eta).unwrap();
    let r17 = 17f64.sqrt();
    assert!((eig.eigenvalues[0] - (9.0 - r17) / 8.0).abs() < 1e-12);
    assert!((eig.eigenvalues[1] - (9.0 + r17) / 8.0).abs() < 1e-12);

    let root = spd_sqrt(&metrics.s_eta).unwrap();
    assert!(residual_norm(&(&root * &root), &metrics.s_eta).unwrap() < 1e-12);

    let pair = from_nlrpb(&sys).unwrap();
    let want_m = m(&[&[r2(), 2.0], &[1.0, r2()]]);
    assert!(residual_norm(&pair.h, &want_m).unwrap() < 1e-14);
    assert!(residual_norm(&pair.theta, &cheb2_metric()).unwrap() < 1e-15);

    let ex = spectral_expansions(&sys).unwrap();
    assert!(residual_norm(&ex.h_op, &want_m).unwrap() < 1e-14);
    assert!(residual_norm(&ex.h_dag, &want_m.transpose()).unwrap() < 1e-14);
}

#[test]
fn n2_from_crypto_recovers_listed_lines() {
    let listed = chebyshev_paper_normalization(2).unwrap();
    let want_m = m(&[&[r2(), 2.0], &[1.0, r2()]]);
    let (sys, ladders) = from_crypto(&want_m, &cheb2_metric()).unwrap();
    assert!((sys.eps()[1] - 2.0 * r2()).abs() < 1e-13);
    for k in 0..2 {
        assert!(sys.phi()[k].line_cosine(&listed.phi()[k]) > 1.0 - 1e-12);
        assert!(sys.eta()[k].line_cosine(&listed.eta()[k]) > 1.0 - 1e-12);
    }
    assert!(verify_axioms(&sys, &ladders).pass);
    // With Θ = S_η of the listed family, the recovered vectors coincide up to sign.
    for k in 0..2 {
        let p = &sys.phi()[k];
        let q = &listed.phi()[k];
        let diff = p.axpy(-1.0, q).norm().min(p.axpy(1.0, q).norm());
        assert!(diff < 1e-12, "level {k}: {diff}");
    }
}

#[test]
fn n2_uniform_construction_is_a_level_zero_rescale_of_the_listing() {
    let uniform = chebyshev_model(2).unwrap().system;
    let listed = chebyshev_paper_normalization(2).unwrap();
    let r = rescale(&uniform, &[r2(), 1.0]).unwrap();
    for k in 0..2 {
        assert!(r.phi()[k].axpy(-1.0, &listed.phi()[k]).norm() < 1e-15);
        assert!(r.eta()[k].axpy(-1.0, &listed.eta()[k]).norm() < 1e-15);
    }
}

#[test]
fn n3_family() {
    let sys = chebyshev_paper_normalization(3).unwrap();
    let metrics = build_metrics(&sys);
    assert!(residual_norm(&metrics.s_eta, &Matrix::from_diag(&[3.0, 6.0, 6.0])).unwrap() < 1e-14);

    let model = chebyshev_model(3).unwrap();
    let herm = hermitize(&model.m, &metrics.s_eta).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((herm.h[(i, j)] - h3()[(i, j)]).abs() < 1e-12);
        }
    }
    assert!((herm.spectrum[1] - r3()).abs() < 1e-13);
    assert!((herm.spectrum[2] - 2.0 * r3()).abs() < 1e-13);

    let l = build_ladders(&sys);
    let (a_t, b_t) = factorize_h(&sys, &l, &metrics.s_eta).unwrap();
    assert!(residual_norm(&(&b_t * &a_t), &h3()).unwrap() < 1e-12);
    // With Θ = S_η the transformed pair is an ordinary transpose pair.
    assert!(residual_norm(&b_t, &a_t.transpose()).unwrap() < 1e-12);
    // Another admissible metric of the same H breaks that.
    let other = build_metrics(&rescale(&sys, &[1.0, 2.0, 0.5]).unwrap()).s_eta;
    assert!(verify_chwrt(&model.m, &other).unwrap().pass);
    let (a_o, b_o) = factorize_h(&sys, &l, &other).unwrap();
    let h_other = hermitize(&model.m, &other).unwrap().h;
    assert!(residual_norm(&(&b_o * &a_o), &h_other).unwrap() < 1e-12);
    assert!(residual_norm(&b_o, &a_o.transpose()).unwrap() > 1e-3);

    let r = rescale(&sys, &[1.0; 3]).unwrap();
    assert_eq!(r, sys);
    // Same family from the uniform construction, rescaled by two at every level.
    let doubled = rescale(&model.system, &[2.0; 3]).unwrap();
    assert!(
        residual_norm(
            &build_metrics(&doubled).s_eta,
            &Matrix::from_diag(&[3.0, 6.0, 6.0])
        )
        .unwrap()
            < 1e-13
    );

    let gap_sq3 = r3();
    let b = &l.b;
    let raised0 = b * &sys.phi()[0];
    assert!(raised0.axpy(-gap_sq3.sqrt(), &sys.phi()[1]).norm() < 1e-13);
    let raised1 = b * &sys.phi()[1];
    assert!(raised1.axpy(-(2.0 * r3()).sqrt(), &sys.phi()[2]).norm() < 1e-13);

    let ex = spectral_expansions(&sys).unwrap();
    assert!(residual_norm(&ex.h, &h3()).unwrap() < 1e-12);
}

#[test]
fn n3_crypto_to_nlrpb_with_identity_metric_is_self_dual() {
    let (sys, _) = from_crypto(&h3(), &Matrix::identity(3)).unwrap();
    for k in 0..3 {
        assert!(sys.phi()[k].axpy(-1.0, &sys.eta()[k]).norm() < 1e-14);
    }
}

#[test]
fn n4_spectrum_and_listed_eigenvectors() {
    let model = chebyshev_model(4).unwrap();
    let s = (2.0 + r2()).sqrt();
    let alpha = [0.0, 2.0 - r2(), r2(), 2.0];
    for (e, a) in model.system.eps().iter().zip(alpha) {
        assert!((e - a * s).abs() < 1e-12);
    }
    assert!((model.m[(0, 0)] - s).abs() < 1e-15);
    let (phi, eta) = n4_listed();
    for k in 0..4 {
        assert!(
            model.system.phi()[k].line_cosine(&phi[k]) > 1.0 - 1e-12,
            "phi {k}"
        );
        assert!(
            model.system.eta()[k].line_cosine(&eta[k]) > 1.0 - 1e-12,
            "eta {k}"
        );
        let eps = model.system.eps()[k];
        assert!((&model.m * &phi[k]).axpy(-eps, &phi[k]).norm() < 1e-12);
        assert!((&model.m.transpose() * &eta[k]).axpy(-eps, &eta[k]).norm() < 1e-12);
    }
    let l = build_ladders(&model.system);
    let gap = (alpha[2] - alpha[1]) * s;
    assert!((gap - (2.0 * r2() - 2.0) * s).abs() < 1e-14);
    assert!(commutator_defect(&model.system, &l, 1).unwrap() < 1e-10);
}

#[test]
fn n5_spectrum_and_ground_state() {
    let model = chebyshev_model(5).unwrap();
    let listed = [0.0, 0.726542529, 1.902113032, 3.077683536, 3.804226065];
    for (e, want) in model.system.eps().iter().zip(listed) {
        assert!((e - want).abs() < 1e-8);
    }
    let (phi0, eta0) = n5_listed();
    assert!(model.system.phi()[0].line_cosine(&phi0) > 1.0 - 1e-12);
    assert!(model.system.eta()[0].line_cosine(&eta0) > 1.0 - 1e-12);
    let l = build_ladders(&model.system);
    let report = verify_axioms(&model.system, &l);
    assert!(report.pass);
    assert!(report.max_residual() < 1e-9);
}
