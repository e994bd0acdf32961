//! Evolution-operator suite: the theta-series solution and its coefficient
//! recursion, the Gaussian solution's exact exponent identity, the modular
//! relation between the two, and the Jacobi triple product at n = 2.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::One;
use qhd_core::evolution::{
    check_gl_consistency, check_recursion, check_sl_evolution_theta1,
    check_sl_evolution_theta1_alpha, check_sl_evolution_theta2, gaussian_theta2, jacobi_check,
    jacobi_check_exact, modular_check, suggested_cutoff, theta_coefficients, ExpPoly, LatticeForm,
};

#[test]
fn lattice_forms_are_consistent() {
    for n in 2..=4 {
        let form = LatticeForm::new(n).expect("lattice form");
        // A* = nI − J restricted to the first n−1 coordinates.
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let expect = if i == j { n as i64 - 1 } else { -1 };
                assert_eq!(form.a_star[i][j], expect);
                assert_eq!(form.a[i][j], if i == j { 2 } else { 1 });
            }
        }
    }
    assert!(LatticeForm::new(1).is_err());
}

#[test]
fn theta_coefficients_match_known_exponents() {
    // n = 2: c(k) = q^{k(k+1)/2} = p^{k(k+1)}.
    let s2 = theta_coefficients(2, 5).expect("series");
    for k in -5..=5i64 {
        assert_eq!(s2.exponent(&[k]), Some(k * (k + 1)));
    }
    assert_eq!(s2.exponent(&[0]), Some(0));
    // n = 3, k = (1,0): e = A*_{11} + 1 = 3, i.e. c = q^{3/3} = q.
    let s3 = theta_coefficients(3, 3).expect("series");
    assert_eq!(s3.exponent(&[1, 0]), Some(3));
}

#[test]
fn recursion_holds_to_cutoff() {
    let s2 = theta_coefficients(2, 5).expect("series");
    let rep = check_recursion(&s2).expect("recursion n=2");
    assert!(rep.checked > 0);
    let s3 = theta_coefficients(3, 3).expect("series");
    let rep3 = check_recursion(&s3).expect("recursion n=3");
    assert!(rep3.checked > 0);
    assert!(rep3.boundary_skipped > 0);
}

#[test]
fn evolution_equations_for_theta_series() {
    let s2 = theta_coefficients(2, 5).expect("series");
    check_sl_evolution_theta1(&s2).expect("n=2");
    let s3 = theta_coefficients(3, 3).expect("series");
    check_sl_evolution_theta1(&s3).expect("n=3");
    assert!(check_sl_evolution_theta1_alpha(&s2, 0).is_err());
    assert!(check_sl_evolution_theta1_alpha(&s2, 2).is_err());
}

#[test]
fn quadratic_form_is_permutation_invariant_n3() {
    let form = LatticeForm::new(3).expect("form");
    for k in [[1i64, 2], [3, -1], [-2, -2], [0, 4]] {
        let swapped = [k[1], k[0]];
        assert_eq!(form.quad_star(&k), form.quad_star(&swapped));
    }
}

#[test]
fn gaussian_exponent_examples() {
    // n = 2: exponent/(πi) = −z₁²/τ.
    let g2 = gaussian_theta2(2).expect("n=2");
    let expect = ExpPoly::term(1, vec![2], -1, Rational64::from_integer(-1));
    assert_eq!(g2.poly, expect);
    // n = 3: the off-diagonal coefficient of −A/(2τ) is −1/(2τ), and the
    // symmetric pair sums to −1/τ on the z₁z₂ monomial.
    let g3 = gaussian_theta2(3).expect("n=3");
    let cross = g3
        .poly
        .terms()
        .find(|((zd, _), _)| zd == &vec![1, 1])
        .map(|(_, c)| *c)
        .expect("cross term");
    assert_eq!(cross, Rational64::from_integer(-1));
}

#[test]
fn gaussian_satisfies_evolution_equations() {
    check_sl_evolution_theta2(2).expect("n=2");
    check_sl_evolution_theta2(3).expect("n=3");
}

#[test]
fn sign_flipped_shift_fails() {
    // A wrong-sign shift must break the exponent identity at n = 2.
    let g = gaussian_theta2(2).expect("n=2");
    let shifted = g.poly.shift_z(&[Rational64::from_integer(-1)]);
    let mut with_log = shifted;
    with_log.add_term(vec![0], 1, Rational64::one());
    with_log.add_term(vec![1], 0, Rational64::from_integer(2));
    assert_ne!(with_log, g.poly);
}

#[test]
fn modular_relation_numerical() {
    let tau2 = Complex64::new(0.0, 0.8);
    let k2 = suggested_cutoff(2, tau2).expect("cutoff");
    let z2 = [Complex64::new(0.1, 0.05)];
    let err2 = modular_check(2, tau2, &z2, k2).expect("n=2");
    assert!(err2 < 1e-9, "n=2 relative error {err2}");

    let tau3 = Complex64::new(0.0, 1.0);
    let k3 = suggested_cutoff(3, tau3).expect("cutoff");
    let z3 = [Complex64::new(0.05, 0.02), Complex64::new(-0.03, 0.01)];
    let err3 = modular_check(3, tau3, &z3, k3).expect("n=3");
    assert!(err3 < 1e-8, "n=3 relative error {err3}");

    // Symmetric point z = 0: both sides real-positive.
    let err0 = modular_check(2, tau2, &[Complex64::new(0.0, 0.0)], k2).expect("z=0");
    assert!(err0 < 1e-10, "z=0 relative error {err0}");

    // Tail stability: doubling the cutoff changes nothing at this precision.
    let doubled = modular_check(2, tau2, &z2, 2 * k2).expect("doubled");
    assert!((err2 - doubled).abs() < 1e-12, "tail unstable: {err2} vs {doubled}");
}

#[test]
fn modular_check_rejects_bad_tau() {
    assert!(modular_check(2, Complex64::new(0.5, 0.0), &[Complex64::new(0.0, 0.0)], 5).is_err());
    assert!(suggested_cutoff(2, Complex64::new(0.5, -1.0)).is_err());
}

#[test]
fn jacobi_triple_product() {
    let gap = jacobi_check(10, 0.3).expect("float");
    assert!(gap < 1e-12, "float gap {gap}");
    // q = 0: both sides degenerate to 1 + 1/μ₁ exactly.
    let gap0 = jacobi_check(3, 0.0).expect("q=0");
    assert_eq!(gap0, 0.0);
    jacobi_check_exact(20).expect("exact to q^20");
    assert!(jacobi_check(5, 1.0).is_err());
}

#[test]
fn gl_consistency() {
    check_gl_consistency(2).expect("n=2");
    check_gl_consistency(3).expect("n=3");
}
