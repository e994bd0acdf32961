//! Dual-pairing suite: ⟨T, L⟩ tensor, word multiplicativity, the closed form
//! for ⟨T, a_i⟩, and the spectral-variable extension.

use qhd_core::kernel::scalar::{qbinomial, qpow};
use qhd_core::kernel::Scalar;
use qhd_core::pairing::{
    mu_pairing_scalar, pair_t_ai, pair_t_ai_closed_form, pair_t_l, pair_t_word, verify_mu_pairing,
};
use qhd_core::rmatrix::{drinfeld_jimbo, Mode, RMatrixContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn ctx(n: usize) -> RMatrixContext {
    RMatrixContext::new(n, drinfeld_jimbo(n), Mode::Gl, None).expect("standard context")
}

#[test]
fn pair_t_l_matches_hecke_square() {
    // R² = I + (q − q^{−1})R, so the pairing tensor is
    // q^{n−3/n}(I + (q−q^{−1})R) — a cross-check independent of composition.
    for n in [2usize, 3] {
        let c = ctx(n);
        let g = pair_t_l(&c).expect("pairing tensor");
        let lam = qpow(n, 1).sub(&qpow(n, -1));
        let scale = Scalar::p_pow((n * n) as i32 - 3);
        let alt = qhd_core::kernel::tensor::TensorOp::identity(n, 2)
            .add(&c.r.map_entries(|s| s.mul(&lam)))
            .map_entries(|s| s.mul(&scale));
        assert!(g.equals(&alt), "Hecke cross-check fails at n={n}");
    }
}

#[test]
fn twisted_context_is_rejected() {
    // A rescaled R-matrix is not the standard normalization.
    let c = ctx(2);
    let twisted = RMatrixContext::new(
        2,
        c.r.map_entries(|s| s.mul(&Scalar::from_int(2))),
        Mode::Gl,
        None,
    );
    if let Ok(t) = twisted {
        assert!(pair_t_l(&t).is_err());
    }
}

#[test]
fn empty_and_single_words() {
    let c = ctx(2);
    let id = pair_t_word(&c, &[]).expect("counit");
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { Scalar::one() } else { Scalar::zero() };
            assert!(id[i][j].sub(&expect).is_zero());
        }
    }
    // A single entry reproduces the corresponding slice of ⟨T₁, L₂⟩.
    let g = pair_t_l(&c).expect("tensor");
    let m = pair_t_word(&c, &[(1, 2)]).expect("single");
    for i in 0..2 {
        for j in 0..2 {
            assert!(m[i][j].sub(g.at(i * 2, j * 2 + 1)).is_zero());
        }
    }
}

#[test]
fn two_letter_word_matches_direct_coproduct() {
    // Independent oracle: the explicit double sum over the intermediate index.
    let c = ctx(2);
    let g = pair_t_l(&c).expect("tensor");
    let word = [(1usize, 1usize), (2, 1)];
    let m = pair_t_word(&c, &word).expect("word");
    for i in 0..2 {
        for j in 0..2 {
            let mut direct = Scalar::zero();
            for s in 0..2 {
                let first = g.at(i * 2 + (word[0].0 - 1), s * 2 + (word[0].1 - 1));
                let second = g.at(s * 2 + (word[1].0 - 1), j * 2 + (word[1].1 - 1));
                direct = direct.add(&first.mul(second));
            }
            assert!(m[i][j].sub(&direct).is_zero());
        }
    }
}

#[test]
fn word_pairing_is_multiplicative() {
    let c = ctx(2);
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for _ in 0..20 {
        let gen_word = |rng: &mut ChaCha20Rng| -> Vec<(usize, usize)> {
            let len = rng.gen_range(0..4);
            (0..len).map(|_| (rng.gen_range(1..=2), rng.gen_range(1..=2))).collect()
        };
        let u = gen_word(&mut rng);
        let v = gen_word(&mut rng);
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let mu = pair_t_word(&c, &u).expect("u");
        let mv = pair_t_word(&c, &v).expect("v");
        let muv = pair_t_word(&c, &uv).expect("uv");
        for i in 0..2 {
            for j in 0..2 {
                let mut prod = Scalar::zero();
                for s in 0..2 {
                    prod = prod.add(&mu[i][s].mul(&mv[s][j]));
                }
                assert!(muv[i][j].sub(&prod).is_zero(), "multiplicativity fails");
            }
        }
    }
}

#[test]
fn characteristic_element_pairings() {
    // n = 2, both i; n = 3, all i. pair_t_ai hard-fails internally on any
    // mismatch with the closed form, so success is the assertion.
    for i in 1..=2 {
        pair_t_ai(&ctx(2), i).expect("n=2");
    }
    for i in 1..=3 {
        pair_t_ai(&ctx(3), i).expect("n=3");
    }
    assert!(pair_t_ai(&ctx(2), 0).is_err());
    assert!(pair_t_ai(&ctx(2), 3).is_err());
}

#[test]
fn top_pairing_is_q_inverse() {
    // ⟨T, a_n⟩ = q^{−1}·I.
    for n in [2usize, 3] {
        let expect = qpow(n, -1);
        assert!(pair_t_ai_closed_form(n, n).sub(&expect).is_zero());
        let m = pair_t_ai(&ctx(n), n).expect("a_n");
        for r in 0..n {
            assert!(m[r][r].sub(&expect).is_zero());
        }
    }
}

#[test]
fn explicit_low_rank_closed_form() {
    // i = 1, n = 2: q^{−3/2}·2_q^{−1}·binom(2,1)_q·{2_q + q³ − q}.
    let two_q = qpow(2, 1).add(&qpow(2, -1));
    let expect = Scalar::p_pow(-3)
        .mul(&two_q.inv())
        .mul(&qbinomial(2, 2, 1))
        .mul(&two_q.add(&qpow(2, 3)).sub(&qpow(2, 1)));
    assert!(pair_t_ai_closed_form(2, 1).sub(&expect).is_zero());
}

#[test]
fn spectral_variable_extension() {
    verify_mu_pairing(2).expect("n=2");
    verify_mu_pairing(3).expect("n=3");
    // n = 2: s₁·s₂ = q^{−1}.
    let prod = mu_pairing_scalar(2, 1).mul(&mu_pairing_scalar(2, 2));
    assert!(prod.sub(&qpow(2, -1)).is_zero());
}
