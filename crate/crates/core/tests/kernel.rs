//! Kernel-level tests: exact scalar field arithmetic, q-arithmetic, tensor
//! operator calculus, and the canonical text format.

use num_bigint::BigInt;
use proptest::prelude::*;
use qhd_core::kernel::{parse_scalar, qbinomial, qint, qpow, Scalar, TensorOp};

fn q(k: i32) -> Scalar {
    // Session n = 2 unless stated otherwise: q = p^2.
    qpow(2, k)
}

#[test]
fn qint_examples() {
    // qint(1) = 1 (definition at i = 1).
    assert!(qint(2, 1).is_one());
    // qint(2) = q + q^{-1} = p^n + p^{-n}.
    assert_eq!(qint(2, 2), q(1).add(&q(-1)));
    assert_eq!(qint(3, 2), qpow(3, 1).add(&qpow(3, -1)));
    // qint(0) = 0.
    assert!(qint(2, 0).is_zero());
    // Defining fraction: i_q (q - q^{-1}) = q^i - q^{-i}, for several i.
    for i in 1..=5i64 {
        let lhs = qint(2, i).mul(&q(1).sub(&q(-1)));
        let rhs = q(i as i32).sub(&q(-(i as i32)));
        assert_eq!(lhs, rhs, "qint({i})");
    }
}

#[test]
fn qbinomial_examples() {
    // qbinomial(2,1) = 2_q.
    assert_eq!(qbinomial(2, 2, 1), qint(2, 2));
    // Symmetry: (3 choose 1)_q = (3 choose 2)_q.
    assert_eq!(qbinomial(2, 3, 1), qbinomial(2, 3, 2));
    // (4 choose 2)_q = 4_q 3_q / (2_q 1_q), expanded by direct multiplication.
    let expect = qint(2, 4)
        .mul(&qint(2, 3))
        .div(&qint(2, 2).mul(&qint(2, 1)));
    assert_eq!(qbinomial(2, 4, 2), expect);
}

#[test]
#[should_panic(expected = "out of range")]
fn qbinomial_out_of_range() {
    let _ = qbinomial(2, 2, 3);
}

#[test]
fn scalar_normalization_is_canonical() {
    // (q^2 - 1)/(q - 1) reduces to q + 1 exactly.
    let qv = q(1);
    let a = qv.mul(&qv).sub(&Scalar::one());
    let b = qv.sub(&Scalar::one());
    assert_eq!(a.div(&b), qv.add(&Scalar::one()));
    // Laurent normalization: p^{-1}/(p^{-2}) = p.
    let c = Scalar::p_pow(-1).div(&Scalar::p_pow(-2));
    assert_eq!(c, Scalar::p_pow(1));
}

#[test]
fn scalar_eval_rational_points() {
    // Evaluate (p^2 + p^{-2}) at p = 3/5 → 9/25 + 25/9 = 706/225.
    let s = Scalar::p_pow(2).add(&Scalar::p_pow(-2));
    let mut pts: [Option<(BigInt, BigInt)>; 6] = Default::default();
    pts[0] = Some((BigInt::from(3), BigInt::from(5)));
    let v = s.eval(&pts);
    assert_eq!(v, Scalar::from_ratio(706, 225));
}

#[test]
fn nabla_shift_is_exact_monomial_substitution() {
    // GL-mode, n = 2: ∇^1(μ_1) = q^2 γ^{-2} μ_1, ∇^1(μ_2) = γ^{-2} μ_2.
    let m1 = Scalar::mu(1);
    let m2 = Scalar::mu(2);
    assert_eq!(
        m1.apply_nabla(1, 2, false),
        q(2).mul(&Scalar::gamma_pow(-2)).mul(&m1)
    );
    assert_eq!(m2.apply_nabla(1, 2, false), Scalar::gamma_pow(-2).mul(&m2));
    // SL-mode, n = 2: ∇^1(μ_1) = q μ_1, ∇^1(μ_2) = q^{-1} μ_2.
    assert_eq!(m1.apply_nabla(1, 2, true), q(1).mul(&m1));
    assert_eq!(m2.apply_nabla(1, 2, true), q(-1).mul(&m2));
    // Π_α ∇^α = id in SL-mode.
    let f = m1.add(&m2.inv()).mul(&q(3));
    let shifted = f.apply_nabla(1, 2, true).apply_nabla(2, 2, true);
    assert_eq!(shifted, f);
}

#[test]
fn canonical_text_round_trip() {
    let cases = [
        Scalar::zero(),
        Scalar::one(),
        Scalar::from_int(-7),
        q(3).sub(&q(-3)).div(&qint(2, 3)),
        Scalar::mu(1).mul(&Scalar::gamma_pow(-2)).add(&Scalar::from_ratio(2, 3)),
        Scalar::p_pow(-5).sub(&Scalar::mu(2).pow(4)),
    ];
    for s in &cases {
        let text = s.to_string();
        let back = parse_scalar(&text).expect("canonical text must parse");
        assert_eq!(&back, s, "round trip of {text}");
        // Canonical writer is stable: format(parse(format(s))) = format(s).
        assert_eq!(back.to_string(), text);
    }
}

#[test]
fn parse_rejects_malformed_input() {
    for bad in ["", "p^", "(p)/(0)", "p + ", "x", "2**p", "(p)/(q"] {
        assert!(parse_scalar(bad).is_err(), "should reject: {bad:?}");
    }
}

// ---------------------------------------------------------------------------
// TensorOp examples
// ---------------------------------------------------------------------------

#[test]
fn permutation_and_embed_examples() {
    let p = TensorOp::permutation(3);
    // embed_at(P,1,2) = P.
    assert!(p.embed_at(1, 2).equals(&p));
    // embed_at(P,1,3) maps e2⊗e1⊗e3 to e1⊗e2⊗e3.
    let p13 = p.embed_at(1, 3);
    assert!(p13.get(&[0, 1, 2], &[1, 0, 2]).is_one());
    // embed_pair(P,1,3,3) on e1⊗e2⊗e3 gives e3⊗e2⊗e1.
    let pp = p.embed_pair(1, 3, 3);
    assert!(pp.get(&[2, 1, 0], &[0, 1, 2]).is_one());
    // X_{i,i+1} = X_i.
    let x = TensorOp::permutation(2);
    assert!(x.embed_pair(2, 3, 4).equals(&x.embed_at(2, 4)));
    // X_{13} = P_1 X_{23} P_1 (conjugation identity).
    let x23 = x.embed_at(2, 3);
    let p1 = TensorOp::permutation(2).embed_at(1, 3);
    let conj = p1.compose(&x23).compose(&p1);
    assert!(x.embed_pair(1, 3, 3).equals(&conj));
}

#[test]
fn partial_trace_examples() {
    // Tr_2(I ⊗ I) = 2 I on one leg (dim 2).
    let id2 = TensorOp::identity(2, 2);
    let tr = id2.partial_trace(2);
    assert!(tr.equals(&TensorOp::identity(2, 1).scale(&Scalar::from_int(2))));
    // Tr_2 P = I.
    let p = TensorOp::permutation(3);
    assert!(p.partial_trace(2).equals(&TensorOp::identity(3, 1)));
    assert!(p.partial_trace(1).equals(&TensorOp::identity(3, 1)));
}

#[test]
fn inverse_and_rank() {
    let p = TensorOp::permutation(2);
    let pinv = p.inverse().unwrap();
    assert!(p.compose(&pinv).equals(&TensorOp::identity(2, 2)));
    assert_eq!(TensorOp::identity(2, 2).rank(), 4);
    assert_eq!(TensorOp::zeros(2, 2).rank(), 0);
}

#[test]
fn index_encoding_round_trips() {
    let t = TensorOp::zeros(3, 4);
    for idx in 0..t.side() {
        assert_eq!(t.encode(&t.decode(idx)), idx);
    }
    // Big-endian convention: leg 1 is the most significant digit.
    let t2 = TensorOp::zeros(3, 2);
    assert_eq!(t2.decode(5), vec![1, 2]);
}

// ---------------------------------------------------------------------------
// Property tests (structural invariants)
// ---------------------------------------------------------------------------

/// Small random scalars: Laurent monomial combinations of p, γ, μ1, μ2.
fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let term = (0usize..4, -3i32..4, -5i64..6).prop_map(|(v, e, c)| {
        let base = match v {
            0 => Scalar::p_pow(e),
            1 => Scalar::gamma_pow(e),
            2 => Scalar::mu_pow(1, e),
            _ => Scalar::mu_pow(2, e),
        };
        base.mul(&Scalar::from_int(c))
    });
    prop::collection::vec(term, 1..4).prop_map(|ts| {
        let mut acc = Scalar::zero();
        for t in ts {
            acc = acc.add(&t);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_division_round_trip(a in arb_scalar(), b in arb_scalar()) {
        prop_assume!(!b.is_zero());
        let r = a.div(&b).mul(&b);
        prop_assert_eq!(r, a);
    }

    #[test]
    fn field_ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn scalar_text_round_trip(a in arb_scalar()) {
        let parsed = parse_scalar(&a.to_string()).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn embed_respects_composition(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let mut rand_op = || {
            let mut t = TensorOp::zeros(2, 2);
            for r in 0..4 {
                for c in 0..4 {
                    let v: i64 = rng.gen_range(-3..4);
                    *t.at_mut(r, c) = Scalar::from_int(v);
                }
            }
            t
        };
        let x = rand_op();
        let y = rand_op();
        let lhs = x.compose(&y).embed_at(2, 3);
        let rhs = x.embed_at(2, 3).compose(&y.embed_at(2, 3));
        prop_assert!(lhs.equals(&rhs));
        // Distributivity spot check.
        let z = rand_op();
        let l2 = x.add(&y).compose(&z);
        let r2 = x.compose(&z).add(&y.compose(&z));
        prop_assert!(l2.equals(&r2));
    }

    #[test]
    fn partial_trace_cyclic_on_traced_leg(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let mut rand_1leg = || {
            let mut t = TensorOp::zeros(2, 1);
            for r in 0..2 {
                for c in 0..2 {
                    let v: i64 = rng.gen_range(-3..4);
                    *t.at_mut(r, c) = Scalar::from_int(v);
                }
            }
            t
        };
        // A, B act only on leg 2 of a 2-leg space.
        let a = rand_1leg().embed_block(2, 2);
        let b = rand_1leg().embed_block(2, 2);
        let lhs = a.compose(&b).partial_trace(2);
        let rhs = b.compose(&a).partial_trace(2);
        prop_assert!(lhs.equals(&rhs));
    }
}
