//! Dual pairing ⟨T, ·⟩ between the quantized-function generators and words
//! in the vector-field generators, with the closed-form evaluation on the
//! elementary characteristic elements a_i and its extension to the spectral
//! variables.

use crate::hdalgebra::Hd;
use crate::kernel::scalar::{qbinomial, qint, qpow};
use crate::kernel::tensor::TensorOp;
use crate::kernel::Scalar;
use crate::ncalgebra::Gen;
use crate::rmatrix::{drinfeld_jimbo, RMatrixContext};

#[derive(Debug, thiserror::Error)]
pub enum PairingError {
    #[error("pairing is defined only for the standard Drinfeld–Jimbo context with η = q^{{1/n}}; twisted R-matrices are not supported")]
    Unsupported,
    #[error("{0}")]
    Other(String),
}

fn require_standard(ctx: &RMatrixContext) -> Result<(), PairingError> {
    if ctx.r.equals(&drinfeld_jimbo(ctx.n)) {
        Ok(())
    } else {
        Err(PairingError::Unsupported)
    }
}

/// ⟨T₁, L₂⟩ = η^{−2} q^{n − 1/n} R² = q^{n − 3/n} R² with η = q^{1/n}.
pub fn pair_t_l(ctx: &RMatrixContext) -> Result<TensorOp, PairingError> {
    require_standard(ctx)?;
    let n = ctx.n as i32;
    let scale = Scalar::p_pow(n * n - 3);
    Ok(ctx.r.compose(&ctx.r).map_entries(|s| s.mul(&scale)))
}

/// Slice matrix of the pairing tensor at the L-entry (k, l):
/// M(k,l)^i_j = ⟨T^i_j, L^k_l⟩ (all indices 1-based).
fn slice(ctx: &RMatrixContext, g: &TensorOp, k: usize, l: usize) -> Vec<Vec<Scalar>> {
    let n = ctx.dim();
    (0..n)
        .map(|i| (0..n).map(|j| g.at(i * n + (k - 1), j * n + (l - 1)).clone()).collect())
        .collect()
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for k in 0..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn identity_mat(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

/// ⟨T, L^{k₁}_{l₁}…L^{k_m}_{l_m}⟩ via the coproduct
/// ⟨T^i_j, xy⟩ = Σ_s ⟨T^i_s, x⟩⟨T^s_j, y⟩: the ordered matrix product of the
/// slice matrices. The empty word pairs to the counit, i.e. the identity.
pub fn pair_t_word(
    ctx: &RMatrixContext,
    word: &[(usize, usize)],
) -> Result<Vec<Vec<Scalar>>, PairingError> {
    let g = pair_t_l(ctx)?;
    let mut acc = identity_mat(ctx.dim());
    for &(k, l) in word {
        if k == 0 || l == 0 || k > ctx.dim() || l > ctx.dim() {
            return Err(PairingError::Other(format!("L-entry ({k},{l}) out of range")));
        }
        acc = mat_mul(&acc, &slice(ctx, &g, k, l));
    }
    Ok(acc)
}

/// Closed-form scalar of ⟨T, a_i⟩:
/// q^{−3i/n}·n_q^{−1}·binom(n,i)_q·{n_q + q^{n+1} − q^{n−2i+1}}.
pub fn pair_t_ai_closed_form(n: usize, i: usize) -> Scalar {
    let brace = qint(n, n as i64)
        .add(&qpow(n, n as i32 + 1))
        .sub(&qpow(n, n as i32 - 2 * i as i32 + 1));
    Scalar::p_pow(-3 * i as i32)
        .mul(&qint(n, n as i64).inv())
        .mul(&qbinomial(n, n as i64, i as i64))
        .mul(&brace)
}

/// ⟨T, a_i⟩: expands a_i into L-words via the Heisenberg-double engine,
/// applies `pair_t_word` by linearity, asserts the result is a scalar
/// multiple of I and matches the closed form, and returns the matrix.
pub fn pair_t_ai(ctx: &RMatrixContext, i: usize) -> Result<Vec<Vec<Scalar>>, PairingError> {
    require_standard(ctx)?;
    if i == 0 || i > ctx.n {
        return Err(PairingError::Other(format!("need 1 <= i <= n, got {i}")));
    }
    let dim = ctx.dim();
    let hd = Hd::new(ctx.clone());
    let ai = hd
        .elementary_symmetric(i)
        .map_err(|e| PairingError::Other(format!("a_{i} expansion failed: {e}")))?;
    let mut acc: Vec<Vec<Scalar>> =
        (0..dim).map(|_| (0..dim).map(|_| Scalar::zero()).collect()).collect();
    for (word, coeff) in ai.terms() {
        let mut entries = Vec::new();
        for g in &word.0 {
            match g {
                Gen::L(k, l) => entries.push((*k as usize, *l as usize)),
                other => {
                    return Err(PairingError::Other(format!(
                        "a_{i} expansion contains a non-L generator {other:?}"
                    )))
                }
            }
        }
        let m = pair_t_word(ctx, &entries)?;
        for r in 0..dim {
            for c in 0..dim {
                acc[r][c] = acc[r][c].add(&m[r][c].mul(coeff));
            }
        }
    }
    // Prop-form sanity: the result must be scalar before comparing scalars.
    for r in 0..dim {
        for c in 0..dim {
            if r != c && !acc[r][c].is_zero() {
                return Err(PairingError::Other(format!(
                    "⟨T, a_{i}⟩ has a nonzero off-diagonal entry at ({r},{c})"
                )));
            }
        }
    }
    let expect = pair_t_ai_closed_form(ctx.n, i);
    for r in 0..dim {
        if !acc[r][r].sub(&expect).is_zero() {
            return Err(PairingError::Other(format!(
                "⟨T, a_{i}⟩ diagonal mismatch at {r}: {} vs closed form {}",
                acc[r][r], expect
            )));
        }
    }
    Ok(acc)
}

/// Pairing scalar of the spectral variable μ_α:
/// ⟨T, μ_α⟩ = q^{2α + 2δ_{αn} − n − 3/n − 1}·I.
pub fn mu_pairing_scalar(n: usize, alpha: usize) -> Scalar {
    let delta = if alpha == n { 1 } else { 0 };
    Scalar::p_pow(n as i32 * (2 * alpha as i32 + 2 * delta - n as i32 - 1) - 3)
}

fn elementary_symmetric(values: &[Scalar], i: usize) -> Scalar {
    let n = values.len();
    let mut acc = Scalar::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != i {
            continue;
        }
        let mut prod = Scalar::one();
        for (b, v) in values.iter().enumerate() {
            if mask & (1 << b) != 0 {
                prod = prod.mul(v);
            }
        }
        acc = acc.add(&prod);
    }
    acc
}

/// Consistency of the spectral-variable extension: with
/// s_α = ⟨T, μ_α⟩-scalar, e_i(s₁…s_n) must reproduce the a_i pairing scalar
/// for every i; the rescaled route s̃_α = q^{2α−n−1} must give
/// e_i(s̃) = binom(n,i)_q.
pub fn verify_mu_pairing(n: usize) -> Result<(), String> {
    let s: Vec<Scalar> = (1..=n).map(|a| mu_pairing_scalar(n, a)).collect();
    let s_tilde: Vec<Scalar> = (1..=n).map(|a| qpow(n, 2 * a as i32 - n as i32 - 1)).collect();
    for i in 1..=n {
        let ei = elementary_symmetric(&s, i);
        let expect = pair_t_ai_closed_form(n, i);
        if !ei.sub(&expect).is_zero() {
            return Err(format!("e_{i}(s) = {ei} does not match the a_{i} pairing {expect}"));
        }
        let ei_tilde = elementary_symmetric(&s_tilde, i);
        let expect_tilde = qbinomial(n, n as i64, i as i64);
        if !ei_tilde.sub(&expect_tilde).is_zero() {
            return Err(format!(
                "e_{i}(s̃) = {ei_tilde} does not match binom(n,{i})_q = {expect_tilde}"
            ));
        }
    }
    Ok(())
}
