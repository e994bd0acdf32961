//! Braid/Hecke representation layer: antisymmetrizer and symmetrizer towers,
//! GL_q(n)-type certification, Jucys–Murphy operators, the Υ reversal
//! operators, the ∗R construction, and the reversal-operator identities.

use crate::kernel::scalar::Scalar;
use crate::kernel::tensor::TensorOp;
use crate::rmatrix::{diff_witness, r_trace_with, RMatrixContext, Witness};

#[derive(Debug, thiserror::Error)]
pub enum HeckeError {
    #[error("vanishing q-integer at the evaluation point: {0}_q = 0")]
    VanishingQInt(i64),
    #[error("the two recursion forms of the projector tower disagree: {0}")]
    RecursionMismatch(Witness),
    #[error("projector is not idempotent: {0}")]
    NotIdempotent(Witness),
    #[error("identity fails: {0}: {1}")]
    IdentityFails(&'static str, Witness),
}

/// The Hecke parameter used by a projector tower: the antisymmetrizer uses q,
/// the symmetrizer the replacement q ↔ −q^{−1}, and the ∗R antisymmetrizer
/// the replacement q ↔ q^{−1}.
#[derive(Clone, Copy, Debug)]
pub enum QPar {
    Q,
    NegQInv,
    QInv,
}

impl QPar {
    fn pow(self, ctx: &RMatrixContext, e: i32) -> Scalar {
        match self {
            QPar::Q => ctx.qpow(e),
            QPar::QInv => ctx.qpow(-e),
            QPar::NegQInv => {
                let s = ctx.qpow(-e);
                if e % 2 == 0 {
                    s
                } else {
                    s.neg()
                }
            }
        }
    }

    /// The symmetric q-integer in the replaced parameter. i_{q^{−1}} = i_q and
    /// i_{−q^{−1}} = (−1)^{i−1} i_q.
    fn int(self, ctx: &RMatrixContext, i: i64) -> Scalar {
        let base = ctx.qint(i);
        match self {
            QPar::Q | QPar::QInv => base,
            QPar::NegQInv => {
                if (i - 1) % 2 == 0 {
                    base
                } else {
                    base.neg()
                }
            }
        }
    }
}

/// Build the projector tower A^{(1)}..A^{(k)} for the braid images of the
/// two-sided recursion, cross-checking the shifted recursion form at every
/// level (a mismatch is a hard error) and verifying idempotency.
pub fn projector_tower(
    ctx: &RMatrixContext,
    k: usize,
    r: &TensorOp,
    par: QPar,
) -> Result<Vec<TensorOp>, HeckeError> {
    let dim = r.dim();
    let mut tower: Vec<TensorOp> = vec![TensorOp::identity(dim, 1)];
    for level in 2..=k {
        let prev = &tower[level - 2];
        let coeff_int = par.int(ctx, level as i64);
        if coeff_int.is_zero() {
            return Err(HeckeError::VanishingQInt(level as i64));
        }
        let c = par.int(ctx, level as i64 - 1).div(&coeff_int);
        let mid = par
            .pow(ctx, level as i32 - 1)
            .div(&par.int(ctx, level as i64 - 1));
        let id = TensorOp::identity(dim, level);
        // Form 1: A^{(k)} = c · A^{(k−1)} (mid·1 − σ_{k−1}) A^{(k−1)}.
        let a_lo = prev.embed_block(1, level);
        let rk = r.embed_at(level - 1, level);
        let a1 = a_lo
            .compose(&id.scale(&mid).sub(&rk))
            .compose(&a_lo)
            .scale(&c);
        // Form 2 (shifted): A^{(k)} = c · A^{(k−1)↑1} (mid·1 − σ_1) A^{(k−1)↑1}.
        let a_hi = prev.embed_block(2, level);
        let r1 = r.embed_at(1, level);
        let a2 = a_hi
            .compose(&id.scale(&mid).sub(&r1))
            .compose(&a_hi)
            .scale(&c);
        if let Some(w) = diff_witness(&a1, &a2) {
            return Err(HeckeError::RecursionMismatch(w));
        }
        if let Some(w) = diff_witness(&a1.compose(&a1), &a1) {
            return Err(HeckeError::NotIdempotent(w));
        }
        tower.push(a1);
    }
    Ok(tower)
}

/// Antisymmetrizer A^{(k)} = ρ_R(a^{(k)}) on k legs.
pub fn antisymmetrizer(ctx: &RMatrixContext, k: usize) -> Result<TensorOp, HeckeError> {
    Ok(projector_tower(ctx, k, &ctx.r, QPar::Q)?.pop().unwrap())
}

/// Symmetrizer S^{(k)}: the antisymmetrizer recursion with q ↔ −q^{−1}.
pub fn symmetrizer(ctx: &RMatrixContext, k: usize) -> Result<TensorOp, HeckeError> {
    Ok(projector_tower(ctx, k, &ctx.r, QPar::NegQInv)?
        .pop()
        .unwrap())
}

/// GL_q(n)-type certification: A^{(n+1)} = 0 and rank A^{(n)} = 1 (exact rank
/// over the fraction field).
pub fn check_glqn(ctx: &RMatrixContext) -> Result<(), String> {
    let n = ctx.n;
    let a_n1 = antisymmetrizer(ctx, n + 1).map_err(|e| e.to_string())?;
    if !a_n1.is_zero() {
        return Err(format!("A^({}) != 0", n + 1));
    }
    let a_n = antisymmetrizer(ctx, n).map_err(|e| e.to_string())?;
    let rank = a_n.rank();
    if rank != 1 {
        return Err(format!("rank A^({n}) = {rank}, expected 1"));
    }
    Ok(())
}

/// Jucys–Murphy operators J_1..J_k and their product Z_k, all on k legs.
/// Pairwise commutativity of the J's is checked.
pub fn jucys_murphy(
    ctx: &RMatrixContext,
    k: usize,
) -> Result<(Vec<TensorOp>, TensorOp), HeckeError> {
    let dim = ctx.dim();
    let mut js: Vec<TensorOp> = vec![TensorOp::identity(dim, k)];
    for i in 1..k {
        let ri = ctx.r.embed_at(i, k);
        let next = ri.compose(js.last().unwrap()).compose(&ri);
        js.push(next);
    }
    for a in 0..js.len() {
        for b in a + 1..js.len() {
            let lhs = js[a].compose(&js[b]);
            let rhs = js[b].compose(&js[a]);
            if let Some(w) = diff_witness(&lhs, &rhs) {
                return Err(HeckeError::IdentityFails("Jucys-Murphy commutativity", w));
            }
        }
    }
    let mut z = TensorOp::identity(dim, k);
    for j in &js {
        z = z.compose(j);
    }
    Ok((js, z))
}

/// Reversal operator Υ^{(k)}_X for a 2-leg operator X:
/// Υ^{(1)} = I, Υ^{(k+1)} = (X_1…X_k) Υ^{(k)}; the equivalent right-handed
/// form Υ^{(k+1)} = Υ^{(k)} (X_k…X_1) is asserted.
pub fn upsilon(x: &TensorOp, k: usize) -> TensorOp {
    let dim = x.dim();
    let mut ups = TensorOp::identity(dim, 1);
    for level in 2..=k {
        let mut left = TensorOp::identity(dim, level);
        for i in 1..level {
            left = left.compose(&x.embed_at(i, level));
        }
        let mut right = TensorOp::identity(dim, level);
        for i in (1..level).rev() {
            right = right.compose(&x.embed_at(i, level));
        }
        let emb = ups.embed_block(1, level);
        let next = left.compose(&emb);
        let alt = emb.compose(&right);
        assert!(
            next.equals(&alt),
            "upsilon: the two recursion forms disagree at level {level}"
        );
        ups = next;
    }
    ups
}

/// ∗R = P R^{−1} P = (R_21)^{−1}, verified Hecke with swapped eigenvalues:
/// (∗R − q^{−1}I)(∗R + qI) = 0.
pub fn star_r(ctx: &RMatrixContext) -> Result<TensorOp, HeckeError> {
    let p = TensorOp::permutation(ctx.dim());
    let sr = p.compose(&ctx.r_inv).compose(&p);
    let id = TensorOp::identity(ctx.dim(), 2);
    let q = ctx.qpow(1);
    let lhs = sr
        .sub(&id.scale(&q.inv()))
        .compose(&sr.add(&id.scale(&q)));
    if let Some(w) = diff_witness(&lhs, &TensorOp::zeros(ctx.dim(), 2)) {
        return Err(HeckeError::IdentityFails("Hecke condition for *R", w));
    }
    Ok(sr)
}

/// ∗A^{(k)} = Υ^{(k)}_P A^{(k)} Υ^{(k)}_P, cross-checked against the direct
/// projector recursion for ∗R with q ↔ q^{−1}; also checks
/// ∗R_i · ∗A^{(k)} = −q · ∗A^{(k)}.
pub fn star_antisymmetrizer(ctx: &RMatrixContext, k: usize) -> Result<TensorOp, HeckeError> {
    let a_k = antisymmetrizer(ctx, k)?;
    let ups = upsilon(&TensorOp::permutation(ctx.dim()), k);
    let star_a = ups.compose(&a_k).compose(&ups);
    let sr = star_r(ctx)?;
    let direct = projector_tower(ctx, k, &sr, QPar::QInv)?.pop().unwrap();
    if let Some(w) = diff_witness(&star_a, &direct) {
        return Err(HeckeError::IdentityFails(
            "*A^(k): reversal vs direct recursion",
            w,
        ));
    }
    let neg_q = ctx.qpow(1).neg();
    for i in 1..k {
        let lhs = sr.embed_at(i, k).compose(&star_a);
        if let Some(w) = diff_witness(&lhs, &star_a.scale(&neg_q)) {
            return Err(HeckeError::IdentityFails("*R_i *A^(k) = -q *A^(k)", w));
        }
    }
    Ok(star_a)
}

/// One verified reversal-trace identity set; used by the CLI suite and the
/// acceptance gate.
pub struct TraceIdentityReport {
    pub theta_j_levels: Vec<usize>,
}

/// Reversal-trace operator identities:
/// * Theta-J: Tr_{R,(i+1..2i)} Υ^{(2i)}_R = (Υ^{(i)}_R)^4 = (J_1…J_i)^2,
/// * P-Theta: R_i Υ^{(k)}_P = Υ^{(k)}_P (PRP)_{k−i},
/// * M-Theta: M_i Υ^{(k)}_P = Υ^{(k)}_P M_{k−i+1} for random 1-leg M,
/// * CDR-R: D_{∗R} = (D_R)^{−1} and C_{∗R} = (C_R)^{−1} via skew_inverse(∗R).
pub fn check_trace_identities(ctx: &RMatrixContext, max_i: usize) -> Result<TraceIdentityReport, HeckeError> {
    let dim = ctx.dim();
    let mut levels = Vec::new();
    for i in 1..=max_i {
        let ups_2i = upsilon(&ctx.r, 2 * i);
        let lhs = ctx.r_trace_range(&ups_2i, i + 1, 2 * i);
        let ups_i = upsilon(&ctx.r, i);
        let rhs1 = ups_i.compose(&ups_i).compose(&ups_i).compose(&ups_i);
        let (js, _) = jucys_murphy(ctx, i)?;
        let mut jprod = TensorOp::identity(dim, i);
        for j in &js {
            jprod = jprod.compose(j);
        }
        let rhs2 = jprod.compose(&jprod);
        if let Some(w) = diff_witness(&lhs, &rhs1) {
            return Err(HeckeError::IdentityFails("Theta-J: trace vs Upsilon^4", w));
        }
        if let Some(w) = diff_witness(&rhs1, &rhs2) {
            return Err(HeckeError::IdentityFails("Theta-J: Upsilon^4 vs (J1..Ji)^2", w));
        }
        levels.push(i);
    }
    // P-Theta and M-Theta at k = 3.
    let k = 3;
    let p = TensorOp::permutation(dim);
    let ups_p = upsilon(&p, k);
    let prp = p.compose(&ctx.r).compose(&p);
    for i in 1..k {
        let lhs = ctx.r.embed_at(i, k).compose(&ups_p);
        let rhs = ups_p.compose(&prp.embed_at(k - i, k));
        if let Some(w) = diff_witness(&lhs, &rhs) {
            return Err(HeckeError::IdentityFails("P-Theta", w));
        }
    }
    // Deterministic "random" 1-leg fixture.
    let mut m = TensorOp::zeros(dim, 1);
    for r in 0..dim {
        for c in 0..dim {
            *m.at_mut(r, c) = Scalar::from_int((2 * r + 3 * c + 1) as i64);
        }
    }
    for i in 1..=k {
        let lhs = m.embed_block(i, k).compose(&ups_p);
        let rhs = ups_p.compose(&m.embed_block(k - i + 1, k));
        if let Some(w) = diff_witness(&lhs, &rhs) {
            return Err(HeckeError::IdentityFails("M-Theta", w));
        }
    }
    // CDR-R.
    let sr = star_r(ctx)?;
    let psi_star =
        crate::rmatrix::skew_inverse(&sr).map_err(|_| HeckeError::IdentityFails(
            "CDR-R: *R not skew invertible",
            Witness {
                row: vec![],
                col: vec![],
                lhs: Scalar::zero(),
                rhs: Scalar::zero(),
            },
        ))?;
    let d_star = crate::rmatrix::d_matrix(&psi_star);
    let c_star = crate::rmatrix::c_matrix(&psi_star);
    let d_inv = ctx.d.inverse().expect("D invertible");
    let c_inv = ctx.c.inverse().expect("C invertible");
    if let Some(w) = diff_witness(&d_star, &d_inv) {
        return Err(HeckeError::IdentityFails("CDR-R: D_*R = D_R^{-1}", w));
    }
    if let Some(w) = diff_witness(&c_star, &c_inv) {
        return Err(HeckeError::IdentityFails("CDR-R: C_*R = C_R^{-1}", w));
    }
    Ok(TraceIdentityReport {
        theta_j_levels: levels,
    })
}

/// SL partner construction with the full postcondition: builds R̃ via the
/// rmatrix layer, revalidates it as a context, and verifies O_{R̃} ∝ I.
pub fn sl_partner_checked(
    ctx: &RMatrixContext,
    n_diag: &TensorOp,
) -> Result<(TensorOp, RMatrixContext), String> {
    let a_n = antisymmetrizer(ctx, ctx.n).map_err(|e| e.to_string())?;
    let rt = crate::rmatrix::sl_partner(ctx, &a_n, n_diag).map_err(|e| e.to_string())?;
    let tilde = RMatrixContext::new(ctx.n, rt.clone(), ctx.mode, ctx.point.clone())
        .map_err(|e| e.to_string())?;
    let a_t = antisymmetrizer(&tilde, ctx.n).map_err(|e| e.to_string())?;
    let (o_t, _) = crate::rmatrix::o_matrix(&tilde, &a_t).map_err(|e| e.to_string())?;
    let id = TensorOp::identity(ctx.dim(), 1);
    if !crate::rmatrix::proportional(&o_t, &id) {
        return Err("O of the partner R-matrix is not scalar".into());
    }
    Ok((rt, tilde))
}

/// R-trace of an operator on `legs` legs over all legs, with the context's D.
pub fn full_r_trace(ctx: &RMatrixContext, y: &TensorOp) -> Scalar {
    let mut acc = y.clone();
    for leg in (1..=y.legs()).rev() {
        acc = r_trace_with(&ctx.d, &acc, leg);
    }
    acc.trace()
}
