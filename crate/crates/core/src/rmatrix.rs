//! Concrete GL_q(n)-type R-matrices and the operator data attached to a skew
//! invertible R-matrix: skew inverse Ψ, the weight matrices D and C, the
//! R-trace, and the O-matrix / SL-partner construction.

use crate::kernel::poly::NVARS;
use crate::kernel::scalar::{qbinomial, qfact, qint, qpow, Scalar};
use crate::kernel::tensor::{solve_multi, TensorError, TensorOp};
use num_bigint::BigInt;

/// Parameter regime: GL keeps γ as a free variable, SL substitutes γ = p
/// (γ^n = q).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Gl,
    Sl,
}

/// Optional rational evaluation point for the fast mode (Schwartz–Zippel):
/// slots follow the kernel variable layout (p, γ, μ1..μ4).
pub type EvalPoint = [Option<(BigInt, BigInt)>; NVARS];

/// Structured witness for a failed operator identity.
#[derive(Clone, Debug)]
pub struct Witness {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "entry ({:?},{:?}): {} != {}",
            self.row, self.col, self.lhs, self.rhs
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RMatrixError {
    #[error("n must be at least 2")]
    RankTooSmall,
    #[error("twist parameters must be nonzero")]
    ZeroTwist,
    #[error("Yang-Baxter equation fails: {0}")]
    YbeFails(Witness),
    #[error("Hecke condition fails: {0}")]
    HeckeFails(Witness),
    #[error("not skew invertible")]
    NotSkewInvertible,
    #[error("skew inverse fails its second defining identity: {0}")]
    PsiSecondIdentity(Witness),
    #[error("D/C postcondition fails: {0}")]
    DmatFails(Witness),
    #[error("sl_partner precondition fails: {0}")]
    PartnerPrecondition(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The fully validated R-matrix context used by every higher module.
#[derive(Clone)]
pub struct RMatrixContext {
    pub n: usize,
    pub mode: Mode,
    pub point: Option<EvalPoint>,
    pub r: TensorOp,
    pub r_inv: TensorOp,
    pub psi: TensorOp,
    pub d: TensorOp,
    pub c: TensorOp,
}

impl RMatrixContext {
    /// Validate an R-matrix (YBE + Hecke), compute its skew inverse and the
    /// D/C matrices, and verify their defining trace identities.
    pub fn new(
        n: usize,
        r: TensorOp,
        mode: Mode,
        point: Option<EvalPoint>,
    ) -> Result<Self, RMatrixError> {
        if n < 2 {
            return Err(RMatrixError::RankTooSmall);
        }
        let r = {
            let adapt = make_adapter(mode, &point);
            r.map_entries(&adapt)
        };
        check_ybe(&r).map_err(RMatrixError::YbeFails)?;
        let q = make_adapter(mode, &point)(&qpow(n, 1));
        check_hecke(&r, &q).map_err(RMatrixError::HeckeFails)?;
        let r_inv = r.inverse().map_err(|_| RMatrixError::NotSkewInvertible)?;
        let psi = skew_inverse(&r)?;
        let d = d_matrix(&psi);
        let c = c_matrix(&psi);
        // Postcondition (dmat1): Tr_2 R_12 D_2 = I_1 and Tr_1 C_1 R_12 = I_2.
        let i1 = TensorOp::identity(r.dim(), 1);
        let lhs1 = r.compose(&d.embed_block(2, 2)).partial_trace(2);
        if let Some(w) = diff_witness(&lhs1, &i1) {
            return Err(RMatrixError::DmatFails(w));
        }
        let lhs2 = c.embed_block(1, 2).compose(&r).partial_trace(1);
        if let Some(w) = diff_witness(&lhs2, &i1) {
            return Err(RMatrixError::DmatFails(w));
        }
        Ok(RMatrixContext {
            n,
            mode,
            point,
            r,
            r_inv,
            psi,
            d,
            c,
        })
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn sl_mode(&self) -> bool {
        self.mode == Mode::Sl
    }

    /// Adapt a symbolic scalar to this context: substitute γ = p in SL-mode
    /// and evaluate at the rational point in fast mode.
    pub fn scalar(&self, s: &Scalar) -> Scalar {
        make_adapter(self.mode, &self.point)(s)
    }

    pub fn qpow(&self, k: i32) -> Scalar {
        self.scalar(&qpow(self.n, k))
    }

    pub fn qint(&self, i: i64) -> Scalar {
        self.scalar(&qint(self.n, i))
    }

    pub fn qfact(&self, k: i64) -> Scalar {
        self.scalar(&qfact(self.n, k))
    }

    pub fn qbinomial(&self, m: i64, k: i64) -> Scalar {
        self.scalar(&qbinomial(self.n, m, k))
    }

    pub fn gamma_pow(&self, k: i32) -> Scalar {
        self.scalar(&Scalar::gamma_pow(k))
    }

    /// R-trace over leg i: Tr_(i)(D_i · Y).
    pub fn r_trace(&self, y: &TensorOp, leg: usize) -> TensorOp {
        r_trace_with(&self.d, y, leg)
    }

    /// R-trace over a consecutive range of legs, highest first.
    pub fn r_trace_range(&self, y: &TensorOp, from: usize, to: usize) -> TensorOp {
        let mut acc = y.clone();
        for leg in (from..=to).rev() {
            acc = self.r_trace(&acc, leg);
        }
        acc
    }
}

/// Make the scalar adapter for a (mode, point) pair.
pub fn make_adapter(mode: Mode, point: &Option<EvalPoint>) -> impl Fn(&Scalar) -> Scalar + '_ {
    move |s: &Scalar| {
        let mut s = s.clone();
        if mode == Mode::Sl {
            s = s.substitute_gamma_p();
        }
        if let Some(pt) = point {
            s = s.eval(pt);
        }
        s
    }
}

/// The standard Drinfeld–Jimbo R-matrix
/// R° = Σ q^{δ_ij} E_ij ⊗ E_ji + (q − q^{−1}) Σ_{i<j} E_ii ⊗ E_jj
/// (braid form, dim V = n), with symbolic q = p^n.
pub fn drinfeld_jimbo(n: usize) -> TensorOp {
    assert!(n >= 2, "drinfeld_jimbo requires n >= 2");
    let q = qpow(n, 1);
    let qq = q.sub(&qpow(n, -1));
    let mut r = TensorOp::zeros(n, 2);
    for i in 0..n {
        for j in 0..n {
            // E_ij ⊗ E_ji maps e_j ⊗ e_i to e_i ⊗ e_j: entry (row=(i,j), col=(j,i)).
            let coeff = if i == j { q.clone() } else { Scalar::one() };
            r.set(&[i, j], &[j, i], coeff);
            if i < j {
                r.set(&[i, j], &[i, j], qq.clone());
            }
        }
    }
    r
}

/// Multiparametric twist R^f = F R° F^{−1} with F = Σ f_ij E_ii ⊗ E_jj.
pub fn twist(r0: &TensorOp, f: &[Vec<Scalar>]) -> Result<TensorOp, RMatrixError> {
    let n = r0.dim();
    assert_eq!(f.len(), n);
    if f.iter().any(|row| row.iter().any(|v| v.is_zero())) {
        return Err(RMatrixError::ZeroTwist);
    }
    let mut fmat = TensorOp::zeros(n, 2);
    let mut finv = TensorOp::zeros(n, 2);
    for i in 0..n {
        for j in 0..n {
            fmat.set(&[i, j], &[i, j], f[i][j].clone());
            finv.set(&[i, j], &[i, j], f[i][j].inv());
        }
    }
    let rf = fmat.compose(r0).compose(&finv);
    check_ybe(&rf).map_err(RMatrixError::YbeFails)?;
    Ok(rf)
}

/// Braid-form Yang–Baxter equation R_1 R_2 R_1 = R_2 R_1 R_2 on three legs,
/// exact; returns the first violating entry on failure.
pub fn check_ybe(r: &TensorOp) -> Result<(), Witness> {
    let r1 = r.embed_at(1, 3);
    let r2 = r.embed_at(2, 3);
    let lhs = r1.compose(&r2).compose(&r1);
    let rhs = r2.compose(&r1).compose(&r2);
    match diff_witness(&lhs, &rhs) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Hecke condition (R − qI)(R + q^{−1}I) = 0, exact.
pub fn check_hecke(r: &TensorOp, q: &Scalar) -> Result<(), Witness> {
    let id = TensorOp::identity(r.dim(), 2);
    let lhs = r
        .sub(&id.scale(q))
        .compose(&r.add(&id.scale(&q.inv())));
    match diff_witness(&lhs, &TensorOp::zeros(r.dim(), 2)) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Skew inverse Ψ: the unique solution of Tr_2 R_12 Ψ_23 = P_13, verified to
/// also satisfy Tr_2 Ψ_12 R_23 = P_13. The defining equation decouples into a
/// single n²×n² linear system with n² right-hand sides.
pub fn skew_inverse(r: &TensorOp) -> Result<TensorOp, RMatrixError> {
    let n = r.dim();
    let nn = n * n;
    // Coefficient matrix M[(i1,j1),(m,k)] = R^{i1 k}_{j1 m}.
    let mut a = vec![vec![Scalar::zero(); nn]; nn];
    for i1 in 0..n {
        for j1 in 0..n {
            for m in 0..n {
                for k in 0..n {
                    a[i1 * n + j1][m * n + k] = r.get(&[i1, k], &[j1, m]).clone();
                }
            }
        }
    }
    // Right-hand sides indexed by (i3, j3): rhs[(i1,j1)][(i3,j3)] = δ^{i1}_{j3} δ^{i3}_{j1}.
    let mut b = vec![vec![Scalar::zero(); nn]; nn];
    for i1 in 0..n {
        for j1 in 0..n {
            b[i1 * n + j1][j1 * n + i1] = Scalar::one();
        }
    }
    let x = solve_multi(&a, &b).map_err(|_| RMatrixError::NotSkewInvertible)?;
    // x[(m,k)][(i3,j3)] = Ψ^{m i3}_{k j3}.
    let mut psi = TensorOp::zeros(n, 2);
    for m in 0..n {
        for k in 0..n {
            for i3 in 0..n {
                for j3 in 0..n {
                    psi.set(&[m, i3], &[k, j3], x[m * n + k][i3 * n + j3].clone());
                }
            }
        }
    }
    // Verify the second defining identity Tr_2 Ψ_12 R_23 = P_13: tracing out
    // leg 2 leaves a 2-leg operator on the legs (1,3), which must be P.
    let lhs = psi
        .embed_at(1, 3)
        .compose(&r.embed_at(2, 3))
        .partial_trace(2);
    if let Some(w) = diff_witness(&lhs, &TensorOp::permutation(n)) {
        return Err(RMatrixError::PsiSecondIdentity(w));
    }
    Ok(psi)
}

/// D_1 = Tr_2 Ψ_12.
pub fn d_matrix(psi: &TensorOp) -> TensorOp {
    psi.partial_trace(2)
}

/// C_2 = Tr_1 Ψ_12.
pub fn c_matrix(psi: &TensorOp) -> TensorOp {
    psi.partial_trace(1)
}

/// R-trace with an explicit weight matrix: Tr_(leg)(D_leg · Y).
pub fn r_trace_with(d: &TensorOp, y: &TensorOp, leg: usize) -> TensorOp {
    let dk = d.embed_block(leg, y.legs());
    dk.compose(y).partial_trace(leg)
}

/// The mutually inverse O-matrices of the GL_q(n) determinant theory:
/// O_1 = n_q Tr_{2..n+1}(P_1…P_n A^{(n)}),
/// (O^{−1})_1 = n_q Tr_{2..n+1}(A^{(n)} P_n…P_1),
/// where A^{(n)} acts on the first n of the n+1 legs.
pub fn o_matrix(ctx: &RMatrixContext, a_n: &TensorOp) -> Result<(TensorOp, TensorOp), RMatrixError> {
    let n = ctx.n;
    let total = n + 1;
    let p = TensorOp::permutation(ctx.dim());
    let mut pprod = TensorOp::identity(ctx.dim(), total);
    for i in 1..=n {
        pprod = pprod.compose(&p.embed_at(i, total));
    }
    let a_emb = a_n.embed_block(2, total);
    let nq = ctx.qint(n as i64);
    let mut o = pprod.compose(&a_emb);
    let mut o_inv = {
        let mut pp = TensorOp::identity(ctx.dim(), total);
        for i in (1..=n).rev() {
            pp = pp.compose(&p.embed_at(i, total));
        }
        a_emb.compose(&pp)
    };
    for leg in (2..=total).rev() {
        o = o.partial_trace(leg);
        o_inv = o_inv.partial_trace(leg);
    }
    o = o.scale(&nq);
    o_inv = o_inv.scale(&nq);
    // Postcondition: O · O^{−1} = I.
    let id = TensorOp::identity(ctx.dim(), 1);
    if let Some(w) = diff_witness(&o.compose(&o_inv), &id) {
        return Err(RMatrixError::DmatFails(w));
    }
    Ok((o, o_inv))
}

/// SL partner R̃ = N_1 R N_1^{−1} for an N with R_12 N_1 N_2 = N_1 N_2 R_12
/// and N^n ∝ O_R. Verifies both preconditions, the alternative form
/// R̃ = N_2^{−1} R N_2, and that O_{R̃} is proportional to the identity.
pub fn sl_partner(
    ctx: &RMatrixContext,
    a_n: &TensorOp,
    n_diag: &TensorOp,
) -> Result<TensorOp, RMatrixError> {
    let n = ctx.n;
    assert_eq!(n_diag.legs(), 1);
    let n1 = n_diag.embed_block(1, 2);
    let n2 = n_diag.embed_block(2, 2);
    let n1n2 = n1.compose(&n2);
    if !ctx.r.compose(&n1n2).equals(&n1n2.compose(&ctx.r)) {
        return Err(RMatrixError::PartnerPrecondition(
            "R N1 N2 != N1 N2 R".into(),
        ));
    }
    // N^n ∝ O_R: check proportionality entrywise.
    let (o, _) = o_matrix(ctx, a_n)?;
    let mut npow = TensorOp::identity(ctx.dim(), 1);
    for _ in 0..n {
        npow = npow.compose(n_diag);
    }
    if !proportional(&npow, &o) {
        return Err(RMatrixError::PartnerPrecondition("N^n not ∝ O_R".into()));
    }
    let n1_inv = n_diag.inverse()?.embed_block(1, 2);
    let rt = n1.compose(&ctx.r).compose(&n1_inv);
    let n2_inv = n_diag.inverse()?.embed_block(2, 2);
    let alt = n2_inv.compose(&ctx.r).compose(&n2);
    if let Some(w) = diff_witness(&rt, &alt) {
        return Err(RMatrixError::PartnerPrecondition(format!(
            "N1 R N1^-1 != N2^-1 R N2: {w}"
        )));
    }
    Ok(rt)
}

/// Is a = λ·b for some scalar λ (both nonzero)?
pub fn proportional(a: &TensorOp, b: &TensorOp) -> bool {
    let mut lambda: Option<Scalar> = None;
    for r in 0..a.side() {
        for c in 0..a.side() {
            let (x, y) = (a.at(r, c), b.at(r, c));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let ratio = x.div(y);
                    match &lambda {
                        None => lambda = Some(ratio),
                        Some(l) => {
                            if *l != ratio {
                                return false;
                            }
                        }
                    }
                }
                _ => return false,
            }
        }
    }
    lambda.is_some()
}

/// First entry where two operators differ, as a structured witness.
pub fn diff_witness(lhs: &TensorOp, rhs: &TensorOp) -> Option<Witness> {
    lhs.first_difference(rhs).map(|(row, col, l, r)| Witness {
        row,
        col,
        lhs: l,
        rhs: r,
    })
}
