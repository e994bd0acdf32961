//! SL-type evolution equations and their two particular solutions: the
//! theta series over the dual root lattice A*_{n-1} (convergent for |q| < 1)
//! and the Gaussian in logarithmic variables (valid for arbitrary q),
//! together with the modular functional relation connecting them.
//!
//! Exact arithmetic throughout, except for the float lattice-sum evaluation
//! of the modular relation and the float variant of the Jacobi product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::kernel::Scalar;

/// Gram data for the root lattice A_{n-1} and its dual A*_{n-1}:
/// A*_{αβ} = n·X_{αβ} = n·δ_{αβ} − 1 on the (n−1)-dimensional index range,
/// A_{αβ} = δ_{αβ} + 1, and the n×n shift form X_{αβ} = δ_{αβ} − 1/n.
pub struct LatticeForm {
    pub n: usize,
    /// (n−1)×(n−1), positive definite.
    pub a_star: Vec<Vec<i64>>,
    /// (n−1)×(n−1).
    pub a: Vec<Vec<i64>>,
    /// n×n, rows and columns sum to zero.
    pub x: Vec<Vec<Rational64>>,
}

impl LatticeForm {
    pub fn new(n: usize) -> Result<LatticeForm, String> {
        if n < 2 {
            return Err(format!("lattice forms need n >= 2, got {n}"));
        }
        let m = n - 1;
        let a_star: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { n as i64 - 1 } else { -1 }).collect())
            .collect();
        let a: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 2 } else { 1 }).collect())
            .collect();
        let x: Vec<Vec<Rational64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { Rational64::one() } else { Rational64::zero() };
                        d - Rational64::new(1, n as i64)
                    })
                    .collect()
            })
            .collect();
        // Positive definiteness of A*: every leading principal minor > 0.
        for k in 1..=m {
            let minor = det_rational(&a_star, k);
            if minor <= Rational64::zero() {
                return Err(format!("A* leading minor {k} is not positive: {minor}"));
            }
        }
        // Period-matrix consistency Ω·Ω^{-1} = I with Ω = (2τ/n)A* and
        // Ω^{-1} = A/(2τ) amounts to A*·A = n·I.
        for i in 0..m {
            for j in 0..m {
                let mut s = 0i64;
                for k in 0..m {
                    s += a_star[i][k] * a[k][j];
                }
                let expect = if i == j { n as i64 } else { 0 };
                if s != expect {
                    return Err(format!("A*·A != n·I at ({i},{j}): {s}"));
                }
            }
        }
        Ok(LatticeForm { n, a_star, a, x })
    }

    /// (k⃗, A* k⃗) for k⃗ ∈ ℤ^{n−1}.
    pub fn quad_star(&self, k: &[i64]) -> i64 {
        let m = self.n - 1;
        let mut s = 0;
        for i in 0..m {
            for j in 0..m {
                s += k[i] * self.a_star[i][j] * k[j];
            }
        }
        s
    }
}

fn det_rational(mat: &[Vec<i64>], k: usize) -> Rational64 {
    let mut m: Vec<Vec<Rational64>> = (0..k)
        .map(|i| (0..k).map(|j| Rational64::from_integer(mat[i][j])).collect())
        .collect();
    let mut det = Rational64::one();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { return Rational64::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..k {
            let f = m[r][col] * inv;
            for c in col..k {
                let sub = f * m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Truncated theta series Θ^(1): the coefficient of μ₁^{k₁}…μ_{n−1}^{k_{n−1}}
/// is the exact p-power p^{e(k⃗)} with e(k⃗) = (k⃗,A*k⃗) + (1⃗,k⃗), i.e.
/// c(k⃗) = q^{e(k⃗)/n}. The dependent variable μ_n is eliminated via
/// a_n = ∏μ_α = q^{−1}.
pub struct ThetaSeries {
    pub n: usize,
    pub cutoff: i64,
    pub form: LatticeForm,
    coeffs: BTreeMap<Vec<i64>, i64>,
}

impl ThetaSeries {
    /// p-exponent of the stored coefficient at lattice point k⃗.
    pub fn exponent(&self, k: &[i64]) -> Option<i64> {
        self.coeffs.get(k).copied()
    }

    pub fn coefficient(&self, k: &[i64]) -> Option<Scalar> {
        self.exponent(k).map(|e| Scalar::p_pow(e as i32))
    }

    pub fn points(&self) -> impl Iterator<Item = (&Vec<i64>, &i64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn lattice_box(dim: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for stem in &out {
            for v in -cutoff..=cutoff {
                let mut k = stem.clone();
                k.push(v);
                next.push(k);
            }
        }
        out = next;
    }
    out
}

/// Fill the coefficient table over the cube ‖k⃗‖∞ ≤ K. Panics via the
/// self-check if the normalization c(0⃗) = 1 were ever violated.
pub fn theta_coefficients(n: usize, cutoff: i64) -> Result<ThetaSeries, String> {
    if cutoff < 0 {
        return Err(format!("cutoff must be >= 0, got {cutoff}"));
    }
    let form = LatticeForm::new(n)?;
    let mut coeffs = BTreeMap::new();
    for k in lattice_box(n - 1, cutoff) {
        let e = form.quad_star(&k) + k.iter().sum::<i64>();
        coeffs.insert(k, e);
    }
    let series = ThetaSeries { n, cutoff, form, coeffs };
    if series.exponent(&vec![0; n - 1]) != Some(0) {
        return Err("normalization c(0) = 1 violated".into());
    }
    Ok(series)
}

#[derive(Debug, PartialEq, Eq)]
pub struct RecursionReport {
    pub checked: usize,
    pub boundary_skipped: usize,
}

/// Coefficient recursion c(k⃗+ε⃗_α) = q^{1 + (2/n)Σ_β A*_{αβ}k_β}·c(k⃗),
/// verified in exact p-exponent arithmetic for every interior lattice point.
pub fn check_recursion(series: &ThetaSeries) -> Result<RecursionReport, String> {
    let n = series.n;
    let m = n - 1;
    let mut checked = 0;
    let mut skipped = 0;
    for (k, &e) in series.points() {
        for alpha in 0..m {
            let mut shifted = k.clone();
            shifted[alpha] += 1;
            let Some(e_next) = series.exponent(&shifted) else {
                skipped += 1;
                continue;
            };
            let step: i64 = n as i64
                + 2 * (0..m).map(|b| series.form.a_star[alpha][b] * k[b]).sum::<i64>();
            if e_next != e + step {
                return Err(format!(
                    "recursion fails at k={k:?}, alpha={}: exponent {e_next} != {} + {step}",
                    alpha + 1,
                    e
                ));
            }
            checked += 1;
        }
    }
    Ok(RecursionReport { checked, boundary_skipped: skipped })
}

/// One evolution equation q·μ_α·Θ(∇^α μ) = Θ(μ) checked as a formal-series
/// identity by monomial re-indexing, with the scalars assembled in the exact
/// field arithmetic (an oracle independent of `check_recursion`).
pub fn check_sl_evolution_theta1_alpha(series: &ThetaSeries, alpha: usize) -> Result<(), String> {
    let n = series.n;
    let m = n - 1;
    if alpha == 0 || alpha > m {
        return Err(format!("alpha must lie in 1..={m}, got {alpha}"));
    }
    let a = alpha - 1;
    for (k, &e) in series.points() {
        // q·c(k⃗)·∏_β (q^{2X_{αβ}})^{k_β} lands on the monomial μ^{k⃗+ε⃗_α};
        // q^{2X_{αβ}} = p^{2A*_{αβ}}.
        let mut lhs = Scalar::p_pow(n as i32).mul(&Scalar::p_pow(e as i32));
        for b in 0..m {
            lhs = lhs.mul(&Scalar::p_pow(2 * series.form.a_star[a][b] as i32).pow(k[b]));
        }
        let mut target = k.clone();
        target[a] += 1;
        let Some(rhs) = series.coefficient(&target) else { continue };
        if !lhs.sub(&rhs).is_zero() {
            return Err(format!("evolution equation fails at k={k:?}, alpha={alpha}"));
        }
    }
    Ok(())
}

/// All independent evolution equations for Θ^(1).
pub fn check_sl_evolution_theta1(series: &ThetaSeries) -> Result<(), String> {
    for alpha in 1..series.n {
        check_sl_evolution_theta1_alpha(series, alpha)?;
    }
    Ok(())
}

/// Laurent polynomial in z₁…z_{n−1} and τ with rational coefficients;
/// the exponent of Θ^(2) divided by πi lives here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPoly {
    pub dim: usize,
    terms: BTreeMap<(Vec<i64>, i32), Rational64>,
}

impl ExpPoly {
    pub fn zero(dim: usize) -> ExpPoly {
        ExpPoly { dim, terms: BTreeMap::new() }
    }

    pub fn term(dim: usize, zdeg: Vec<i64>, taupow: i32, c: Rational64) -> ExpPoly {
        let mut p = ExpPoly::zero(dim);
        p.add_term(zdeg, taupow, c);
        p
    }

    pub fn add_term(&mut self, zdeg: Vec<i64>, taupow: i32, c: Rational64) {
        assert_eq!(zdeg.len(), self.dim);
        let key = (zdeg, taupow);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for ((z, t), c) in &other.terms {
            out.add_term(z.clone(), *t, *c);
        }
        out
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for ((z, t), c) in &other.terms {
            out.add_term(z.clone(), *t, -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<i64>, i32), &Rational64)> {
        self.terms.iter()
    }

    /// Substitute z_β ↦ z_β + s_β·τ for rational shifts s⃗ (exact binomial
    /// expansion; z-degrees in the exponent are at most 2).
    pub fn shift_z(&self, shifts: &[Rational64]) -> ExpPoly {
        assert_eq!(shifts.len(), self.dim);
        let mut out = ExpPoly::zero(self.dim);
        for ((zdeg, taupow), c) in &self.terms {
            // Expand ∏_β (z_β + s_β τ)^{e_β} term by term.
            let mut partial: Vec<(Vec<i64>, i32, Rational64)> =
                vec![(vec![0; self.dim], *taupow, *c)];
            for b in 0..self.dim {
                let e = zdeg[b];
                assert!((0..=2).contains(&e), "exponent degree out of range");
                let mut next = Vec::new();
                for (zd, tp, coef) in &partial {
                    for j in 0..=e {
                        let binom = match (e, j) {
                            (2, 1) => Rational64::from_integer(2),
                            _ => Rational64::one(),
                        };
                        let mut zd2 = zd.clone();
                        zd2[b] += e - j;
                        let mut c2 = *coef * binom;
                        for _ in 0..j {
                            c2 *= shifts[b];
                        }
                        next.push((zd2, tp + j as i32, c2));
                    }
                }
                partial = next;
            }
            for (zd, tp, coef) in partial {
                out.add_term(zd, tp, coef);
            }
        }
        out
    }

    /// Evaluate at float points; τ must be nonzero for negative powers.
    pub fn eval(&self, z: &[Complex64], tau: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((zdeg, taupow), c) in &self.terms {
            let mut t = Complex64::new(*c.numer() as f64 / *c.denom() as f64, 0.0);
            for (b, &e) in zdeg.iter().enumerate() {
                t *= z[b].powi(e as i32);
            }
            t *= tau.powi(*taupow);
            acc += t;
        }
        acc
    }
}

/// The exponent of Θ^(2) divided by πi, in the independent variables
/// z₁…z_{n−1}: −(1/τ)·Σ_{α≤β} z_α z_β = −(z⃗, Ω^{−1} z⃗) with Ω^{−1} = A/(2τ).
pub struct GaussianExponent {
    pub n: usize,
    pub poly: ExpPoly,
}

pub fn gaussian_theta2(n: usize) -> Result<GaussianExponent, String> {
    if n < 2 {
        return Err(format!("need n >= 2, got {n}"));
    }
    let form = LatticeForm::new(n)?;
    let m = n - 1;
    // Route 1: substitute z_n = −Σ z_α into −(1/(2τ))Σ_{β=1}^n z_β².
    let half = Rational64::new(-1, 2);
    let mut poly = ExpPoly::zero(m);
    for b in 0..m {
        let mut zd = vec![0; m];
        zd[b] = 2;
        poly.add_term(zd, -1, half);
    }
    for b in 0..m {
        for c in 0..m {
            let mut zd = vec![0; m];
            zd[b] += 1;
            zd[c] += 1;
            poly.add_term(zd, -1, half);
        }
    }
    // Route 2: −(z⃗, Ω^{−1} z⃗) with Ω^{−1} = A/(2τ); must agree exactly.
    let mut quad = ExpPoly::zero(m);
    for b in 0..m {
        for c in 0..m {
            let mut zd = vec![0; m];
            zd[b] += 1;
            zd[c] += 1;
            quad.add_term(zd, -1, half * Rational64::from_integer(form.a[b][c]));
        }
    }
    if poly != quad {
        return Err("Gaussian exponent disagrees with the period-matrix form".into());
    }
    Ok(GaussianExponent { n, poly })
}

/// Exact symbolic verification that Θ^(2) satisfies all n evolution
/// equations: under z_β ↦ z_β + 2τX_{αβ} the exponent changes by exactly
/// −(log qμ_α)/(πi) = −2τ(1 − 1/n) − 2z_α.
pub fn check_sl_evolution_theta2(n: usize) -> Result<(), String> {
    let gauss = gaussian_theta2(n)?;
    let form = LatticeForm::new(n)?;
    let m = n - 1;
    for alpha in 0..n {
        let shifts: Vec<Rational64> = (0..m)
            .map(|b| Rational64::from_integer(2) * form.x[alpha][b])
            .collect();
        let mut shifted = gauss.poly.shift_z(&shifts);
        // Add (log qμ_α)/(πi) = 2τ(1 − 1/n) + 2z_α, with z_n = −Σ z_β.
        shifted.add_term(
            vec![0; m],
            1,
            Rational64::from_integer(2) * (Rational64::one() - Rational64::new(1, n as i64)),
        );
        if alpha < m {
            let mut zd = vec![0; m];
            zd[alpha] = 1;
            shifted.add_term(zd, 0, Rational64::from_integer(2));
        } else {
            for b in 0..m {
                let mut zd = vec![0; m];
                zd[b] = 1;
                shifted.add_term(zd, 0, Rational64::from_integer(-2));
            }
        }
        if shifted != gauss.poly {
            return Err(format!(
                "evolution equation for the Gaussian fails at alpha = {}",
                alpha + 1
            ));
        }
    }
    Ok(())
}

/// Cutoff from the tail bound |q|^{λ_min K²/n} < 10^{−16}; λ_min(A*) = 1.
pub fn suggested_cutoff(n: usize, tau: Complex64) -> Result<i64, String> {
    if tau.im <= 0.0 {
        return Err("tau must have positive imaginary part".into());
    }
    let needed = (n as f64) * 16.0 * std::f64::consts::LN_10
        / (2.0 * std::f64::consts::PI * tau.im);
    Ok(needed.sqrt().ceil() as i64 + 1)
}

fn riemann_theta(z: &[Complex64], omega: &[Vec<Complex64>], cutoff: i64) -> Complex64 {
    let m = z.len();
    let pi_i = Complex64::new(0.0, std::f64::consts::PI);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for k in lattice_box(m, cutoff) {
        let mut quad = Complex64::new(0.0, 0.0);
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..m {
            lin += Complex64::new(k[i] as f64, 0.0) * z[i];
            for j in 0..m {
                quad += Complex64::new((k[i] * k[j]) as f64, 0.0) * omega[i][j];
            }
        }
        let term = (pi_i * quad + pi_i * Complex64::new(2.0, 0.0) * lin).exp();
        // Kahan compensated summation keeps the tail-stability check honest.
        let y = term - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// Evaluate both sides of the modular relation
/// Θ^(2)(z⃗) = n^{−1/2}(2τ/i)^{(n−1)/2}·θ(z⃗,Ω)/θ(Ω^{−1}z⃗,−Ω^{−1})
/// by truncated lattice sums and return |LHS/RHS − 1|.
pub fn modular_check(
    n: usize,
    tau: Complex64,
    z: &[Complex64],
    cutoff: i64,
) -> Result<f64, String> {
    if tau.im <= 0.0 {
        return Err("tau must have positive imaginary part".into());
    }
    let m = n - 1;
    if z.len() != m {
        return Err(format!("expected {m} z-components, got {}", z.len()));
    }
    let form = LatticeForm::new(n)?;
    let two_tau_over_n = Complex64::new(2.0 / n as f64, 0.0) * tau;
    let omega: Vec<Vec<Complex64>> = (0..m)
        .map(|i| (0..m).map(|j| two_tau_over_n * form.a_star[i][j] as f64).collect())
        .collect();
    let inv_scale = Complex64::new(0.5, 0.0) / tau;
    let omega_inv: Vec<Vec<Complex64>> = (0..m)
        .map(|i| (0..m).map(|j| inv_scale * form.a[i][j] as f64).collect())
        .collect();
    let gauss = gaussian_theta2(n)?;
    let pi_i = Complex64::new(0.0, std::f64::consts::PI);
    let lhs = (pi_i * gauss.poly.eval(z, tau)).exp();

    let wz: Vec<Complex64> = (0..m)
        .map(|i| (0..m).map(|j| omega_inv[i][j] * z[j]).sum())
        .collect();
    let neg_inv: Vec<Vec<Complex64>> =
        omega_inv.iter().map(|row| row.iter().map(|e| -e).collect()).collect();
    let num = riemann_theta(z, &omega, cutoff);
    let den = riemann_theta(&wz, &neg_inv, cutoff);
    if den.norm() == 0.0 {
        return Err("denominator theta vanished".into());
    }
    // Principal branch; acceptance runs keep τ on the positive imaginary axis.
    let pref = (Complex64::new(2.0, 0.0) * tau / Complex64::new(0.0, 1.0))
        .powf((n as f64 - 1.0) / 2.0)
        / (n as f64).sqrt();
    let rhs = pref * num / den;
    Ok((lhs / rhs - Complex64::new(1.0, 0.0)).norm())
}

/// Float comparison of the n = 2 theta series Σ q^{k(k+1)/2} μ₁^k against the
/// triple product ∏_{m≥1}(1−q^m)(1+q^mμ₁)(1+q^{m−1}/μ₁), as Laurent
/// polynomials in μ₁ through order K. Returns the max coefficient gap.
pub fn jacobi_check(cutoff: i64, q: f64) -> Result<f64, String> {
    if q.abs() >= 1.0 {
        return Err(format!("need |q| < 1, got {q}"));
    }
    let k = cutoff as usize;
    // Factors beyond q^m < 1e-18 are numerically the identity.
    let m_max = if q == 0.0 { 1 } else { (1e-18f64.ln() / q.abs().ln()).ceil() as usize + 1 };
    // Laurent coefficients indexed by power + offset; keep generous width.
    let width = k + m_max + 2;
    let offset = width;
    let mut prod = vec![0.0f64; 2 * width + 1];
    prod[offset] = 1.0;
    let mul_laurent = |prod: &mut Vec<f64>, shift: i64, scale: f64| {
        // prod *= 1 + scale·μ^shift.
        let mut next = prod.clone();
        for (i, &c) in prod.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let j = i as i64 + shift;
            if j >= 0 && (j as usize) < next.len() {
                next[j as usize] += scale * c;
            }
        }
        *prod = next;
    };
    let mut scale = 1.0f64;
    for m in 1..=m_max {
        let qm = q.powi(m as i32);
        scale *= 1.0 - qm;
        mul_laurent(&mut prod, 1, qm);
        mul_laurent(&mut prod, -1, q.powi(m as i32 - 1));
    }
    let mut max_gap = 0.0f64;
    for kk in -(k as i64)..=(k as i64) {
        let series = q.powf((kk * (kk + 1)) as f64 / 2.0);
        let product = scale * prod[(kk + offset as i64) as usize];
        max_gap = max_gap.max((series - product).abs());
    }
    Ok(max_gap)
}

/// Exact-coefficient variant of the Jacobi triple product over ℤ[[q]]: every
/// Laurent coefficient in μ₁ of the truncated product must match the series
/// (a single monomial q^{k(k+1)/2} per μ-power) through order q^{order}.
pub fn jacobi_check_exact(order: usize) -> Result<(), String> {
    // Factors with m > order + 1 only contribute at orders beyond the cut.
    let m_max = order + 1;
    // μ-powers reachable: k(k+1)/2 ≤ order bounds the series side; the
    // product side is kept a little wider and must vanish outside.
    let k_bound = (1..).find(|k: &i64| k * (k + 1) / 2 > order as i64).unwrap() + 1;
    let width = k_bound as usize;
    let offset = width;
    // coeffs[μ-power + offset][q-power].
    let mut prod: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); order + 1]; 2 * width + 1];
    prod[offset][0] = BigInt::one();
    let mul_factor = |prod: &mut Vec<Vec<BigInt>>, mu_shift: i64, q_shift: usize, sign: i64| {
        // prod *= 1 + sign·q^{q_shift}·μ^{mu_shift}.
        let snapshot = prod.clone();
        for (i, qs) in snapshot.iter().enumerate() {
            let j = i as i64 + mu_shift;
            if j < 0 || j as usize >= prod.len() {
                continue;
            }
            for (d, c) in qs.iter().enumerate() {
                if c.is_zero() || d + q_shift > order {
                    continue;
                }
                prod[j as usize][d + q_shift] += c * sign;
            }
        }
    };
    for m in 1..=m_max {
        mul_factor(&mut prod, 0, m, -1);
        mul_factor(&mut prod, 1, m, 1);
        mul_factor(&mut prod, -1, m - 1, 1);
    }
    for kk in -(k_bound)..=k_bound {
        let e = kk * (kk + 1) / 2;
        let row = &prod[(kk + offset as i64) as usize];
        for (d, c) in row.iter().enumerate() {
            let expect = if e >= 0 && d as i64 == e { BigInt::one() } else { BigInt::zero() };
            if *c != expect {
                return Err(format!(
                    "product coefficient of μ^{kk} q^{d} is {c}, expected {expect}"
                ));
            }
        }
    }
    Ok(())
}

/// GL-mode consistency: the z-scale per evolution step is (qγ^{−n})^{2/n};
/// its n-fold product is q²γ^{−2n}, which is 1 at the SL point γ = q^{1/n},
/// and ∏_α ∇^α acts trivially on every ν_β (columns of X sum to zero). For
/// z-independent Θ the GL system therefore reduces to the SL system.
pub fn check_gl_consistency(n: usize) -> Result<(), String> {
    let form = LatticeForm::new(n)?;
    for b in 0..n {
        let col: Rational64 = (0..n).map(|a| form.x[a][b]).sum();
        if !col.is_zero() {
            return Err(format!("column {b} of X does not sum to zero"));
        }
    }
    let step = Scalar::p_pow(2).mul(&Scalar::gamma_pow(-2));
    let full = step.pow(n as i64);
    let expect = Scalar::p_pow(2 * n as i32).mul(&Scalar::gamma_pow(-2 * n as i32));
    if !full.sub(&expect).is_zero() {
        return Err("n-fold z-scale is not q²γ^{−2n}".into());
    }
    if !full.substitute_gamma_p().is_one() {
        return Err("z-scale does not trivialize at the SL point".into());
    }
    Ok(())
}
