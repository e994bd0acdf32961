//! Sparse multivariate Laurent polynomials with arbitrary-precision integer
//! coefficients.
//!
//! The variable slots are fixed for the whole library:
//!
//! * slot 0: `p` (the 2n-th root `q^{1/n}` of `q^2`; `q = p^n` is never a
//!   separate variable),
//! * slot 1: `g` (the Heisenberg-double parameter `γ`; substituted by `p` in
//!   SL-mode),
//! * slots 2..=5: the spectral variables `m1`..`m4` (`μ_α`).
//!
//! Exponents are signed (Laurent). Terms are kept in a `BTreeMap` keyed by
//! the exponent vector, so iteration order — and hence display order and
//! serialization — is canonical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Number of variable slots (p, g, m1..m4).
pub const NVARS: usize = 6;
/// Slot of the base variable p = q^{1/n}.
pub const VAR_P: usize = 0;
/// Slot of the Heisenberg-double parameter γ.
pub const VAR_G: usize = 1;

/// Slot of the spectral variable μ_α (α in 1..=4).
pub fn var_mu(alpha: usize) -> usize {
    assert!((1..=4).contains(&alpha), "mu index out of range: {alpha}");
    1 + alpha
}

/// Canonical variable names used by the text format.
pub const VAR_NAMES: [&str; NVARS] = ["p", "g", "m1", "m2", "m3", "m4"];

/// Exponent vector for one monomial.
pub type Exp = [i32; NVARS];

pub const EXP_ZERO: Exp = [0; NVARS];

fn exp_add(a: &Exp, b: &Exp) -> Exp {
    let mut r = EXP_ZERO;
    for i in 0..NVARS {
        r[i] = a[i] + b[i];
    }
    r
}

fn exp_sub(a: &Exp, b: &Exp) -> Exp {
    let mut r = EXP_ZERO;
    for i in 0..NVARS {
        r[i] = a[i] - b[i];
    }
    r
}

/// Sparse multivariate Laurent polynomial. Zero is the empty term map; no
/// zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(EXP_ZERO, c);
        }
        Poly { terms }
    }

    pub fn var(idx: usize) -> Self {
        Poly::var_pow(idx, 1)
    }

    pub fn var_pow(idx: usize, e: i32) -> Self {
        assert!(idx < NVARS);
        let mut exp = EXP_ZERO;
        exp[idx] = e;
        Poly::monomial(BigInt::one(), exp)
    }

    pub fn monomial(c: BigInt, exp: Exp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&EXP_ZERO)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Some(c) iff the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&EXP_ZERO) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    fn insert_add(terms: &mut BTreeMap<Exp, BigInt>, exp: Exp, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c);
        }
        Poly { terms }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let neg = -c;
            Self::insert_add(&mut terms, *e, &neg);
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        // Fast path: multiplication by a single term.
        if self.terms.len() == 1 {
            let (e0, c0) = self.terms.iter().next().unwrap();
            return Poly {
                terms: other
                    .terms
                    .iter()
                    .map(|(e, c)| (exp_add(e0, e), c0 * c))
                    .collect(),
            };
        }
        if other.terms.len() == 1 {
            return other.mul(self);
        }
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let prod = ca * cb;
                Self::insert_add(&mut terms, exp_add(ea, eb), &prod);
            }
        }
        Poly { terms }
    }

    pub fn mul_bigint(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum of all exponent vectors (the monomial content of
    /// a Laurent polynomial). Zero polynomial returns the zero vector.
    pub fn min_exponents(&self) -> Exp {
        let mut min = EXP_ZERO;
        for (i, (e, _)) in self.terms.iter().enumerate() {
            if i == 0 {
                min = *e;
            } else {
                for v in 0..NVARS {
                    min[v] = min[v].min(e[v]);
                }
            }
        }
        min
    }

    /// Multiply by the monomial with exponent vector `delta`.
    pub fn shift(&self, delta: &Exp) -> Poly {
        if *delta == EXP_ZERO {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exp_add(e, delta), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_degree(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    /// Positive gcd of all integer coefficients; zero for the zero polynomial.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_bigint(&self, c: &BigInt) -> Poly {
        assert!(!c.is_zero());
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| {
                    let (q, r) = k.div_rem(c);
                    assert!(r.is_zero(), "div_bigint: not exactly divisible");
                    (*e, q)
                })
                .collect(),
        }
    }

    /// Lexicographically largest term (by exponent vector).
    pub fn leading(&self) -> Option<(&Exp, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Sign of the lex-leading coefficient: +1, -1, or 0.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some((_, c)) => {
                if c.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Exact division; `None` if `self` is not a multiple of `d`.
    /// Both Laurent: the quotient is Laurent as well.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if let Some(c) = d.as_constant() {
            let ok = self.terms.values().all(|k| (k % &c).is_zero());
            return if ok { Some(self.div_bigint(&c)) } else { None };
        }
        if d.terms.len() == 1 {
            let (ed, cd) = d.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(cd);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(exp_sub(e, ed), q);
            }
            return Some(Poly { terms });
        }
        // Shift both operands to nonnegative exponents: exact divisibility is
        // preserved (monomials are units), and lex descent on nonnegative
        // exponent vectors is well-founded, so the division loop terminates.
        let min_a = self.min_exponents();
        let min_d = d.min_exponents();
        let neg = |m: &Exp| {
            let mut r = EXP_ZERO;
            for i in 0..NVARS {
                r[i] = -m[i];
            }
            r
        };
        let a = self.shift(&neg(&min_a));
        let d0 = d.shift(&neg(&min_d));
        let (eld, cld) = d0.leading().unwrap();
        let eld = *eld;
        let cld = cld.clone();
        let mut rem = a;
        let mut quot = BTreeMap::new();
        while !rem.is_zero() {
            let (elr, clr) = rem.leading().unwrap();
            let qe = exp_sub(elr, &eld);
            if qe.iter().any(|&e| e < 0) {
                return None;
            }
            let (qc, rc) = clr.div_rem(&cld);
            if !rc.is_zero() {
                return None;
            }
            let qterm = Poly::monomial(qc.clone(), qe);
            rem = rem.sub(&qterm.mul(&d0));
            quot.insert(qe, qc);
        }
        // Undo the shift on the quotient.
        Some(Poly { terms: quot }.shift(&exp_sub(&min_a, &min_d)))
    }

    /// Coefficient of x^k where x is the variable slot `var` (a polynomial in
    /// the remaining variables, with slot `var` zeroed).
    fn coeff_of(&self, var: usize, k: i32) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = *e;
                e2[var] = 0;
                terms.insert(e2, c.clone());
            }
        }
        Poly { terms }
    }

    /// Content with respect to `var`: gcd of the x^k coefficient polynomials.
    fn content_wrt(&self, var: usize) -> Poly {
        let lo = self.min_degree(var);
        let hi = self.max_degree(var);
        let mut g = Poly::zero();
        for k in lo..=hi {
            let c = self.coeff_of(var, k);
            if !c.is_zero() {
                g = Poly::gcd(&g, &c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    /// Pseudo-remainder of `f` by `g` with respect to `var` (both must have
    /// nonnegative exponents in `var`).
    fn prem(f: &Poly, g: &Poly, var: usize) -> Poly {
        let dg = g.max_degree(var);
        let lcg = g.coeff_of(var, dg);
        let mut r = f.clone();
        while !r.is_zero() && r.max_degree(var) >= dg {
            let dr = r.max_degree(var);
            let lcr = r.coeff_of(var, dr);
            let shift = Poly::var_pow(var, dr - dg);
            r = lcg.mul(&r).sub(&lcr.mul(&shift).mul(g));
        }
        r
    }

    /// Polynomial gcd, positive lex-leading coefficient. Monomial (Laurent)
    /// content of the inputs is ignored: the result is a true polynomial with
    /// zero minimum degree in every variable it uses, times the integer gcd of
    /// the contents.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let norm = |p: &Poly| {
            let min = p.min_exponents();
            let mut neg = EXP_ZERO;
            for i in 0..NVARS {
                neg[i] = -min[i];
            }
            p.shift(&neg)
        };
        if a.is_zero() {
            if b.is_zero() {
                return Poly::zero();
            }
            let mut r = norm(b);
            if r.leading_sign() < 0 {
                r = r.neg();
            }
            return r;
        }
        if b.is_zero() {
            return Poly::gcd(b, a);
        }
        let a = norm(a);
        let b = norm(b);
        Self::gcd_nonneg(&a, &b)
    }

    fn gcd_nonneg(a: &Poly, b: &Poly) -> Poly {
        if let Some(ca) = a.as_constant() {
            let cb = b.int_content();
            return Poly::constant(ca.abs().gcd(&cb));
        }
        if b.as_constant().is_some() {
            return Self::gcd_nonneg(b, a);
        }
        // Pick the highest variable slot on which either depends.
        let var = (0..NVARS)
            .rev()
            .find(|&v| a.depends_on(v) || b.depends_on(v))
            .expect("non-constant polynomial must depend on a variable");
        if !a.depends_on(var) {
            return Self::gcd_nonneg(a, &b.content_wrt(var));
        }
        if !b.depends_on(var) {
            return Self::gcd_nonneg(&a.content_wrt(var), b);
        }
        let ca = a.content_wrt(var);
        let cb = b.content_wrt(var);
        let c = Poly::gcd(&ca, &cb);
        let mut f = a.exact_div(&ca).expect("content divides");
        let mut g = b.exact_div(&cb).expect("content divides");
        if f.max_degree(var) < g.max_degree(var) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = Self::prem(&f, &g, var);
            if r.is_zero() {
                break;
            }
            let cr = r.content_wrt(var);
            f = g;
            g = r.exact_div(&cr).expect("content divides");
        }
        let cg = g.content_wrt(var);
        let mut result = c.mul(&g.exact_div(&cg).expect("content divides"));
        if result.leading_sign() < 0 {
            result = result.neg();
        }
        result
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::kernel::scalar::format_poly(self))
    }
}
