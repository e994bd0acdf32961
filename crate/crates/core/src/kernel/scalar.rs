//! Exact elements of the field ℚ(p, γ, μ₁…μ₄): normalized fractions of sparse
//! Laurent polynomials.
//!
//! Normal form invariants (enforced by every constructor and operation):
//!
//! * the denominator is nonzero and has minimum degree 0 in every variable
//!   (its monomial content is moved into the numerator);
//! * gcd(numerator, denominator) = 1 up to monomial units;
//! * the integer contents of numerator and denominator are coprime;
//! * the lex-leading coefficient of the denominator is positive.
//!
//! With these invariants two equal field elements are structurally identical,
//! so equality, hashing and the canonical text format are all exact.

use super::poly::{var_mu, Exp, Poly, EXP_ZERO, NVARS, VAR_G, VAR_NAMES, VAR_P};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Scalar {
            num: Poly::from_int(c),
            den: Poly::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Scalar::new(Poly::from_int(n), Poly::from_int(d))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Build and normalize a fraction.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = Scalar { num, den };
        s.normalize();
        s
    }

    pub fn var(idx: usize) -> Self {
        Scalar::from_poly(Poly::var(idx))
    }

    /// p^e
    pub fn p_pow(e: i32) -> Self {
        Scalar::from_poly(Poly::var_pow(VAR_P, e))
    }

    /// γ^e
    pub fn gamma_pow(e: i32) -> Self {
        Scalar::from_poly(Poly::var_pow(VAR_G, e))
    }

    /// μ_α
    pub fn mu(alpha: usize) -> Self {
        Scalar::var(var_mu(alpha))
    }

    /// μ_α^e
    pub fn mu_pow(alpha: usize, e: i32) -> Self {
        Scalar::from_poly(Poly::var_pow(var_mu(alpha), e))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Some(integer) iff the value is an integer constant.
    pub fn as_int(&self) -> Option<BigInt> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if !self.den.is_one() {
            // Move the denominator's monomial content into the numerator.
            let m = self.den.min_exponents();
            if m != EXP_ZERO {
                let mut neg = EXP_ZERO;
                for i in 0..NVARS {
                    neg[i] = -m[i];
                }
                self.den = self.den.shift(&neg);
                self.num = self.num.shift(&neg);
            }
            if !self.den.is_one() {
                let g = Poly::gcd(&self.num, &self.den);
                if !g.is_one() {
                    // gcd ignores monomial content, so divide the shifted
                    // numerator and restore its monomial part afterwards.
                    self.num = self.num.exact_div(&g).expect("gcd divides numerator");
                    self.den = self.den.exact_div(&g).expect("gcd divides denominator");
                    // exact_div of Laurent polys preserves monomial bookkeeping.
                    let m2 = self.den.min_exponents();
                    if m2 != EXP_ZERO {
                        let mut neg = EXP_ZERO;
                        for i in 0..NVARS {
                            neg[i] = -m2[i];
                        }
                        self.den = self.den.shift(&neg);
                        self.num = self.num.shift(&neg);
                    }
                }
            }
        }
        // Coprime integer contents.
        if !self.den.is_one() {
            let cn = self.num.int_content();
            let cd = self.den.int_content();
            let ci = num_integer::Integer::gcd(&cn, &cd);
            if !ci.is_one() {
                self.num = self.num.div_bigint(&ci);
                self.den = self.den.div_bigint(&ci);
            }
        }
        // Positive lex-leading denominator coefficient.
        if self.den.leading_sign() < 0 {
            self.den = self.den.neg();
            self.num = self.num.neg();
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::new(self.num.add(&other.num), self.den.clone());
        }
        Scalar::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        Scalar::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Does the value depend on any spectral variable μ_α?
    pub fn depends_on_mu(&self) -> bool {
        (1..=4).any(|a| self.num.depends_on(var_mu(a)) || self.den.depends_on(var_mu(a)))
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    /// Apply the shift operator ∇^α of the spectral variables:
    /// μ_β → q^{2δ_{αβ}}γ^{−2}μ_β (GL-mode) or μ_β → q^{2(δ_{αβ}−1/n)}μ_β
    /// (SL-mode, where γ = p was already substituted). Exact monomial
    /// substitution, applied termwise; q = p^n.
    pub fn apply_nabla(&self, alpha: usize, n: usize, sl_mode: bool) -> Scalar {
        let map = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (e, c) in p.terms() {
                let e_alpha = e[var_mu(alpha)];
                let e_sum: i32 = (1..=4).map(|a| e[var_mu(a)]).sum();
                let mut e2 = *e;
                e2[VAR_P] += 2 * (n as i32) * e_alpha;
                if sl_mode {
                    e2[VAR_P] -= 2 * e_sum;
                } else {
                    e2[VAR_G] -= 2 * e_sum;
                }
                out = out.add(&Poly::monomial(c.clone(), e2));
            }
            out
        };
        Scalar::new(map(&self.num), map(&self.den))
    }

    /// Substitute γ → p (SL-mode). Exact monomial substitution.
    pub fn substitute_gamma_p(&self) -> Scalar {
        let map = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (e, c) in p.terms() {
                let mut e2 = *e;
                e2[VAR_P] += e2[VAR_G];
                e2[VAR_G] = 0;
                out = out.add(&Poly::monomial(c.clone(), e2));
            }
            out
        };
        Scalar::new(map(&self.num), map(&self.den))
    }

    /// Substitute μ_2 → q^{-1} μ_1^{-1} (the n = 2 SL constraint
    /// a_2 = e_2(μ) = q^{-1}). Exact monomial substitution, q = p^2.
    pub fn substitute_sl2_mu(&self) -> Scalar {
        let map = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (e, c) in p.terms() {
                let e2m = e[var_mu(2)];
                let mut e2 = *e;
                e2[VAR_P] -= 2 * e2m;
                e2[var_mu(1)] -= e2m;
                e2[var_mu(2)] = 0;
                out = out.add(&Poly::monomial(c.clone(), e2));
            }
            out
        };
        Scalar::new(map(&self.num), map(&self.den))
    }

    /// Evaluate a subset of variables at exact rational points `(num, den)`.
    /// Unassigned slots remain symbolic.
    pub fn eval(&self, points: &[Option<(BigInt, BigInt)>; NVARS]) -> Scalar {
        let eval_poly = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (e, c) in p.terms() {
                let mut term_num = Poly::constant(c.clone());
                let mut term_den = Poly::one();
                let mut rest = EXP_ZERO;
                for (v, assignment) in points.iter().enumerate() {
                    match assignment {
                        None => rest[v] = e[v],
                        Some((a, b)) => {
                            let k = e[v];
                            if k >= 0 {
                                term_num = term_num.mul_bigint(&a.pow(k as u32));
                                term_den = term_den.mul_bigint(&b.pow(k as u32));
                            } else {
                                term_num = term_num.mul_bigint(&b.pow((-k) as u32));
                                term_den = term_den.mul_bigint(&a.pow((-k) as u32));
                            }
                        }
                    }
                }
                term_num = term_num.mul(&Poly::monomial(BigInt::one(), rest));
                acc = acc.add(&Scalar::new(term_num, term_den));
            }
            acc
        };
        eval_poly(&self.num).div(&eval_poly(&self.den))
    }

    /// Double-precision value after all variables are bound (used only for
    /// float cross-checks in the evolution module).
    pub fn to_f64(&self, points: &[f64; NVARS]) -> f64 {
        let eval_poly = |p: &Poly| -> f64 {
            let mut acc = 0.0;
            for (e, c) in p.terms() {
                let mut t = bigint_to_f64(c);
                for v in 0..NVARS {
                    t *= points[v].powi(e[v]);
                }
                acc += t;
            }
            acc
        };
        eval_poly(&self.num) / eval_poly(&self.den)
    }
}

fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().expect("BigInt out of f64 range")
}

// ---------------------------------------------------------------------------
// q-arithmetic helpers: q = p^n for the session's fixed n.
// ---------------------------------------------------------------------------

/// q^k = p^{nk}.
pub fn qpow(n: usize, k: i32) -> Scalar {
    Scalar::p_pow(n as i32 * k)
}

/// The symmetric q-integer i_q = (q^i − q^{−i})/(q − q^{−1}) as an exact
/// Laurent polynomial in p.
pub fn qint(n: usize, i: i64) -> Scalar {
    if i == 0 {
        return Scalar::zero();
    }
    if i < 0 {
        return qint(n, -i).neg();
    }
    let mut acc = Scalar::zero();
    for j in 0..i {
        acc = acc.add(&qpow(n, (i - 1 - 2 * j) as i32));
    }
    acc
}

/// q-factorial k_q!.
pub fn qfact(n: usize, k: i64) -> Scalar {
    let mut acc = Scalar::one();
    for i in 1..=k {
        acc = acc.mul(&qint(n, i));
    }
    acc
}

/// Gaussian q-binomial coefficient m_q!/(k_q!(m−k)_q!). Panics if k is out of
/// range (reported as a usage error).
pub fn qbinomial(n: usize, m: i64, k: i64) -> Scalar {
    assert!(
        (0..=m).contains(&k),
        "qbinomial: k out of range: ({m}, {k})"
    );
    qfact(n, m).div(&qfact(n, k).mul(&qfact(n, m - k)))
}

// ---------------------------------------------------------------------------
// Canonical text format ("p-exponent polynomial" form).
//
//   scalar  := poly | "(" poly ")/(" poly ")"
//   poly    := term (" + " term | " - " term)*
//   term    := coeff ("*" factor)* | factor ("*" factor)*
//   factor  := var ("^" int)?
//   var     := "p" | "g" | "m1" | "m2" | "m3" | "m4"
//
// Terms are written in descending lex order of the exponent vector; the
// coefficient is omitted when it is ±1 and the term has at least one factor.
// ---------------------------------------------------------------------------

pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<(&Exp, &BigInt)> = p.terms().collect();
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        for v in 0..NVARS {
            if e[v] != 0 {
                if e[v] == 1 {
                    factors.push(VAR_NAMES[v].to_string());
                } else {
                    factors.push(format!("{}^{}", VAR_NAMES[v], e[v]));
                }
            }
        }
        if factors.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", format_poly(&self.num))
        } else {
            write!(f, "({})/({})", format_poly(&self.num), format_poly(&self.den))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character at byte {0}")]
    Unexpected(usize),
    #[error("empty input")]
    Empty,
    #[error("integer overflow in exponent at byte {0}")]
    ExponentOverflow(usize),
    #[error("trailing input at byte {0}")]
    Trailing(usize),
    #[error("zero denominator")]
    ZeroDenominator,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::Unexpected(self.pos));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse::<BigInt>()
            .map_err(|_| ParseError::Unexpected(start))
    }

    fn parse_exponent(&mut self) -> Result<i32, ParseError> {
        let at = self.pos;
        let neg = self.eat(b'-');
        let mag = self.parse_uint()?;
        use num_traits::ToPrimitive;
        let v = mag.to_i32().ok_or(ParseError::ExponentOverflow(at))?;
        // Guard against pathological exponents: downstream arithmetic adds
        // exponents, so keep them well inside i32 range.
        if v > 1_000_000 {
            return Err(ParseError::ExponentOverflow(at));
        }
        Ok(if neg { -v } else { v })
    }

    fn parse_var(&mut self) -> Option<usize> {
        for (idx, name) in VAR_NAMES.iter().enumerate() {
            if self.s[self.pos..].starts_with(name.as_bytes()) {
                // "m1".."m4" must win over a bare prefix match; names are
                // prefix-free except none here, but check the longest first.
                if *name == "m1" || *name == "m2" || *name == "m3" || *name == "m4" {
                    self.pos += 2;
                    return Some(idx);
                }
                // "p" or "g": make sure it is not "m..." (distinct letters).
                self.pos += 1;
                return Some(idx);
            }
        }
        None
    }

    fn parse_term(&mut self) -> Result<Poly, ParseError> {
        let mut coeff = BigInt::one();
        let mut exp = EXP_ZERO;
        let mut saw_factor = false;
        self.skip_ws();
        if self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
            coeff = self.parse_uint()?;
            saw_factor = true;
            self.skip_ws();
            if !self.eat(b'*') {
                return Ok(Poly::monomial(coeff, exp));
            }
            self.skip_ws();
        }
        loop {
            let at = self.pos;
            match self.parse_var() {
                None => {
                    if saw_factor {
                        return Err(ParseError::Unexpected(at));
                    }
                    return Err(ParseError::Unexpected(at));
                }
                Some(v) => {
                    let mut e: i32 = 1;
                    if self.eat(b'^') {
                        e = self.parse_exponent()?;
                    }
                    exp[v] = exp[v].checked_add(e).ok_or(ParseError::ExponentOverflow(at))?;
                    saw_factor = true;
                }
            }
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                continue;
            }
            break;
        }
        Ok(Poly::monomial(coeff, exp))
    }

    fn parse_poly(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
            self.skip_ws();
        }
        let mut acc = {
            let t = self.parse_term()?;
            if negate {
                t.neg()
            } else {
                t
            }
        };
        loop {
            self.skip_ws();
            let op = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => break,
            };
            self.pos += 1;
            self.skip_ws();
            let t = self.parse_term()?;
            acc = if op == 1 { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }
}

/// Parse the canonical text format (also accepts redundant whitespace).
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let result = if p.eat(b'(') {
        let num = p.parse_poly()?;
        p.skip_ws();
        if !p.eat(b')') {
            return Err(ParseError::Unexpected(p.pos));
        }
        p.skip_ws();
        if !p.eat(b'/') {
            return Err(ParseError::Unexpected(p.pos));
        }
        p.skip_ws();
        if !p.eat(b'(') {
            return Err(ParseError::Unexpected(p.pos));
        }
        let den = p.parse_poly()?;
        p.skip_ws();
        if !p.eat(b')') {
            return Err(ParseError::Unexpected(p.pos));
        }
        if den.is_zero() {
            return Err(ParseError::ZeroDenominator);
        }
        Scalar::new(num, den)
    } else {
        Scalar::from_poly(p.parse_poly()?)
    };
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(ParseError::Trailing(p.pos));
    }
    Ok(result)
}
