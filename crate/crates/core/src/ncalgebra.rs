//! Free-algebra engine with oriented quadratic rewrite rules: builds
//! presentations of the RTT, RE, and Heisenberg-double algebras from a
//! numeric R-matrix and reduces noncommutative expressions to normal form.
//!
//! Words are sequences of L/T/T⁻¹ generators; the spectral variables μ_α
//! live in the coefficient field and stand to the left of the word. Moving a
//! μ-dependent coefficient rightwards across a T generator uses the spectral
//! expansion T f(μ) = Σ_β f(∇^β μ) (P^β T), so multiplication is only
//! defined once a system is spectrally bound (or when no crossing occurs).

use crate::kernel::scalar::Scalar;
use crate::kernel::tensor::TensorOp;
use crate::rmatrix::RMatrixContext;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::fmt;

/// A single noncommutative generator. μ_α is coefficient-like: it never
/// appears inside stored words, and `NcExpr::gen` maps it to a scalar.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Gen {
    L(u8, u8),
    T(u8, u8),
    Tinv(u8, u8),
    Mu(u8),
}

impl Gen {
    fn family_rank(&self) -> u8 {
        match self {
            Gen::L(..) => 0,
            Gen::T(..) => 1,
            Gen::Tinv(..) => 2,
            Gen::Mu(..) => panic!("mu is not a word letter"),
        }
    }

    fn letter_key(&self) -> (u8, u8, u8) {
        match self {
            Gen::L(i, j) => (0, *i, *j),
            Gen::T(i, j) => (1, *i, *j),
            Gen::Tinv(i, j) => (2, *i, *j),
            Gen::Mu(_) => panic!("mu is not a word letter"),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::L(i, j) => write!(f, "L[{i},{j}]"),
            Gen::T(i, j) => write!(f, "T[{i},{j}]"),
            Gen::Tinv(i, j) => write!(f, "Ti[{i},{j}]"),
            Gen::Mu(a) => write!(f, "mu{a}"),
        }
    }
}

/// A word in the free monoid, ordered family-graded: first by T-family
/// degree, then by L-degree, then letterwise (L < T < Tinv, then indices).
/// The order is compatible with concatenation, which makes rule application
/// strictly decreasing.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    fn t_degree(&self) -> usize {
        self.0.iter().filter(|g| g.family_rank() > 0).count()
    }

    fn l_degree(&self) -> usize {
        self.0.iter().filter(|g| g.family_rank() == 0).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.t_degree(), self.l_degree())
            .cmp(&(other.t_degree(), other.l_degree()))
            .then_with(|| {
                let a: Vec<_> = self.0.iter().map(|g| g.letter_key()).collect();
                let b: Vec<_> = other.0.iter().map(|g| g.letter_key()).collect();
                a.cmp(&b)
            })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A noncommutative expression: finite Scalar-linear combination of words,
/// coefficients standing to the left of their word.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NcExpr {
    terms: BTreeMap<Word, Scalar>,
}

impl NcExpr {
    pub fn zero() -> Self {
        NcExpr::default()
    }

    pub fn one() -> Self {
        NcExpr::from_scalar(Scalar::one())
    }

    pub fn from_scalar(c: Scalar) -> Self {
        let mut e = NcExpr::zero();
        e.add_term(Word::one(), c);
        e
    }

    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::Mu(a) => NcExpr::from_scalar(Scalar::mu(a as usize)),
            _ => {
                let mut e = NcExpr::zero();
                e.add_term(Word(vec![g]), Scalar::one());
                e
            }
        }
    }

    pub fn word(w: Word) -> Self {
        let mut e = NcExpr::zero();
        e.add_term(w, Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (order-largest) term.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &NcExpr) -> NcExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcExpr) -> NcExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcExpr {
        let mut out = NcExpr::zero();
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), c.neg());
        }
        out
    }

    /// Left multiplication by a scalar.
    pub fn scale(&self, c: &Scalar) -> NcExpr {
        if c.is_zero() {
            return NcExpr::zero();
        }
        let mut out = NcExpr::zero();
        for (w, s) in &self.terms {
            out.add_term(w.clone(), s.mul(c));
        }
        out
    }

    /// Product without any μ-transport: panics if a μ-dependent coefficient
    /// would have to cross a T generator. Used to assemble relations, whose
    /// coefficients are μ-free.
    pub fn mul_free(&self, other: &NcExpr) -> NcExpr {
        let mut out = NcExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if c2.depends_on_mu() && w1.0.iter().any(|g| g.family_rank() > 0) {
                    panic!("mu coefficient cannot cross a T generator without spectral binding");
                }
                let mut w = w1.clone();
                w.0.extend_from_slice(&w2.0);
                out.add_term(w, c1.mul(c2));
            }
        }
        out
    }

    /// Append a raw word on the right (no transport needed: coefficients
    /// stand left and never cross rightwards).
    fn concat_word(&self, suffix: &[Gen]) -> NcExpr {
        let mut out = NcExpr::zero();
        for (w, c) in &self.terms {
            let mut nw = w.clone();
            nw.0.extend_from_slice(suffix);
            out.add_term(nw, c.clone());
        }
        out
    }
}

impl fmt::Display for NcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(w, c)| format!("({c})*{w}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One oriented rewrite rule: leading word → strictly smaller tail.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lead: Word,
    pub tail: NcExpr,
    pub tag: String,
}

/// Spectral data: the projector matrices P^α (entries are L-polynomials with
/// μ-rational coefficients) and the per-(α,β) shift factors ∇^α μ_β / μ_β.
#[derive(Clone)]
pub struct SpectralData {
    pub p_mats: Vec<Vec<Vec<NcExpr>>>,
    pub shift_factors: Vec<Vec<Scalar>>,
}

/// Three-valued identity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted(String),
    Inconclusive(String),
}

#[derive(Debug, thiserror::Error)]
pub enum NcError {
    #[error("reduction budget exceeded")]
    Budget,
    #[error("contradictory relation: 1 = 0 after row reduction")]
    Contradiction,
    #[error("{0}")]
    Other(String),
}

/// Result of the diamond-lemma diagnostic.
#[derive(Clone, Debug, Default)]
pub struct OverlapReport {
    pub checked: usize,
    pub unresolved: Vec<(Word, Word, Word)>,
}

impl OverlapReport {
    pub fn all_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// An immutable oriented rewrite system over the L/T alphabet.
pub struct RewriteSystem {
    pub n: usize,
    rules: BTreeMap<Word, Rule>,
    spectral: Option<SpectralData>,
    budget: usize,
    overlap_cache: OnceLock<OverlapReport>,
}

impl RewriteSystem {
    pub fn new(n: usize) -> Self {
        RewriteSystem {
            n,
            rules: BTreeMap::new(),
            spectral: None,
            budget: 4_000_000,
            overlap_cache: OnceLock::new(),
        }
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn rule_for(&self, lead: &Word) -> Option<&Rule> {
        self.rules.get(lead)
    }

    pub fn set_budget(&mut self, budget: usize) {
        self.budget = budget;
    }

    pub fn spectral(&self) -> Option<&SpectralData> {
        self.spectral.as_ref()
    }

    pub fn set_spectral(&mut self, data: SpectralData) {
        self.spectral = Some(data);
        self.overlap_cache = OnceLock::new();
    }

    /// Install a batch of oriented rules obtained from row-reduced relations.
    pub fn add_rules(&mut self, rules: Vec<Rule>) {
        for r in rules {
            debug_assert!(
                r.tail.terms().all(|(w, _)| *w < r.lead),
                "rule tail must be strictly smaller than its lead"
            );
            let prev = self.rules.insert(r.lead.clone(), r);
            assert!(prev.is_none(), "duplicate rule lead");
        }
        self.overlap_cache = OnceLock::new();
    }

    /// Remove one rule (used by tests to manufacture unresolved overlaps).
    pub fn remove_rule(&mut self, lead: &Word) -> Option<Rule> {
        let r = self.rules.remove(lead);
        self.overlap_cache = OnceLock::new();
        r
    }

    /// Apply ∇^α to a scalar: multiply every μ_β-degree by its shift factor.
    /// Works in both symbolic and rational-evaluation modes because the
    /// factors are precomputed through the context adapter.
    pub fn nabla(&self, alpha: usize, s: &Scalar) -> Scalar {
        let sd = self
            .spectral
            .as_ref()
            .expect("nabla requires a spectrally bound system");
        let shift = |p: &crate::kernel::poly::Poly| {
            let mut acc = Scalar::zero();
            for (e, c) in p.terms() {
                let mut term =
                    Scalar::from_poly(crate::kernel::poly::Poly::monomial(c.clone(), *e));
                for beta in 1..=self.n {
                    let deg = e[crate::kernel::poly::var_mu(beta)];
                    if deg != 0 {
                        term = term
                            .mul(&sd.shift_factors[alpha - 1][beta - 1].pow(deg as i64));
                    }
                }
                acc = acc.add(&term);
            }
            acc
        };
        shift(s.num()).div(&shift(s.den()))
    }

    /// word · c with the coefficient transported to the left.
    fn transport(&self, word: &[Gen], c: &Scalar) -> NcExpr {
        if c.is_zero() {
            return NcExpr::zero();
        }
        if !c.depends_on_mu() || word.iter().all(|g| g.family_rank() == 0) {
            let mut e = NcExpr::zero();
            e.add_term(Word(word.to_vec()), c.clone());
            return e;
        }
        let (init, last) = word.split_at(word.len() - 1);
        match last[0] {
            Gen::L(i, j) => self.transport(init, c).concat_word(&[Gen::L(i, j)]),
            Gen::T(i, j) => {
                let sd = self
                    .spectral
                    .as_ref()
                    .expect("mu coefficient cannot cross a T generator without spectral binding");
                let mut out = NcExpr::zero();
                for beta in 1..=self.n {
                    let cb = self.nabla(beta, c);
                    for k in 1..=self.n {
                        let entry = &sd.p_mats[beta - 1][i as usize - 1][k - 1];
                        for (wp, cp) in entry.terms() {
                            let coeff = cb.mul(cp);
                            let mut piece = self.transport(init, &coeff);
                            let mut suffix = wp.0.clone();
                            suffix.push(Gen::T(k as u8, j));
                            piece = piece.concat_word(&suffix);
                            out = out.add(&piece);
                        }
                    }
                }
                out
            }
            Gen::Tinv(..) => {
                panic!("mu coefficient cannot cross an explicit T^-1 generator")
            }
            Gen::Mu(_) => unreachable!(),
        }
    }

    /// Full product in the algebra: transports every right coefficient
    /// through the left word (spectral binding required when μ meets T).
    pub fn mul(&self, a: &NcExpr, b: &NcExpr) -> NcExpr {
        let mut out = NcExpr::zero();
        for (w1, c1) in a.terms() {
            for (w2, c2) in b.terms() {
                let moved = self.transport(&w1.0, c2).scale(c1);
                out = out.add(&moved.concat_word(&w2.0));
            }
        }
        out
    }

    /// Find a reduction step in the order-largest reducible word: returns
    /// (word, position, rule lead length).
    fn find_step(&self, e: &NcExpr) -> Option<(Word, usize, usize)> {
        let lead_lens: Vec<usize> = {
            let mut v: Vec<usize> = self.rules.keys().map(|w| w.0.len()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        for (w, _) in e.terms.iter().rev() {
            for pos in 0..w.0.len() {
                for &len in &lead_lens {
                    if pos + len > w.0.len() {
                        continue;
                    }
                    let sub = Word(w.0[pos..pos + len].to_vec());
                    if self.rules.contains_key(&sub) {
                        return Some((w.clone(), pos, len));
                    }
                }
            }
        }
        None
    }

    /// Reduce an expression to normal form (no reducible subword remains).
    pub fn normal_form(&self, e: &NcExpr) -> Result<NcExpr, NcError> {
        let mut cur = e.clone();
        let mut steps = 0usize;
        while let Some((w, pos, len)) = self.find_step(&cur) {
            steps += 1;
            if steps > self.budget {
                return Err(NcError::Budget);
            }
            let c = cur.coeff(&w);
            let sub = Word(w.0[pos..pos + len].to_vec());
            let rule = &self.rules[&sub];
            let prefix = &w.0[..pos];
            let suffix = &w.0[pos + len..];
            let mut rep = NcExpr::zero();
            for (wt, ct) in rule.tail.terms() {
                let moved = self.transport(prefix, ct);
                let mut tail_suffix = wt.0.clone();
                tail_suffix.extend_from_slice(suffix);
                rep = rep.add(&moved.concat_word(&tail_suffix));
            }
            cur.add_term(w.clone(), c.neg());
            cur = cur.add(&rep.scale(&c));
        }
        Ok(cur)
    }

    /// Three-valued identity check: reduce lhs − rhs.
    pub fn check_identity(&self, lhs: &NcExpr, rhs: &NcExpr) -> Verdict {
        let diff = lhs.sub(rhs);
        let nf = match self.normal_form(&diff) {
            Ok(nf) => nf,
            Err(e) => return Verdict::Inconclusive(e.to_string()),
        };
        if nf.is_zero() {
            return Verdict::Verified;
        }
        let witness = {
            let (w, c) = nf.leading().unwrap();
            format!("nonzero normal form, leading term ({c})*{w}")
        };
        if self.overlap_check(3).all_resolved() {
            Verdict::Refuted(witness)
        } else {
            Verdict::Inconclusive(witness)
        }
    }

    /// Diamond-lemma diagnostic: resolve all overlap ambiguities of the rule
    /// leads up to the given word degree. Cached for degree 3.
    pub fn overlap_check(&self, max_degree: usize) -> OverlapReport {
        if max_degree == 3 {
            return self
                .overlap_cache
                .get_or_init(|| self.overlap_check_uncached(3))
                .clone();
        }
        self.overlap_check_uncached(max_degree)
    }

    fn overlap_check_uncached(&self, max_degree: usize) -> OverlapReport {
        let mut report = OverlapReport::default();
        let leads: Vec<&Word> = self.rules.keys().collect();
        for v1 in &leads {
            for v2 in &leads {
                let (l1, l2) = (v1.0.len(), v2.0.len());
                // Proper overlaps: a suffix of v1 equals a prefix of v2.
                for o in 1..l1.min(l2) {
                    if v1.0[l1 - o..] != v2.0[..o] {
                        continue;
                    }
                    let mut w = v1.0.clone();
                    w.extend_from_slice(&v2.0[o..]);
                    if w.len() > max_degree {
                        continue;
                    }
                    report.checked += 1;
                    if !self.overlap_resolves(&w, v1, 0, v2, l1 - o) {
                        report
                            .unresolved
                            .push((Word(w), (*v1).clone(), (*v2).clone()));
                    }
                }
                // Containment: v2 a proper subword of v1.
                if l2 < l1 && l1 <= max_degree {
                    for pos in 0..=l1 - l2 {
                        if v1.0[pos..pos + l2] == v2.0[..] {
                            report.checked += 1;
                            if !self.overlap_resolves(&v1.0.clone(), v1, 0, v2, pos) {
                                report.unresolved.push((
                                    (*v1).clone(),
                                    (*v1).clone(),
                                    (*v2).clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Replace the occurrence of `lead` at `pos` inside `w` by the rule tail,
    /// transporting μ coefficients across the prefix.
    fn reduce_once_at(&self, w: &[Gen], lead: &Word, pos: usize) -> NcExpr {
        let rule = &self.rules[lead];
        let prefix = &w[..pos];
        let suffix = &w[pos + lead.0.len()..];
        let mut rep = NcExpr::zero();
        for (wt, ct) in rule.tail.terms() {
            let moved = self.transport(prefix, ct);
            let mut tail_suffix = wt.0.clone();
            tail_suffix.extend_from_slice(suffix);
            rep = rep.add(&moved.concat_word(&tail_suffix));
        }
        rep
    }

    fn overlap_resolves(&self, w: &[Gen], v1: &Word, p1: usize, v2: &Word, p2: usize) -> bool {
        let a = self.reduce_once_at(w, v1, p1);
        let b = self.reduce_once_at(w, v2, p2);
        match (self.normal_form(&a), self.normal_form(&b)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    }

    /// Knuth–Bendix completion: orient the differences of unresolved critical
    /// pairs into new rules until every overlap up to `max_degree` resolves
    /// (or the round budget runs out, reported via the returned diagnostic).
    pub fn complete(
        &mut self,
        max_degree: usize,
        max_rounds: usize,
    ) -> Result<OverlapReport, NcError> {
        for _ in 0..max_rounds {
            let rep = self.overlap_check_uncached(max_degree);
            if rep.all_resolved() {
                self.overlap_cache = OnceLock::new();
                return Ok(rep);
            }
            let mut progressed = false;
            for (w, v1, v2) in &rep.unresolved {
                let a = self.normal_form(&self.reduce_once_at(&w.0, v1, 0))?;
                let l2 = v2.0.len();
                let pos = (1..=w.0.len() - l2)
                    .find(|&p| w.0[p..p + l2] == v2.0[..])
                    .ok_or_else(|| NcError::Other("overlap position vanished".into()))?;
                let b = self.normal_form(&self.reduce_once_at(&w.0, v2, pos))?;
                let rel = self.normal_form(&a.sub(&b))?;
                if rel.is_zero() {
                    continue;
                }
                let rules: Vec<Rule> = orient_relations(vec![(rel, "completion".to_string())])?
                    .into_iter()
                    .filter(|r| !self.rules.contains_key(&r.lead))
                    .collect();
                if !rules.is_empty() {
                    self.add_rules(rules);
                    progressed = true;
                }
            }
            if !progressed {
                return Err(NcError::Other(
                    "completion stalled with unresolved overlaps".into(),
                ));
            }
        }
        Ok(self.overlap_check_uncached(max_degree))
    }

    /// Debug dump: one rule per line, "WORD -> coeff*WORD + ...".
    pub fn dump_rules(&self) -> String {
        let mut out = String::new();
        for r in self.rules.values() {
            out.push_str(&format!("{} -> {}   [{}]\n", r.lead, r.tail, r.tag));
        }
        out
    }
}

/// Row-reduce a batch of relations (NcExpr = 0) over the scalar field and
/// orient each pivot into a rule. The reduced system is inter-reduced: no
/// rule tail contains another rule's lead.
pub fn orient_relations(
    relations: Vec<(NcExpr, String)>,
) -> Result<Vec<Rule>, NcError> {
    let mut rows: Vec<(NcExpr, String)> = relations
        .into_iter()
        .filter(|(e, _)| !e.is_zero())
        .collect();
    let mut rules: Vec<Rule> = Vec::new();
    loop {
        // Pick the row with the largest leading word.
        let best = rows
            .iter()
            .enumerate()
            .max_by(|(_, (a, _)), (_, (b, _))| {
                a.leading().unwrap().0.cmp(b.leading().unwrap().0)
            })
            .map(|(i, _)| i);
        let Some(i) = best else { break };
        let (pivot_expr, tag) = rows.swap_remove(i);
        let (lead, coeff) = {
            let (w, c) = pivot_expr.leading().unwrap();
            (w.clone(), c.clone())
        };
        if lead.0.is_empty() {
            return Err(NcError::Contradiction);
        }
        let tail = pivot_expr
            .sub(&{
                let mut e = NcExpr::zero();
                e.add_term(lead.clone(), coeff.clone());
                e
            })
            .scale(&coeff.inv())
            .neg();
        // Eliminate the pivot from the remaining rows and earlier tails.
        rows = rows
            .into_iter()
            .map(|(e, t)| {
                let c = e.coeff(&lead);
                if c.is_zero() {
                    (e, t)
                } else {
                    let mut lead_term = NcExpr::zero();
                    lead_term.add_term(lead.clone(), c.clone());
                    (e.sub(&lead_term).add(&tail.scale(&c)), t)
                }
            })
            .filter(|(e, _)| !e.is_zero())
            .collect();
        for r in &mut rules {
            let c = r.tail.coeff(&lead);
            if !c.is_zero() {
                let mut lead_term = NcExpr::zero();
                lead_term.add_term(lead.clone(), c.clone());
                r.tail = r.tail.sub(&lead_term).add(&tail.scale(&c));
            }
        }
        rules.push(Rule {
            lead,
            tail,
            tag,
        });
    }
    Ok(rules)
}

// ---------------------------------------------------------------------------
// Tensor operators with noncommutative entries
// ---------------------------------------------------------------------------

/// A dense operator on V^{⊗legs} whose entries are NcExprs. Index layout
/// matches `TensorOp` (big-endian digits).
#[derive(Clone)]
pub struct NcTensor {
    dim: usize,
    legs: usize,
    side: usize,
    entries: Vec<NcExpr>,
}

impl NcTensor {
    pub fn zeros(dim: usize, legs: usize) -> Self {
        let side = dim.pow(legs as u32);
        NcTensor {
            dim,
            legs,
            side,
            entries: vec![NcExpr::zero(); side * side],
        }
    }

    pub fn identity(dim: usize, legs: usize) -> Self {
        let mut t = NcTensor::zeros(dim, legs);
        for i in 0..t.side {
            t.entries[i * t.side + i] = NcExpr::one();
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn at(&self, r: usize, c: usize) -> &NcExpr {
        &self.entries[r * self.side + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut NcExpr {
        &mut self.entries[r * self.side + c]
    }

    /// Lift a scalar operator.
    pub fn from_scalar_op(op: &TensorOp) -> Self {
        let mut t = NcTensor::zeros(op.dim(), op.legs());
        for r in 0..t.side {
            for c in 0..t.side {
                let s = op.at(r, c);
                if !s.is_zero() {
                    t.entries[r * t.side + c] = NcExpr::from_scalar(s.clone());
                }
            }
        }
        t
    }

    /// The generator matrix of a family placed on one leg of a `legs`-leg
    /// space: entries (X_leg)^{i k⃗}_{j l⃗} = δ_{k⃗ l⃗} · X^i_j.
    pub fn generator_on_leg(
        family: fn(u8, u8) -> Gen,
        dim: usize,
        leg: usize,
        legs: usize,
    ) -> Self {
        let mut t = NcTensor::zeros(dim, legs);
        let one_leg_side = dim.pow(legs as u32);
        let stride = dim.pow((legs - leg) as u32);
        for r in 0..one_leg_side {
            for c in 0..one_leg_side {
                let (rd, cd) = ((r / stride) % dim, (c / stride) % dim);
                let same_elsewhere = r - rd * stride == c - cd * stride;
                if same_elsewhere {
                    t.entries[r * one_leg_side + c] =
                        NcExpr::gen(family(rd as u8 + 1, cd as u8 + 1));
                }
            }
        }
        t
    }

    /// A 1-leg matrix of arbitrary expressions placed on one leg.
    pub fn from_matrix_on_leg(m: &[Vec<NcExpr>], leg: usize, legs: usize) -> Self {
        let dim = m.len();
        let mut t = NcTensor::zeros(dim, legs);
        let stride = dim.pow((legs - leg) as u32);
        for r in 0..t.side {
            for c in 0..t.side {
                let (rd, cd) = ((r / stride) % dim, (c / stride) % dim);
                if r - rd * stride == c - cd * stride {
                    t.entries[r * t.side + c] = m[rd][cd].clone();
                }
            }
        }
        t
    }

    pub fn add(&self, other: &NcTensor) -> NcTensor {
        let mut out = self.clone();
        for i in 0..self.entries.len() {
            out.entries[i] = out.entries[i].add(&other.entries[i]);
        }
        out
    }

    pub fn sub(&self, other: &NcTensor) -> NcTensor {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcTensor {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> NcTensor {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.scale(c);
        }
        out
    }

    /// Matrix product with entry products taken in the algebra.
    pub fn compose(&self, other: &NcTensor, sys: &RewriteSystem) -> NcTensor {
        assert_eq!(self.side, other.side);
        let mut out = NcTensor::zeros(self.dim, self.legs);
        for r in 0..self.side {
            for k in 0..self.side {
                let a = &self.entries[r * self.side + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..self.side {
                    let b = &other.entries[k * self.side + c];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = sys.mul(a, b);
                    out.entries[r * self.side + c] =
                        out.entries[r * self.side + c].add(&prod);
                }
            }
        }
        out
    }

    /// Plain trace over one leg (1-based), like `TensorOp::partial_trace`.
    pub fn partial_trace(&self, leg: usize) -> NcTensor {
        let new_legs = self.legs - 1;
        let mut out = NcTensor::zeros(self.dim, new_legs);
        let stride = self.dim.pow((self.legs - leg) as u32);
        let expand = |idx: usize, k: usize| -> usize {
            let hi = idx / stride;
            let lo = idx % stride;
            (hi * self.dim + k) * stride + lo
        };
        for r in 0..out.side {
            for c in 0..out.side {
                let mut acc = NcExpr::zero();
                for k in 0..self.dim {
                    acc = acc.add(self.at(expand(r, k), expand(c, k)));
                }
                out.entries[r * out.side + c] = acc;
            }
        }
        out
    }

    /// Weighted (R-)trace over one leg: Tr_(leg)(D_leg · Y) with a scalar D.
    pub fn r_trace(&self, d: &TensorOp, leg: usize) -> NcTensor {
        let d_full = NcTensor::from_scalar_op(&d.embed_block(leg, self.legs));
        // D is scalar so no transport concerns; use a throwaway system.
        let sys = RewriteSystem::new(self.dim);
        d_full.compose(self, &sys).partial_trace(leg)
    }

    pub fn trace(&self) -> NcExpr {
        let mut acc = NcExpr::zero();
        for i in 0..self.side {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    /// Reduce all entries to normal form.
    pub fn normal_form(&self, sys: &RewriteSystem) -> Result<NcTensor, NcError> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = sys.normal_form(e)?;
        }
        Ok(out)
    }

    /// Entrywise identity check; Verified only if every entry verifies.
    pub fn check_equal(&self, other: &NcTensor, sys: &RewriteSystem) -> Verdict {
        for r in 0..self.side {
            for c in 0..self.side {
                match sys.check_identity(self.at(r, c), other.at(r, c)) {
                    Verdict::Verified => {}
                    v => return v,
                }
            }
        }
        Verdict::Verified
    }
}

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

/// Relation entries of the reflection equation L₁R L₁R = R L₁R L₁ (braid
/// form, 2 legs), row-reduced and oriented into LL rules.
pub fn build_re_presentation(ctx: &RMatrixContext) -> RewriteSystem {
    let mut sys = RewriteSystem::new(ctx.n);
    sys.add_rules(re_rule_set(ctx));
    sys
}

/// Raw entries of L₁R L₁R − R L₁R L₁ (2 legs), before orientation.
pub fn re_relation_entries(ctx: &RMatrixContext) -> Vec<NcExpr> {
    let r = NcTensor::from_scalar_op(&ctx.r);
    let l1 = NcTensor::generator_on_leg(Gen::L, ctx.dim(), 1, 2);
    let free = RewriteSystem::new(ctx.n);
    let lhs = l1.compose(&r, &free).compose(&l1, &free).compose(&r, &free);
    let rhs = r.compose(&l1, &free).compose(&r, &free).compose(&l1, &free);
    let mut relations = Vec::new();
    for row in 0..lhs.side() {
        for col in 0..lhs.side() {
            relations.push(lhs.at(row, col).sub(rhs.at(row, col)));
        }
    }
    relations
}

pub fn re_rule_set(ctx: &RMatrixContext) -> Vec<Rule> {
    let relations = re_relation_entries(ctx)
        .into_iter()
        .map(|e| (e, "reflection-equation".to_string()))
        .collect();
    orient_relations(relations).expect("RE relations are consistent")
}

/// Relation entries of R T₁T₂ = T₁T₂ R, oriented into TT rules.
pub fn build_rtt_presentation(ctx: &RMatrixContext) -> RewriteSystem {
    let mut sys = RewriteSystem::new(ctx.n);
    sys.add_rules(rtt_rule_set(ctx));
    sys
}

pub fn rtt_rule_set(ctx: &RMatrixContext) -> Vec<Rule> {
    let r = NcTensor::from_scalar_op(&ctx.r);
    let free = RewriteSystem::new(ctx.n);
    let t1 = NcTensor::generator_on_leg(Gen::T, ctx.dim(), 1, 2);
    let t2 = NcTensor::generator_on_leg(Gen::T, ctx.dim(), 2, 2);
    let t1t2 = t1.compose(&t2, &free);
    let lhs = r.compose(&t1t2, &free);
    let rhs = t1t2.compose(&r, &free);
    let mut relations = Vec::new();
    for row in 0..lhs.side() {
        for col in 0..lhs.side() {
            relations.push((
                lhs.at(row, col).sub(rhs.at(row, col)),
                "rtt".to_string(),
            ));
        }
    }
    orient_relations(relations).expect("RTT relations are consistent")
}

/// Full Heisenberg-double presentation: RE rules + RTT rules + the cross
/// rules obtained by orienting γ²T₁L₂ = R L₁ R T₁ towards L-before-T words.
/// In SL mode the context adapter has already substituted γ = p.
pub fn build_hd_presentation(ctx: &RMatrixContext) -> RewriteSystem {
    let mut sys = RewriteSystem::new(ctx.n);
    sys.add_rules(re_rule_set(ctx));
    sys.add_rules(rtt_rule_set(ctx));
    sys.add_rules(cross_rule_set(ctx));
    sys
}

pub fn cross_rule_set(ctx: &RMatrixContext) -> Vec<Rule> {
    let free = RewriteSystem::new(ctx.n);
    let r = NcTensor::from_scalar_op(&ctx.r);
    let l1 = NcTensor::generator_on_leg(Gen::L, ctx.dim(), 1, 2);
    let l2 = NcTensor::generator_on_leg(Gen::L, ctx.dim(), 2, 2);
    let t1 = NcTensor::generator_on_leg(Gen::T, ctx.dim(), 1, 2);
    let gamma2 = ctx.gamma_pow(2);
    let lhs = t1.compose(&l2, &free).scale(&gamma2);
    let rhs = r.compose(&l1, &free).compose(&r, &free).compose(&t1, &free);
    let mut relations = Vec::new();
    for row in 0..lhs.side() {
        for col in 0..lhs.side() {
            relations.push((
                lhs.at(row, col).sub(rhs.at(row, col)),
                "heisenberg-cross".to_string(),
            ));
        }
    }
    orient_relations(relations).expect("cross relations are consistent")
}
