//! Exact dense linear operators on V^{⊗k} with leg bookkeeping.
//!
//! Row/column indices are big-endian digit strings base `dim`: leg 1 is the
//! most significant digit. All entries are exact [`Scalar`]s; all operations
//! are pure.

use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct TensorOp {
    dim: usize,
    legs: usize,
    side: usize,
    /// Row-major, side × side.
    entries: Vec<Scalar>,
}

#[derive(Debug, thiserror::Error)]
pub enum TensorError {
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
    #[error("leg index out of range: {0}")]
    LegOutOfRange(usize),
    #[error("singular linear system: {0}")]
    Singular(String),
}

impl TensorOp {
    pub fn zeros(dim: usize, legs: usize) -> Self {
        let side = dim.pow(legs as u32);
        TensorOp {
            dim,
            legs,
            side,
            entries: vec![Scalar::zero(); side * side],
        }
    }

    pub fn identity(dim: usize, legs: usize) -> Self {
        let mut t = TensorOp::zeros(dim, legs);
        for i in 0..t.side {
            t.entries[i * t.side + i] = Scalar::one();
        }
        t
    }

    /// Permutation operator P on two legs: P(e_i ⊗ e_j) = e_j ⊗ e_i.
    pub fn permutation(dim: usize) -> Self {
        let mut t = TensorOp::zeros(dim, 2);
        for i in 0..dim {
            for j in 0..dim {
                // Column (i,j) maps to row (j,i).
                t.set(&[j, i], &[i, j], Scalar::one());
            }
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

    /// Decode a flat index into per-leg digits (leg 1 first).
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.legs];
        for leg in (0..self.legs).rev() {
            digits[leg] = idx % self.dim;
            idx /= self.dim;
        }
        digits
    }

    /// Encode per-leg digits (leg 1 first) into a flat index.
    pub fn encode(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.legs);
        let mut idx = 0usize;
        for &d in digits {
            debug_assert!(d < self.dim);
            idx = idx * self.dim + d;
        }
        idx
    }

    pub fn at(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.side + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Scalar {
        &mut self.entries[row * self.side + col]
    }

    /// Entry accessor by digit strings (row digits, column digits).
    pub fn get(&self, row: &[usize], col: &[usize]) -> &Scalar {
        self.at(self.encode(row), self.encode(col))
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], v: Scalar) {
        let (r, c) = (self.encode(row), self.encode(col));
        self.entries[r * self.side + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|s| s.is_zero())
    }

    pub fn equals(&self, other: &TensorOp) -> bool {
        self.dim == other.dim && self.legs == other.legs && self.entries == other.entries
    }

    /// First entry where the two operators differ: (row digits, col digits,
    /// lhs entry, rhs entry). Used for structured check witnesses.
    pub fn first_difference(&self, other: &TensorOp) -> Option<(Vec<usize>, Vec<usize>, Scalar, Scalar)> {
        assert!(self.dim == other.dim && self.legs == other.legs);
        for r in 0..self.side {
            for c in 0..self.side {
                if self.at(r, c) != other.at(r, c) {
                    return Some((
                        self.decode(r),
                        self.decode(c),
                        self.at(r, c).clone(),
                        other.at(r, c).clone(),
                    ));
                }
            }
        }
        None
    }

    pub fn add(&self, other: &TensorOp) -> TensorOp {
        assert!(self.dim == other.dim && self.legs == other.legs, "add: shape mismatch");
        let mut t = self.clone();
        for (a, b) in t.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        t
    }

    pub fn sub(&self, other: &TensorOp) -> TensorOp {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> TensorOp {
        let mut t = self.clone();
        for a in t.entries.iter_mut() {
            *a = a.mul(c);
        }
        t
    }

    /// Matrix product self · other (zero entries skipped: the braid-type
    /// operators in this library are weight-block sparse).
    pub fn compose(&self, other: &TensorOp) -> TensorOp {
        assert!(
            self.dim == other.dim && self.legs == other.legs,
            "compose: shape mismatch"
        );
        let side = self.side;
        let mut t = TensorOp::zeros(self.dim, self.legs);
        for i in 0..side {
            for k in 0..side {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..side {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let e = t.at_mut(i, j);
                    *e = e.add(&a.mul(b));
                }
            }
        }
        t
    }

    /// Kronecker product (self on the first legs, other on the last).
    pub fn kron(&self, other: &TensorOp) -> TensorOp {
        assert_eq!(self.dim, other.dim);
        let mut t = TensorOp::zeros(self.dim, self.legs + other.legs);
        for r1 in 0..self.side {
            for c1 in 0..self.side {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.side {
                    for c2 in 0..other.side {
                        let b = other.at(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        let r = r1 * other.side + r2;
                        let c = c1 * other.side + c2;
                        t.entries[r * t.side + c] = a.mul(b);
                    }
                }
            }
        }
        t
    }

    /// Embed a block of consecutive legs: `self` acts on legs
    /// `start..start+self.legs` (1-based) of a `total`-leg space, identity on
    /// the rest.
    pub fn embed_block(&self, start: usize, total: usize) -> TensorOp {
        assert!(start >= 1 && start + self.legs - 1 <= total, "embed_block: out of range");
        let left = TensorOp::identity(self.dim, start - 1);
        let right = TensorOp::identity(self.dim, total - (start - 1) - self.legs);
        left.kron(self).kron(&right)
    }

    /// X_i = I^{⊗(i−1)} ⊗ X ⊗ I^{⊗(k−i−1)} for a 2-leg X.
    pub fn embed_at(&self, i: usize, k: usize) -> TensorOp {
        assert_eq!(self.legs, 2, "embed_at requires a 2-leg operator");
        assert!(i >= 1 && i <= k - 1, "embed_at: position out of range");
        self.embed_block(i, k)
    }

    /// X_{ij}: X acting in component spaces i and j (in that order), identity
    /// elsewhere. i ≠ j, both within 1..=k.
    pub fn embed_pair(&self, i: usize, j: usize, k: usize) -> TensorOp {
        assert_eq!(self.legs, 2, "embed_pair requires a 2-leg operator");
        assert!(i != j, "embed_pair: i = j");
        assert!(i >= 1 && i <= k && j >= 1 && j <= k, "embed_pair: leg out of range");
        let mut t = TensorOp::zeros(self.dim, k);
        let side = t.side;
        for r in 0..side {
            let rd = t.decode(r);
            for c in 0..side {
                let cd = t.decode(c);
                // Identity on all legs except i and j.
                let mut ok = true;
                for leg in 0..k {
                    if leg != i - 1 && leg != j - 1 && rd[leg] != cd[leg] {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let v = self.get(&[rd[i - 1], rd[j - 1]], &[cd[i - 1], cd[j - 1]]);
                if !v.is_zero() {
                    t.entries[r * side + c] = v.clone();
                }
            }
        }
        t
    }

    /// Trace over leg i (1-based); result acts on k−1 legs.
    pub fn partial_trace(&self, i: usize) -> TensorOp {
        assert!(i >= 1 && i <= self.legs, "partial_trace: leg out of range");
        let mut t = TensorOp::zeros(self.dim, self.legs - 1);
        let side = t.side;
        for r in 0..side {
            let rd = t.decode(r);
            for c in 0..side {
                let cd = t.decode(c);
                let mut acc = Scalar::zero();
                for d in 0..self.dim {
                    let mut rfull = rd.clone();
                    let mut cfull = cd.clone();
                    rfull.insert(i - 1, d);
                    cfull.insert(i - 1, d);
                    acc = acc.add(self.get(&rfull, &cfull));
                }
                if !acc.is_zero() {
                    t.entries[r * side + c] = acc;
                }
            }
        }
        t
    }

    /// Full trace.
    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.side {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Scalar) -> TensorOp {
        let mut t = self.clone();
        for e in t.entries.iter_mut() {
            *e = f(e);
        }
        t
    }

    /// Exact inverse via Gauss–Jordan elimination over the fraction field.
    pub fn inverse(&self) -> Result<TensorOp, TensorError> {
        let side = self.side;
        let mut a: Vec<Vec<Scalar>> = (0..side)
            .map(|r| (0..side).map(|c| self.at(r, c).clone()).collect())
            .collect();
        let mut inv: Vec<Vec<Scalar>> = (0..side)
            .map(|r| {
                (0..side)
                    .map(|c| if r == c { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        for col in 0..side {
            let pivot = (col..side)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| TensorError::Singular(format!("column {col}")))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let pinv = a[col][col].inv();
            for c in 0..side {
                a[col][c] = a[col][c].mul(&pinv);
                inv[col][c] = inv[col][c].mul(&pinv);
            }
            for r in 0..side {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..side {
                    let ac = a[col][c].mul(&f);
                    a[r][c] = a[r][c].sub(&ac);
                    let ic = inv[col][c].mul(&f);
                    inv[r][c] = inv[r][c].sub(&ic);
                }
            }
        }
        let mut t = TensorOp::zeros(self.dim, self.legs);
        for r in 0..side {
            for c in 0..side {
                t.entries[r * side + c] = inv[r][c].clone();
            }
        }
        Ok(t)
    }

    /// Exact rank over the fraction field.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Scalar>> = (0..self.side)
            .map(|r| (0..self.side).map(|c| self.at(r, c).clone()).collect())
            .collect();
        rank_of(rows)
    }
}

/// Exact rank of a dense matrix over the fraction field (Gaussian
/// elimination with exact arithmetic).
pub fn rank_of(mut rows: Vec<Vec<Scalar>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let pinv = rows[row][col].inv();
        for c in col..ncols {
            rows[row][c] = rows[row][c].mul(&pinv);
        }
        for r in 0..rows.len() {
            if r == row || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..ncols {
                let v = rows[row][c].mul(&f);
                rows[r][c] = rows[r][c].sub(&v);
            }
        }
        rank += 1;
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rank
}

/// Solve A·X = B exactly for square A (columns of B are independent
/// right-hand sides). Returns the matrix X or an error if A is singular.
pub fn solve_multi(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, TensorError> {
    let nr = a.len();
    assert!(nr > 0 && a.iter().all(|r| r.len() == nr), "solve_multi: A must be square");
    assert_eq!(b.len(), nr);
    let nc = b[0].len();
    let mut m: Vec<Vec<Scalar>> = (0..nr)
        .map(|r| {
            let mut row = a[r].clone();
            row.extend(b[r].iter().cloned());
            row
        })
        .collect();
    for col in 0..nr {
        let pivot = (col..nr)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| TensorError::Singular(format!("column {col}")))?;
        m.swap(col, pivot);
        let pinv = m[col][col].inv();
        for c in col..nr + nc {
            m[col][c] = m[col][c].mul(&pinv);
        }
        for r in 0..nr {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..nr + nc {
                let v = m[col][c].mul(&f);
                m[r][c] = m[r][c].sub(&v);
            }
        }
    }
    Ok((0..nr).map(|r| m[r][nr..].to_vec()).collect())
}
