//! Triangular operators on `V/x^{N+1}V` in the monomial basis.
//!
//! Entry `(i, j)` of a [`TriangularOperator`] is the coefficient of `x^i` in
//! `A x^j`, so rows are target degrees and columns are source degrees.
//! Triangular means `(i, j) = 0` for `i < j`; strict means `(i, j) = 0` for
//! `i <= j`. Both conditions are checked by every constructor.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Coefficient};
use crate::series::{FormalDiffeo, FormalVectorField, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriangularOperator {
    dim: usize,
    entries: Vec<Vec<Coefficient>>,
    strict: bool,
}

impl TriangularOperator {
    /// Builds from row-major entries, rejecting anything above the diagonal.
    pub fn from_rows(entries: Vec<Vec<Coefficient>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::OutOfRange {
                what: "dimension",
                detail: "operator must have dimension >= 1".into(),
            });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::OutOfRange {
                    what: "row length",
                    detail: format!("row {i} has {} entries, expected {dim}", row.len()),
                });
            }
            if let Some(j) = (i + 1..dim).find(|&j| !row[j].is_zero()) {
                return Err(Error::NotTriangular { row: i, col: j });
            }
        }
        let strict = (0..dim).all(|i| entries[i][i].is_zero());
        Ok(TriangularOperator {
            dim,
            entries,
            strict,
        })
    }

    fn from_rows_unchecked(entries: Vec<Vec<Coefficient>>) -> Self {
        let op = Self::from_rows(entries).expect("triangularity is closed under this operation");
        debug_assert!(op.dim > 0);
        op
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_rows_unchecked(vec![vec![Coefficient::zero(); dim]; dim])
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            op.entries[i][i] = Coefficient::one();
        }
        op.strict = false;
        op
    }

    /// Builds the operator column by column: `columns(j)` is `A x^j` as a
    /// series (truncated to `dim - 1` if longer).
    pub fn from_columns<F>(dim: usize, mut columns: F) -> Result<Self>
    where
        F: FnMut(usize) -> TruncatedSeries,
    {
        let mut entries = vec![vec![Coefficient::zero(); dim]; dim];
        for j in 0..dim {
            let col = columns(j);
            for (i, row) in entries.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
        }
        Self::from_rows(entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_unitriangular(&self) -> bool {
        (0..self.dim).all(|i| self.entries[i][i].is_one())
    }

    pub fn entry(&self, row: usize, col: usize) -> &Coefficient {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Coefficient>] {
        &self.entries
    }

    /// `A x^col` as a series of order `dim - 1`.
    pub fn column(&self, col: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(
            (0..self.dim)
                .map(|i| self.entries[i][col].clone())
                .collect(),
        )
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self::from_rows_unchecked(entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Coefficient::one()))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| x * c).collect())
            .collect();
        Self::from_rows_unchecked(entries)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = vec![vec![Coefficient::zero(); n]; n];
        // Lower triangular: (AB)_{ij} = sum_{k=j..=i} A_{ik} B_{kj}.
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate().take(i + 1) {
                let mut acc = Coefficient::zero();
                for k in j..=i {
                    let a = &self.entries[i][k];
                    let b = &other.entries[k][j];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                *slot = acc;
            }
        }
        let out = Self::from_rows_unchecked(entries);
        debug_assert!(!(self.strict || other.strict) || out.strict);
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Applies the operator to a series of order `dim - 1`.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let coeffs = (0..self.dim)
            .map(|i| {
                (0..=i)
                    .map(|j| &self.entries[i][j] * f.coeff(j))
                    .fold(Coefficient::zero(), |acc, x| acc + x)
            })
            .collect();
        TruncatedSeries::from_coeffs(coeffs)
    }
}

/// Matrix of `T(gamma): F(x) -> F(gamma(x))` on `V/x^{N+1}V`; column `j`
/// holds the coefficients of `gamma(x)^j`.
pub fn rep_t(gamma: &FormalDiffeo, n: usize) -> Result<TriangularOperator> {
    if gamma.order() < n {
        return Err(Error::InsufficientOrder {
            have: gamma.order(),
            need: n,
        });
    }
    let g = gamma.as_series().truncate_to(n);
    let mut power = TruncatedSeries::one(n);
    let mut cols = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        cols.push(power.clone());
        power = power.mul(&g);
    }
    let op = TriangularOperator::from_columns(n + 1, |j| cols[j].clone())?;
    debug_assert!(op.is_unitriangular());
    Ok(op)
}

/// Matrix of `sum_j p_j x^{j+1} d/dx`: `L_j x^m = m x^{m+j}`.
///
/// On `V/x^{n+1}V` only `p_1..p_{n-1}` act, so the field needs grading
/// order at least `n - 1`.
pub fn rep_field(field: &FormalVectorField, n: usize) -> Result<TriangularOperator> {
    let need = n.saturating_sub(1);
    if field.order() < need {
        return Err(Error::InsufficientOrder {
            have: field.order(),
            need,
        });
    }
    let mut entries = vec![vec![Coefficient::zero(); n + 1]; n + 1];
    for m in 1..=n {
        for j in 1..=n - m {
            let p = field.coeff(j);
            if !p.is_zero() {
                entries[m + j][m] = p * rational::int(m as i64);
            }
        }
    }
    let op = TriangularOperator::from_rows(entries)?;
    Ok(TriangularOperator { strict: true, ..op })
}

/// `exp S = sum_k S^k / k!`, a finite sum for strict `S`.
pub fn exp_strict(s: &TriangularOperator) -> Result<TriangularOperator> {
    if !s.is_strict() {
        return Err(Error::NotStrict);
    }
    let mut acc = TriangularOperator::identity(s.dim());
    let mut term = TriangularOperator::identity(s.dim());
    for k in 1..=s.dim() {
        term = term.mul(s)?.scale(&rational::ratio(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    debug_assert!(acc.is_unitriangular());
    Ok(acc)
}

/// `ln(1 + S) = sum_k (-1)^{k-1} S^k / k` for unitriangular `A = 1 + S`.
pub fn log_unitriangular(a: &TriangularOperator) -> Result<TriangularOperator> {
    if !a.is_unitriangular() {
        return Err(Error::NotUnitriangular);
    }
    let s = a.sub(&TriangularOperator::identity(a.dim()))?;
    let mut acc = TriangularOperator::zero(a.dim());
    let mut power = TriangularOperator::identity(a.dim());
    for k in 1..=a.dim() {
        power = power.mul(&s)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&power.scale(&rational::ratio(sign, k as i64)))?;
    }
    debug_assert!(acc.is_strict());
    Ok(acc)
}

/// `x^{2n} d^n/dx^n` on the truncation: `x^k -> k!/(k-n)! x^{k+n}` for
/// `k >= n`, zero below. Its restriction to `x^n` is `x^n -> n! x^{2n}`.
pub fn shifted_derivative(n: usize, dim: usize) -> TriangularOperator {
    let mut entries = vec![vec![Coefficient::zero(); dim]; dim];
    for k in n..dim {
        if k + n < dim {
            let falling =
                (k - n + 1..=k).fold(Coefficient::one(), |acc, f| acc * rational::int(f as i64));
            entries[k + n][k] = falling;
        }
    }
    TriangularOperator::from_rows_unchecked(entries)
}

/// The single-column operator `x^n -> n! x^{2n}`, `x^k -> 0` for `k != n`.
pub fn monomial_q(n: usize, dim: usize) -> TriangularOperator {
    let mut entries = vec![vec![Coefficient::zero(); dim]; dim];
    if 2 * n < dim {
        entries[2 * n][n] = rational::factorial_q(n);
    }
    TriangularOperator::from_rows_unchecked(entries)
}

/// `H x^k = h(x) x^k` for `k >= 2`, `H 1 = H x = 0`, where
/// `gamma(x) - x = x^2 h(x)`.
pub fn h_operator(gamma: &FormalDiffeo, n: usize) -> Result<TriangularOperator> {
    if gamma.order() < n {
        return Err(Error::InsufficientOrder {
            have: gamma.order(),
            need: n,
        });
    }
    let h = gamma.quotient_h();
    TriangularOperator::from_columns(n + 1, |k| {
        let mut col = TruncatedSeries::zero(n);
        if k >= 2 {
            for (d, c) in h.coeffs().iter().enumerate() {
                if k + d <= n {
                    col = col.add(&TruncatedSeries::monomial(n, k + d, c.clone()));
                }
            }
        }
        col
    })
}

/// Operators of the Taylor expansion `T(gamma) = sum_n H^n Q_n / n!`.
#[derive(Clone, Debug)]
pub struct TaylorDecomposition {
    pub h: TriangularOperator,
    /// `q[n] = x^{2n} d^n/dx^n`, for `n = 0..=N/2`; higher `n` vanish on the
    /// truncation.
    pub q: Vec<TriangularOperator>,
}

impl TaylorDecomposition {
    pub fn reassemble(&self) -> Result<TriangularOperator> {
        let dim = self.h.dim();
        let mut acc = TriangularOperator::zero(dim);
        let mut h_power = TriangularOperator::identity(dim);
        for (n, q) in self.q.iter().enumerate() {
            if n > 0 {
                h_power = h_power.mul(&self.h)?;
            }
            let term = h_power.mul(q)?.scale(&rational::factorial_q(n).recip());
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Splits `T(gamma)` into `H` and the `Q_n`, then checks the reassembled sum
/// against [`rep_t`] and fails with an invariant violation on mismatch.
pub fn taylor_decomposition(gamma: &FormalDiffeo, n: usize) -> Result<TaylorDecomposition> {
    let h = h_operator(gamma, n)?;
    let q = (0..=n / 2).map(|k| shifted_derivative(k, n + 1)).collect();
    let decomposition = TaylorDecomposition { h, q };
    let target = rep_t(gamma, n)?;
    if decomposition.reassemble()? != target {
        return Err(Error::InvariantViolation(
            "Taylor decomposition does not reassemble T(gamma)".into(),
        ));
    }
    Ok(decomposition)
}
