//! Exact two-phase simplex over the rationals.
//!
//! Solves `min c.x` subject to `A x = b`, `x >= 0`. Every pivot is carried
//! out in exact arithmetic, so the reported optimum is the true optimum of the
//! program, not an approximation of it.

use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Coefficient;

/// Entering-variable selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index rule; never cycles.
    #[default]
    Bland,
    /// Most negative reduced cost. Falls back to Bland after a run of
    /// degenerate pivots.
    Dantzig,
}

impl FromStr for PivotRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bland" => Ok(PivotRule::Bland),
            "dantzig" => Ok(PivotRule::Dantzig),
            other => Err(Error::Unknown {
                what: "pivot rule",
                name: other.to_string(),
            }),
        }
    }
}

impl PivotRule {
    pub fn name(self) -> &'static str {
        match self {
            PivotRule::Bland => "bland",
            PivotRule::Dantzig => "dantzig",
        }
    }
}

/// Standard-form program: `min c.x`, `A x = b`, `x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub a: Vec<Vec<Coefficient>>,
    pub b: Vec<Coefficient>,
    pub c: Vec<Coefficient>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Coefficient>,
        value: Coefficient,
    },
    Infeasible,
    Unbounded,
}

/// Consecutive degenerate Dantzig pivots tolerated before switching to Bland.
const DEGENERATE_LIMIT: usize = 50;

struct Tableau {
    rows: Vec<Vec<Coefficient>>,
    rhs: Vec<Coefficient>,
    /// Reduced costs, one per column.
    cost: Vec<Coefficient>,
    /// Negated objective value of the current basis.
    cost_rhs: Coefficient,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.cost_rhs -= &f * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    fn entering(&self, allowed: usize, rule: PivotRule) -> Option<usize> {
        let mut candidates = (0..allowed).filter(|&j| self.cost[j].is_negative());
        match rule {
            PivotRule::Bland => candidates.next(),
            PivotRule::Dantzig => candidates.fold(None, |best: Option<usize>, j| match best {
                Some(b) if self.cost[b] <= self.cost[j] => Some(b),
                _ => Some(j),
            }),
        }
    }

    /// Minimum-ratio row; ties go to the smallest basic variable index.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Coefficient)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations over the first `allowed` columns.
    /// Returns `false` if the program is unbounded.
    fn optimize(&mut self, allowed: usize, rule: PivotRule) -> bool {
        let mut degenerate_run = 0;
        let mut rule_now = rule;
        loop {
            let Some(col) = self.entering(allowed, rule_now) else {
                return true;
            };
            let Some(row) = self.leaving(col) else {
                return false;
            };
            if self.rhs[row].is_zero() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_LIMIT && rule_now != PivotRule::Bland {
                    log::debug!(
                        "simplex: switching to Bland after {degenerate_run} degenerate pivots"
                    );
                    rule_now = PivotRule::Bland;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }
}

impl LinearProgram {
    fn validate(&self) -> Result<()> {
        let n = self.c.len();
        if self.a.len() != self.b.len() {
            return Err(Error::OutOfRange {
                what: "linear program",
                detail: format!(
                    "{} rows but {} right-hand sides",
                    self.a.len(),
                    self.b.len()
                ),
            });
        }
        if let Some(i) = self.a.iter().position(|row| row.len() != n) {
            return Err(Error::OutOfRange {
                what: "linear program",
                detail: format!("row {i} has {} columns, expected {n}", self.a[i].len()),
            });
        }
        Ok(())
    }

    pub fn solve(&self, rule: PivotRule) -> Result<LpOutcome> {
        self.validate()?;
        let m = self.a.len();
        let n = self.c.len();

        // Phase one: artificial variable per row, right-hand sides made non-negative.
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (row, b) in self.a.iter().zip(&self.b) {
            let flip = b.is_negative();
            let mut r: Vec<Coefficient> = row
                .iter()
                .map(|v| if flip { -v } else { v.clone() })
                .collect();
            r.extend((0..m).map(|_| Coefficient::zero()));
            rows.push(r);
            rhs.push(if flip { -b } else { b.clone() });
        }
        for (i, r) in rows.iter_mut().enumerate() {
            r[n + i] = Coefficient::one();
        }
        let mut cost = vec![Coefficient::zero(); n + m];
        let mut cost_rhs = Coefficient::zero();
        for (r, b) in rows.iter().zip(&rhs) {
            for j in 0..n {
                cost[j] -= &r[j];
            }
            cost_rhs -= b;
        }
        let mut t = Tableau {
            rows,
            rhs,
            cost,
            cost_rhs,
            basis: (n..n + m).collect(),
        };
        t.optimize(n + m, rule);
        if !t.cost_rhs.is_zero() {
            return Ok(LpOutcome::Infeasible);
        }

        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] < n {
                i += 1;
                continue;
            }
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        }
        for r in t.rows.iter_mut() {
            r.truncate(n);
        }

        // Phase two.
        t.cost = self.c.clone();
        t.cost_rhs = Coefficient::zero();
        for i in 0..t.rows.len() {
            let cb = self.c[t.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..n {
                t.cost[j] -= &cb * &t.rows[i][j];
            }
            t.cost_rhs -= &cb * &t.rhs[i];
        }
        if !t.optimize(n, rule) {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![Coefficient::zero(); n];
        for (i, &j) in t.basis.iter().enumerate() {
            x[j] = t.rhs[i].clone();
        }
        let value = -t.cost_rhs;
        Ok(LpOutcome::Optimal { x, value })
    }
}
