//! The biobjective MILP instance.
//!
//! An [`Instance`] stores `min (c1·x, c2·x)` subject to `a_r·x <= b_r` and
//! finite bounds. Integer variables always occupy the first `n_int` indices.

use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::ObjPoint;
use crate::tol;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("objective length {got} does not match {expected} variables")]
    ObjectiveLength { expected: usize, got: usize },
    #[error("bound vectors have wrong length")]
    BoundLength,
    #[error("variable {0} has a non-finite bound")]
    InfiniteBound(usize),
    #[error("variable {0} has lower bound above upper bound")]
    EmptyDomain(usize),
    #[error("row {row} references variable {var} out of range")]
    ColumnOutOfRange { row: usize, var: usize },
    #[error("row {0} has a non-finite coefficient or rhs")]
    NonFiniteRow(usize),
}

/// One `a·x <= rhs` row in sparse form; coefficient indices are unique and
/// sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    /// Builds a row from a dense coefficient vector, dropping exact zeros.
    pub fn from_dense(a: &[f64], rhs: f64) -> Self {
        let coefs = a
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| (j, *v))
            .collect();
        Self { coefs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn coef(&self, j: usize) -> f64 {
        self.coefs
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|p| self.coefs[p].1)
            .unwrap_or(0.0)
    }

    /// The row `-(a·x) <= -rhs`, i.e. `a·x >= rhs`.
    pub fn negated(&self) -> Self {
        Self {
            coefs: self.coefs.iter().map(|&(j, a)| (j, -a)).collect(),
            rhs: -self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub n_int: usize,
    pub n_cont: usize,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub rows: Vec<Row>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Instance {
    /// Builds and validates an instance, rounding integer bounds inward.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n_int: usize,
        n_cont: usize,
        c1: Vec<f64>,
        c2: Vec<f64>,
        rows: Vec<Row>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let mut inst = Self {
            name: name.into(),
            n_int,
            n_cont,
            c1,
            c2,
            rows,
            lower,
            upper,
        };
        inst.normalize()?;
        Ok(inst)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n_int + self.n_cont
    }

    #[inline]
    pub fn is_int(&self, j: usize) -> bool {
        j < self.n_int
    }

    /// Checks the structural invariants and tightens integer bounds to
    /// integers (`ceil` of the lower, `floor` of the upper bound).
    pub fn normalize(&mut self) -> Result<(), ModelError> {
        let n = self.n();
        for c in [&self.c1, &self.c2] {
            if c.len() != n {
                return Err(ModelError::ObjectiveLength {
                    expected: n,
                    got: c.len(),
                });
            }
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(ModelError::BoundLength);
        }
        for j in 0..n {
            if !self.lower[j].is_finite() || !self.upper[j].is_finite() {
                return Err(ModelError::InfiniteBound(j));
            }
            if self.is_int(j) {
                self.lower[j] = tol::ceil(self.lower[j] - tol::INT);
                self.upper[j] = tol::floor(self.upper[j] + tol::INT);
            }
            if self.lower[j] > self.upper[j] {
                return Err(ModelError::EmptyDomain(j));
            }
        }
        for (r, row) in self.rows.iter_mut().enumerate() {
            if !row.rhs.is_finite() {
                return Err(ModelError::NonFiniteRow(r));
            }
            row.coefs.retain(|&(_, a)| a != 0.0);
            row.coefs.sort_by_key(|&(j, _)| j);
            for w in row.coefs.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(ModelError::ColumnOutOfRange { row: r, var: w[0].0 });
                }
            }
            for &(j, a) in &row.coefs {
                if j >= n {
                    return Err(ModelError::ColumnOutOfRange { row: r, var: j });
                }
                if !a.is_finite() {
                    return Err(ModelError::NonFiniteRow(r));
                }
            }
        }
        Ok(())
    }

    pub fn objectives(&self, x: &[f64]) -> ObjPoint {
        ObjPoint::new(dot(&self.c1, x), dot(&self.c2, x))
    }

    /// `w1·c1 + w2·c2`.
    pub fn weighted(&self, w1: f64, w2: f64) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| w1 * a + w2 * b)
            .collect()
    }

    /// Feasibility of `x` for rows and the given bounds, with absolute
    /// tolerance scaled by row magnitude.
    pub fn is_feasible_with(&self, x: &[f64], lower: &[f64], upper: &[f64], feas: f64) -> bool {
        for j in 0..self.n() {
            let t = feas * (1.0 + x[j].abs());
            if x[j] < lower[j] - t || x[j] > upper[j] + t {
                return false;
            }
        }
        self.rows.iter().all(|r| {
            let act = r.activity(x);
            act <= r.rhs + feas * (1.0 + r.rhs.abs())
        })
    }

    pub fn is_feasible(&self, x: &[f64], feas: f64) -> bool {
        self.is_feasible_with(x, &self.lower, &self.upper, feas)
    }

    pub fn is_integral(&self, x: &[f64]) -> bool {
        x[..self.n_int].iter().all(|&v| tol::is_integral(v))
    }

    /// Number of integer assignments in the bound box.
    pub fn lattice_size(&self) -> f64 {
        (0..self.n_int)
            .map(|j| self.upper[j] - self.lower[j] + 1.0)
            .product()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
