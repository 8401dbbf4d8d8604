//! Dense tableau simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`
//! (so the origin is feasible and no phase one is needed). Bland's rule is
//! used for both the entering and the leaving variable, which guarantees
//! termination on degenerate programs.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    rows: Vec<(Vec<T>, T)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Unbounded,
    NegativeRhs(usize),
    Shape,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn maximize(objective: Vec<T>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
        }
    }

    /// Adds `row . x <= rhs`.
    pub fn le(mut self, row: Vec<T>, rhs: T) -> Self {
        self.rows.push((row, rhs));
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<LpSolution<T>, LpError> {
        let n = self.objective.len();
        let m = self.rows.len();
        let width = n + m + 1;
        let rhs_col = n + m;
        let tol = T::tolerance();

        // tableau rows 0..m are constraints, row m is the objective
        let mut tab: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        for (i, (row, rhs)) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::Shape);
            }
            if rhs.is_negative() {
                return Err(LpError::NegativeRhs(i));
            }
            let mut r = vec![T::zero(); width];
            r[..n].clone_from_slice(row);
            r[n + i] = T::one();
            r[rhs_col] = rhs.clone();
            tab.push(r);
        }
        let mut obj = vec![T::zero(); width];
        for (j, c) in self.objective.iter().enumerate() {
            obj[j] = -c.clone();
        }
        tab.push(obj);
        let mut basis: Vec<usize> = (n..n + m).collect();

        let mut pivots = 0;
        loop {
            let entering = (0..n + m).find(|&j| tab[m][j] < -tol.clone());
            let Some(col) = entering else { break };

            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                if tab[i][col] > tol {
                    let ratio = tab[i][rhs_col].clone() / tab[i][col].clone();
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let diff = ratio.clone() - lr.clone();
                            if diff < -tol.clone()
                                || (diff <= tol && basis[i] < basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Err(LpError::Unbounded);
            };

            let pivot = tab[row][col].clone();
            for v in tab[row].iter_mut() {
                *v = v.clone() / pivot.clone();
            }
            let pivot_row = tab[row].clone();
            for (i, r) in tab.iter_mut().enumerate() {
                if i == row || r[col].is_zero() {
                    continue;
                }
                let factor = r[col].clone();
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v = v.clone() - factor.clone() * p.clone();
                    }
                }
            }
            basis[row] = col;
            pivots += 1;
        }

        let mut x = vec![T::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = tab[i][rhs_col].clone();
            }
        }
        Ok(LpSolution {
            value: tab[m][rhs_col].clone(),
            x,
            pivots,
        })
    }
}
