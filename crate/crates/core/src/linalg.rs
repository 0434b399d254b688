//! Exact Gaussian elimination over `Rational`.
//!
//! Pivot preference: denominator-free (integer) entries first, larger
//! magnitude first; ties broken by column order, then row order. All
//! eliminations are deterministic, so solved forms are reproducible
//! byte-for-byte across runs.

use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("inconsistent linear system (0 = {0})")]
    Inconsistent(Rational),
    #[error("underdetermined linear system; free columns {0:?}")]
    Underdetermined(Vec<usize>),
    #[error("a designated free column is constrained by the system")]
    ConstrainedFree,
}

/// Dense augmented system: each row is `coeffs . x = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub ncols: usize,
}

/// One solved relation: `x[pivot] = constant + sum coeffs[i] * x[free[i]]`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub pivot: usize,
    pub coeffs: Vec<(usize, Rational)>,
    pub constant: Rational,
}

#[derive(Clone, Debug)]
pub struct SolvedForm {
    pub relations: Vec<Relation>,
    pub free: Vec<usize>,
    pub rank: usize,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        LinearSystem { rows: Vec::new(), rhs: Vec::new(), ncols }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.ncols);
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn extend_from(&mut self, other: &LinearSystem) {
        assert_eq!(self.ncols, other.ncols);
        self.rows.extend(other.rows.iter().cloned());
        self.rhs.extend(other.rhs.iter().cloned());
    }

    fn pivot_score(c: &Rational) -> (u8, i64) {
        // integers beat fractions; among integers prefer large numerators,
        // among fractions prefer small denominators
        if c.is_integer() {
            (0, -(c.numer().bits() as i64))
        } else {
            (1, c.denom().bits() as i64)
        }
    }

    fn eliminate(&mut self, pivots: &mut Vec<(usize, usize)>, pr: usize, pc: usize) {
        let pv = self.rows[pr][pc].clone();
        let inv = pv.recip();
        for c in &mut self.rows[pr] {
            *c *= &inv;
        }
        self.rhs[pr] *= &inv;
        let prow = self.rows[pr].clone();
        let prhs = self.rhs[pr].clone();
        for r in 0..self.rows.len() {
            if r == pr || self.rows[r][pc].is_zero() {
                continue;
            }
            let factor = self.rows[r][pc].clone();
            for (dst, src) in self.rows[r].iter_mut().zip(&prow) {
                *dst -= &(&factor * src);
            }
            self.rhs[r] -= &(&factor * &prhs);
        }
        pivots.push((pr, pc));
    }

    /// Reduced row echelon form, taking columns strictly in `col_order` and
    /// picking the best row per column by the pivot heuristic.
    pub fn rref_by_columns(&mut self, col_order: &[usize]) -> Vec<(usize, usize)> {
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for &c in col_order {
            let mut best: Option<(u8, i64, usize)> = None;
            for r in 0..self.rows.len() {
                if pivots.iter().any(|(pr, _)| *pr == r) || self.rows[r][c].is_zero() {
                    continue;
                }
                let (a, b) = Self::pivot_score(&self.rows[r][c]);
                let key = (a, b, r);
                if best.map_or(true, |bk| key < bk) {
                    best = Some(key);
                }
            }
            if let Some((_, _, r)) = best {
                self.eliminate(&mut pivots, r, c);
            }
        }
        pivots
    }

    /// Full pivoting over all columns with the heuristic deciding both the
    /// row and the column; ties fall back to column order.
    pub fn rref_full_pivot(&mut self) -> Vec<(usize, usize)> {
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        loop {
            let mut best: Option<(u8, i64, usize, usize)> = None;
            for c in 0..self.ncols {
                if pivots.iter().any(|(_, pc)| *pc == c) {
                    continue;
                }
                for r in 0..self.rows.len() {
                    if pivots.iter().any(|(pr, _)| *pr == r) || self.rows[r][c].is_zero() {
                        continue;
                    }
                    let (a, b) = Self::pivot_score(&self.rows[r][c]);
                    let key = (a, b, c, r);
                    if best.map_or(true, |bk| key < bk) {
                        best = Some(key);
                    }
                }
            }
            match best {
                Some((_, _, c, r)) => self.eliminate(&mut pivots, r, c),
                None => break,
            }
        }
        pivots
    }

    fn check_consistent(&self, pivots: &[(usize, usize)]) -> Result<(), LinalgError> {
        for r in 0..self.rows.len() {
            if pivots.iter().any(|(pr, _)| *pr == r) {
                continue;
            }
            if self.rows[r].iter().all(|c| c.is_zero()) && !self.rhs[r].is_zero() {
                return Err(LinalgError::Inconsistent(self.rhs[r].clone()));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let cols: Vec<usize> = (0..self.ncols).collect();
        work.rref_by_columns(&cols).len()
    }

    /// Requires a unique solution; reports free columns otherwise.
    pub fn solve_unique(&self) -> Result<Vec<Rational>, LinalgError> {
        let mut work = self.clone();
        let pivots = work.rref_full_pivot();
        work.check_consistent(&pivots)?;
        if pivots.len() < self.ncols {
            let free: Vec<usize> = (0..self.ncols)
                .filter(|c| !pivots.iter().any(|(_, pc)| pc == c))
                .collect();
            return Err(LinalgError::Underdetermined(free));
        }
        let mut solution = vec![Rational::zero(); self.ncols];
        for (r, c) in pivots {
            solution[c] = work.rhs[r].clone();
        }
        Ok(solution)
    }

    /// Expresses every non-`free` column in terms of the designated free
    /// columns. Pivoting walks the non-free columns in natural order, so the
    /// emitted relations are canonical.
    pub fn solved_form(&self, free: &[usize]) -> Result<SolvedForm, LinalgError> {
        let mut work = self.clone();
        let allowed: Vec<usize> = (0..self.ncols).filter(|c| !free.contains(c)).collect();
        let pivots = work.rref_by_columns(&allowed);
        // rows untouched by pivoting must vanish entirely; a leftover entry in
        // a free column means that column is not actually free
        for r in 0..work.rows.len() {
            if pivots.iter().any(|(pr, _)| *pr == r) {
                continue;
            }
            if work.rows[r].iter().any(|c| !c.is_zero()) {
                return Err(LinalgError::ConstrainedFree);
            }
            if !work.rhs[r].is_zero() {
                return Err(LinalgError::Inconsistent(work.rhs[r].clone()));
            }
        }
        let undetermined: Vec<usize> = allowed
            .iter()
            .copied()
            .filter(|c| !pivots.iter().any(|(_, pc)| pc == c))
            .collect();
        if !undetermined.is_empty() {
            return Err(LinalgError::Underdetermined(undetermined));
        }
        let mut relations: Vec<Relation> = pivots
            .iter()
            .map(|&(r, c)| {
                let coeffs = free
                    .iter()
                    .filter(|&&fc| !work.rows[r][fc].is_zero())
                    .map(|&fc| (fc, -&work.rows[r][fc]))
                    .collect();
                Relation { pivot: c, coeffs, constant: work.rhs[r].clone() }
            })
            .collect();
        relations.sort_by_key(|rel| rel.pivot);
        let rank = pivots.len();
        Ok(SolvedForm { relations, free: free.to_vec(), rank })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let mut sys = LinearSystem::new(2);
        sys.push(vec![q(1, 1), q(1, 1)], q(3, 1));
        sys.push(vec![q(1, 1), q(-1, 1)], q(1, 1));
        assert_eq!(sys.solve_unique().unwrap(), vec![q(2, 1), q(1, 1)]);
    }

    #[test]
    fn inconsistent_detected() {
        let mut sys = LinearSystem::new(1);
        sys.push(vec![q(1, 1)], q(1, 1));
        sys.push(vec![q(1, 1)], q(2, 1));
        assert!(matches!(sys.solve_unique(), Err(LinalgError::Inconsistent(_))));
    }

    #[test]
    fn underdetermined_reports_free_columns() {
        let mut sys = LinearSystem::new(3);
        sys.push(vec![q(1, 1), q(1, 1), q(0, 1)], q(1, 1));
        match sys.solve_unique() {
            Err(LinalgError::Underdetermined(free)) => assert_eq!(free.len(), 2),
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn solved_form_with_designated_free() {
        // 3a + 2f = 0 and a + f + j + 2m = 0, free (j, m):
        // a = 2j + 4m, f = -3j - 6m
        let mut sys = LinearSystem::new(4);
        sys.push(vec![q(3, 1), q(2, 1), q(0, 1), q(0, 1)], q(0, 1));
        sys.push(vec![q(1, 1), q(1, 1), q(1, 1), q(2, 1)], q(0, 1));
        let sf = sys.solved_form(&[2, 3]).unwrap();
        assert_eq!(sf.rank, 2);
        assert_eq!(sf.relations[0].pivot, 0);
        assert_eq!(sf.relations[0].coeffs, vec![(2, q(2, 1)), (3, q(4, 1))]);
        assert_eq!(sf.relations[1].pivot, 1);
        assert_eq!(sf.relations[1].coeffs, vec![(2, q(-3, 1)), (3, q(-6, 1))]);
    }

    #[test]
    fn solved_form_rejects_constrained_free() {
        // x = 1 with x designated free
        let mut sys = LinearSystem::new(1);
        sys.push(vec![q(1, 1)], q(1, 1));
        assert!(matches!(sys.solved_form(&[0]), Err(LinalgError::ConstrainedFree)));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut sys = LinearSystem::new(2);
        sys.push(vec![q(1, 1), q(2, 1)], q(0, 1));
        sys.push(vec![q(2, 1), q(4, 1)], q(0, 1));
        assert_eq!(sys.rank(), 1);
    }
}
