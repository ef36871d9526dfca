//! Dense two-phase simplex over the rationals with Bland's rule.
//!
//! Solves `max c.x` subject to `A x <= b`, `x >= 0`.

use num_traits::{Signed, Zero};

use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[i] -= delta;
        }
        self.basis[row] = col;
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, v)| &cost[b] * v).sum()
    }

    /// Maximizes `cost` over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced: Rational = cost[j].clone()
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| &cost[b] * &self.rows[i][j])
                        .sum::<Rational>();
                reduced.is_positive()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(Rational, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                Some((_, row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let negative: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let width = n + m + negative.len();
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
    };
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        row[..n].clone_from_slice(&a[i]);
        row[n + i] = Rational::from_integer(1.into());
        let mut rhs = b[i].clone();
        match negative.iter().position(|&k| k == i) {
            Some(k) => {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                rhs = -rhs;
                row[n + m + k] = Rational::from_integer(1.into());
                t.basis.push(n + m + k);
            }
            None => t.basis.push(n + i),
        }
        t.rows.push(row);
        t.rhs.push(rhs);
    }

    if !negative.is_empty() {
        let mut phase1 = vec![Rational::zero(); width];
        for v in &mut phase1[n + m..] {
            *v = Rational::from_integer((-1).into());
        }
        t.optimize(&phase1, width);
        if !t.objective(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        for i in 0..m {
            if t.basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, col);
                }
            }
        }
    }

    let mut cost = vec![Rational::zero(); width];
    cost[..n].clone_from_slice(c);
    if !t.optimize(&cost, n + m) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Rational::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            point[bcol] = t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal {
        value: t.objective(&cost),
        point,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{frac, int};

    fn rows(r: &[&[i64]]) -> Vec<Vec<Rational>> {
        r.iter().map(|row| row.iter().map(|&v| int(v)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let out = maximize(&ints(&[3, 5]), &rows(&[&[1, 0], &[0, 2], &[3, 2]]), &ints(&[4, 12, 18]));
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: int(36),
                point: ints(&[2, 6])
            }
        );
    }

    #[test]
    fn half_integral() {
        let out = maximize(&ints(&[1]), &rows(&[&[2]]), &ints(&[3]));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == frac(3, 2)));
    }

    #[test]
    fn unbounded_and_infeasible() {
        assert_eq!(
            maximize(&ints(&[1, 0]), &rows(&[&[0, 1]]), &ints(&[1])),
            LpOutcome::Unbounded
        );
        // x >= 2 and x <= 1
        assert_eq!(
            maximize(&ints(&[1]), &rows(&[&[-1], &[1]]), &ints(&[-2, 1])),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn phase_one() {
        // max -x subject to x >= 2, x <= 5
        let out = maximize(&ints(&[-1]), &rows(&[&[-1], &[1]]), &ints(&[-2, 5]));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == int(-2)));
    }

    #[test]
    fn degenerate_cycle_example() {
        // Beale's example cycles without an anti-cycling rule
        let c = vec![frac(3, 4), int(-150), frac(1, 50), int(-6)];
        let a = vec![
            vec![frac(1, 4), int(-60), frac(-1, 25), int(9)],
            vec![frac(1, 2), int(-90), frac(-1, 50), int(3)],
            vec![int(0), int(0), int(1), int(0)],
        ];
        let out = maximize(&c, &a, &ints(&[0, 0, 1]));
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value == frac(1, 20)));
    }
}
