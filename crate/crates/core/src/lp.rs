//! Small dense linear programs: `min c·x` subject to `Ax = b`, `x ≥ 0`.
//!
//! Two-phase tableau simplex with Bland's rule, so runs are deterministic
//! and cycling cannot occur. Sizes here are tens of rows at most.

const PIVOT_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { residual: f64 },
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(a, b)| *a -= f * b);
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            self.cost
                .iter_mut()
                .zip(&pivot_row)
                .for_each(|(a, b)| *a -= f * b);
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the columns `< allowed`. Returns false
    /// when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let max_steps = 50 * (self.rows.len() + self.width) + 1000;
        for _ in 0..max_steps {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j] < -1e-10) else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-13
                                || (ratio <= br + 1e-13 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
        true
    }
}

/// Solves `min c·x, Ax = b, x ≥ 0` with `a` given row-major.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let scale = b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = sign * a[i][j];
        }
        row[n + i] = 1.0;
        row[width] = sign * b[i];
        rows.push(row);
    }
    // phase one: minimize the artificial sum
    let mut cost = vec![0.0; width + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width] -= row[width];
    }
    let mut t = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
        width,
    };
    t.optimize(n);
    let residual = -t.cost[width];
    if residual > 1e-9 * scale {
        return LpOutcome::Infeasible { residual };
    }
    // drive artificials out of the basis where possible
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[i][j].abs() > 1e-9) {
                t.pivot(i, j);
            }
        }
    }
    // phase two
    let mut cost = vec![0.0; width + 1];
    cost[..n].copy_from_slice(c);
    for i in 0..m {
        let bj = t.basis[i];
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for (k, v) in t.rows[i].iter().enumerate() {
                cost[k] -= cb * v;
            }
        }
    }
    t.cost = cost;
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rhs(i).max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, value }
}

/// A nonnegative solution of `Ax = b`, if any.
pub fn feasible(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.first().map_or(0, |r| r.len());
    match solve(a, b, &vec![0.0; n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_optimum() {
        // min -x - y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let out = solve(&a, &[4.0, 6.0], &[-1.0, -1.0, 0.0, 0.0]);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
                assert!((value + 2.8).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![1.0, 1.0]];
        assert!(matches!(
            solve(&a, &[-1.0], &[0.0, 0.0]),
            LpOutcome::Infeasible { .. }
        ));
        let a = vec![vec![1.0, -1.0]];
        assert_eq!(solve(&a, &[0.0], &[-1.0, 0.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        let x = feasible(&a, &[1.0, 2.0]).unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example under the textbook rule
        let a = vec![
            vec![0.5, -5.5, -2.5, 9.0, 1.0, 0.0, 0.0],
            vec![0.5, -1.5, -0.5, 1.0, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let out = solve(
            &a,
            &[0.0, 0.0, 1.0],
            &[-10.0, 57.0, 9.0, 24.0, 0.0, 0.0, 0.0],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert!((value + 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }
}
