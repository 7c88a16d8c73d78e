//! Small-dimension linear programming.
//!
//! A dense two-phase simplex with Bland's rule over free variables. The
//! systems solved here have a handful of variables (d <= 10) and at most a
//! few hundred rows, so a dense tableau is the simplest thing that works.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::linalg;

pub const MAX_LP_DIM: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `normal . x <= offset`
    Le,
    /// `normal . x == offset`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub relation: Relation,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraintSystem {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl LinearConstraintSystem {
    pub fn new(dim: usize) -> Self {
        LinearConstraintSystem {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    fn push(&mut self, normal: Vec<f64>, offset: f64, relation: Relation) -> Result<()> {
        if normal.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: normal.len(),
            });
        }
        if !normal.iter().all(|v| v.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidParameter("non-finite constraint".into()));
        }
        self.constraints.push(Constraint {
            normal,
            offset,
            relation,
        });
        Ok(())
    }

    pub fn add_le(&mut self, normal: Vec<f64>, offset: f64) -> Result<()> {
        self.push(normal, offset, Relation::Le)
    }

    pub fn add_ge(&mut self, normal: Vec<f64>, offset: f64) -> Result<()> {
        self.push(normal.into_iter().map(|v| -v).collect(), -offset, Relation::Le)
    }

    pub fn add_eq(&mut self, normal: Vec<f64>, offset: f64) -> Result<()> {
        self.push(normal, offset, Relation::Eq)
    }

    /// Largest violation of any constraint at `x`, each row measured in units
    /// of its normal's length.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                let n = linalg::norm(&c.normal).max(f64::MIN_POSITIVE);
                let r = (linalg::dot(&c.normal, x) - c.offset) / n;
                match c.relation {
                    Relation::Le => r.max(0.0),
                    Relation::Eq => r.abs(),
                }
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpFeasibility {
    Feasible(Point),
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(Vec<f64>),
    Unbounded,
    Infeasible,
}

/// Finds a point satisfying every constraint (boundary contact counts).
pub fn lp_feasible(sys: &LinearConstraintSystem, eps: f64) -> Result<LpFeasibility> {
    if sys.dim() > MAX_LP_DIM {
        return Err(Error::UnsupportedDimension(sys.dim()));
    }
    match solve(sys, None, eps) {
        LpOutcome::Optimal(x) => Ok(LpFeasibility::Feasible(Point::new(x))),
        LpOutcome::Unbounded => unreachable!("feasibility problems have no objective"),
        LpOutcome::Infeasible => Ok(LpFeasibility::Infeasible),
    }
}

/// Maximizes `objective . x` over the system.
pub fn lp_maximize(sys: &LinearConstraintSystem, objective: &[f64], eps: f64) -> Result<LpOutcome> {
    if sys.dim() > MAX_LP_DIM {
        return Err(Error::UnsupportedDimension(sys.dim()));
    }
    if objective.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: objective.len(),
        });
    }
    Ok(solve(sys, Some(objective), eps))
}

const PIVOT_TOL: f64 = 1e-11;

struct Tableau {
    rows: Vec<Vec<f64>>, // last entry is the rhs
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= f * b;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost . z` over the current basic feasible solution with
    /// Bland's rule; columns with `allowed[j] == false` never enter.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        let rhs = self.ncols;
        let max_iter = 50 * (self.rows.len() + self.ncols) + 1000;
        for _ in 0..max_iter {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let reduced = cost[j]
                    - self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| cost[b] * row[j])
                        .sum::<f64>();
                if reduced > 1e-10 {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j] > PIVOT_TOL {
                    let ratio = row[rhs] / row[j];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = leave else {
                return false;
            };
            self.pivot(i, j);
        }
        // Iteration cap; treat the current basis as final.
        true
    }
}

fn solve(sys: &LinearConstraintSystem, objective: Option<&[f64]>, eps: f64) -> LpOutcome {
    let d = sys.dim();
    let m = sys.len();
    if m == 0 {
        return match objective {
            Some(c) if c.iter().any(|v| *v != 0.0) => LpOutcome::Unbounded,
            _ => LpOutcome::Optimal(vec![0.0; d]),
        };
    }
    let n_slack = sys
        .constraints()
        .iter()
        .filter(|c| c.relation == Relation::Le)
        .count();
    // Columns: u (d), v (d), slacks, artificials (one per row).
    let slack0 = 2 * d;
    let art0 = slack0 + n_slack;
    let ncols = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack_idx = slack0;
    for (i, c) in sys.constraints().iter().enumerate() {
        let scale = linalg::norm(&c.normal).max(1e-300);
        let mut row = vec![0.0; ncols + 1];
        for k in 0..d {
            row[k] = c.normal[k] / scale;
            row[d + k] = -c.normal[k] / scale;
        }
        row[ncols] = c.offset / scale;
        let slack = if c.relation == Relation::Le {
            row[slack_idx] = 1.0;
            slack_idx += 1;
            Some(slack_idx - 1)
        } else {
            None
        };
        if row[ncols] < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        match slack {
            Some(s) if row[s] > 0.0 => basis.push(s),
            _ => {
                row[art0 + i] = 1.0;
                basis.push(art0 + i);
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, ncols };

    // Phase 1.
    let mut cost = vec![0.0; ncols];
    cost[art0..].fill(-1.0);
    let allowed = vec![true; ncols];
    t.optimize(&cost, &allowed);
    let infeas: f64 = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &b)| b >= art0)
        .map(|(r, _)| r[ncols])
        .sum();
    let rhs_scale = t.rows.iter().map(|r| r[ncols].abs()).fold(1.0, f64::max);
    if infeas > eps.max(1e-12) * rhs_scale {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art0 {
            if let Some(j) = (0..art0).find(|&j| t.rows[i][j].abs() > 1e-9 && !t.basis.contains(&j)) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut allowed = vec![true; ncols];
    for a in allowed.iter_mut().skip(art0) {
        *a = false;
    }
    if let Some(c) = objective {
        let mut cost = vec![0.0; ncols];
        for k in 0..d {
            cost[k] = c[k];
            cost[d + k] = -c[k];
        }
        if !t.optimize(&cost, &allowed) {
            return LpOutcome::Unbounded;
        }
    }
    let mut z = vec![0.0; ncols];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        z[b] = row[ncols];
    }
    LpOutcome::Optimal((0..d).map(|k| z[k] - z[d + k]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-9;

    #[test]
    fn interval_feasible() {
        let mut s = LinearConstraintSystem::new(1);
        s.add_ge(vec![1.0], 0.0).unwrap();
        s.add_le(vec![1.0], 1.0).unwrap();
        match lp_feasible(&s, EPS).unwrap() {
            LpFeasibility::Feasible(p) => assert!((0.0..=1.0).contains(&p.coords()[0])),
            LpFeasibility::Infeasible => panic!("should be feasible"),
        }
    }

    #[test]
    fn empty_interval_infeasible() {
        let mut s = LinearConstraintSystem::new(1);
        s.add_le(vec![1.0], 0.0).unwrap();
        s.add_ge(vec![1.0], 1.0).unwrap();
        assert_eq!(lp_feasible(&s, EPS).unwrap(), LpFeasibility::Infeasible);
    }

    #[test]
    fn single_point_touch_is_feasible() {
        let mut s = LinearConstraintSystem::new(2);
        s.add_le(vec![1.0, 0.0], 0.0).unwrap();
        s.add_ge(vec![1.0, 0.0], 0.0).unwrap();
        s.add_le(vec![0.0, 1.0], 2.0).unwrap();
        s.add_ge(vec![0.0, 1.0], 2.0).unwrap();
        let LpFeasibility::Feasible(p) = lp_feasible(&s, EPS).unwrap() else {
            panic!()
        };
        assert!(p.dist(&[0.0, 2.0].into()) < 1e-9);
    }

    #[test]
    fn maximize_in_triangle() {
        let mut s = LinearConstraintSystem::new(2);
        s.add_ge(vec![1.0, 0.0], 0.0).unwrap();
        s.add_ge(vec![0.0, 1.0], 0.0).unwrap();
        s.add_le(vec![1.0, 1.0], 1.0).unwrap();
        let LpOutcome::Optimal(x) = lp_maximize(&s, &[2.0, 1.0], EPS).unwrap() else {
            panic!()
        };
        assert!((x[0] - 1.0).abs() < 1e-9 && x[1].abs() < 1e-9);
        assert_eq!(lp_maximize(&s, &[-1.0, -1.0], EPS).unwrap(), LpOutcome::Optimal(vec![0.0, 0.0]));
        let mut open = LinearConstraintSystem::new(2);
        open.add_ge(vec![1.0, 0.0], 0.0).unwrap();
        assert_eq!(lp_maximize(&open, &[1.0, 0.0], EPS).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_rows() {
        let mut s = LinearConstraintSystem::new(3);
        s.add_eq(vec![1.0, 1.0, 1.0], 3.0).unwrap();
        s.add_eq(vec![1.0, -1.0, 0.0], 0.0).unwrap();
        s.add_le(vec![0.0, 0.0, 1.0], -1.0).unwrap();
        let LpFeasibility::Feasible(p) = lp_feasible(&s, EPS).unwrap() else {
            panic!()
        };
        assert!(s.max_violation(p.coords()) < 1e-9);
    }

    /// Feasibility oracle for planar systems: a feasible polygon either has a
    /// vertex (pairwise boundary intersection) or contains a line, in which
    /// case a coarse grid over a large window finds it.
    fn oracle_2d(s: &LinearConstraintSystem) -> bool {
        let cs = s.constraints();
        let ok = |x: &[f64]| s.max_violation(x) <= 1e-7;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let (a, b) = (&cs[i], &cs[j]);
                let det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (a.offset * b.normal[1] - a.normal[1] * b.offset) / det;
                let y = (a.normal[0] * b.offset - a.offset * b.normal[0]) / det;
                if ok(&[x, y]) {
                    return true;
                }
            }
        }
        for i in -100..=100 {
            for j in -100..=100 {
                if ok(&[i as f64 * 0.5, j as f64 * 0.5]) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (mut feas, mut infeas) = (0, 0);
        for _ in 0..500 {
            let m = rng.random_range(1..=20);
            let mut s = LinearConstraintSystem::new(2);
            for _ in 0..m {
                let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                s.add_le(vec![t.cos(), t.sin()], rng.random_range(-0.6..1.0)).unwrap();
            }
            let expect = oracle_2d(&s);
            match lp_feasible(&s, EPS).unwrap() {
                LpFeasibility::Feasible(p) => {
                    assert!(expect, "solver feasible, oracle infeasible");
                    assert!(s.max_violation(p.coords()) < 1e-8);
                    feas += 1;
                }
                LpFeasibility::Infeasible => {
                    assert!(!expect, "solver infeasible, oracle feasible");
                    infeas += 1;
                }
            }
        }
        assert!(feas > 50 && infeas > 50, "{feas} {infeas}");
    }

    #[test]
    fn rejects_large_dimension() {
        let s = LinearConstraintSystem::new(11);
        assert_eq!(lp_feasible(&s, EPS), Err(Error::UnsupportedDimension(11)));
    }
}
