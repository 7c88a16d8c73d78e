//! Boolean conditions under which guards destroy a Voronoi feature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Feature;
use crate::geom::{in_ball_sign, BallSign, Point};
use crate::halfflat::{covers, induced_condition, shell_conditions, Condition, Flat};

const EPS: f64 = 1e-9;

/// A halfflat of the span of a feature: induced by a guard or from the shell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Guard(usize),
    Shell(usize),
}

/// Disjunction over `(k+1)`-subsets of guard and shell halfflats of a
/// k-feature. A clause holds when its halfflats cover the span; a guard
/// halfflat there is the region where the guard lies inside the ball through
/// the sites of `f`, and the clause conditions are the in-ball tests of each
/// guard against the vertex cut out by the others. For a vertex feature each
/// clause is a single guard, true when that guard is strictly inside the
/// circumball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnihilateFormula {
    pub feature: Feature,
    pub m: usize,
    pub clauses: Vec<Vec<Label>>,
}

fn subsets(labels: &[Label], size: usize) -> Vec<Vec<Label>> {
    fn rec(labels: &[Label], size: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..labels.len() {
            if labels.len() - i < size - cur.len() {
                break;
            }
            cur.push(labels[i]);
            rec(labels, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(labels, size.min(labels.len()), 0, &mut Vec::new(), &mut out);
    out
}

/// Builds the formula of `f` for `guards.len()` guards.
pub fn annihilate_formula(f: &Feature, guards: &[Point]) -> Result<AnnihilateFormula> {
    let m = guards.len();
    let k = f.dim;
    let mut labels: Vec<Label> = (0..m).map(Label::Guard).collect();
    let clauses = if k == 0 {
        labels.iter().map(|&l| vec![l]).collect()
    } else {
        labels.extend((0..=k).map(Label::Shell));
        subsets(&labels, k + 1)
    };
    let formula = AnnihilateFormula {
        feature: f.clone(),
        m,
        clauses,
    };
    formula.check_guards(guards)?;
    Ok(formula)
}

impl AnnihilateFormula {
    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    fn check_guards(&self, guards: &[Point]) -> Result<()> {
        if guards.len() != self.m {
            return Err(Error::InvalidParameter(format!(
                "formula built for {} guards, got {}",
                self.m,
                guards.len()
            )));
        }
        let d = self.feature.site_points[0].dim();
        let r = self.feature.pencil_ball_at(&self.feature.simplex.vertices()[0]).radius;
        for g in guards {
            if g.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: g.dim() });
            }
            if self.feature.site_points.iter().any(|s| s.dist(g) <= EPS * r.max(1.0)) {
                return Err(Error::DegenerateGuard);
            }
        }
        Ok(())
    }

    /// True if the guards at these coordinates remove the feature from the
    /// diagram of the sites and guards.
    pub fn evaluate(&self, guards: &[Point]) -> Result<bool> {
        self.check_guards(guards)?;
        let f = &self.feature;
        if f.dim == 0 {
            for g in guards {
                if in_ball_sign(&f.site_points, g, EPS)? == BallSign::Inside {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let flat = Flat::span_of(f)?;
        let guard_conds: Vec<Condition> = guards
            .iter()
            .map(|g| induced_condition(g, &flat, &f.site_points[0]))
            .collect();
        let shell = shell_conditions(f)?;
        let scale = f.simplex.vertices().iter().map(|v| v.dist(&flat.anchor)).fold(0.0, f64::max)
            + f.pencil_ball_at(&flat.anchor).radius;
        let tol = EPS * scale.max(f64::MIN_POSITIVE);
        for clause in &self.clauses {
            let conds: Vec<&Condition> = clause
                .iter()
                .map(|l| match *l {
                    Label::Guard(i) => &guard_conds[i],
                    Label::Shell(j) => &shell[j],
                })
                .collect();
            if covers(&conds, f.dim, tol)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
