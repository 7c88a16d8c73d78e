//! Solvers for the separator-as-hitting-set problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::bad_spans;
use crate::geom::{Ball, Point};
use crate::instance::LabeledPointSet;
use crate::verify::VerifyReport;

pub mod annihilate;
pub mod disks;
pub mod exact;
pub mod greedy;
pub(crate) mod hitting;
pub mod local_search;
pub mod ptas;

pub use annihilate::{annihilate_formula, AnnihilateFormula, Label};
pub use disks::{brute_force_hit_disks, greedy_hit_disks, stab_report};
pub use local_search::local_search_hit;
pub use ptas::ptas_separator;


pub use exact::exact_small_separator;
pub use greedy::greedy_separator;



/// A hitting-set instance: explicit open disks, or the bad balls of a
/// labeled point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum HitInstance {
    ExplicitDisks(Vec<Ball>),
    Voronoi(LabeledPointSet),
}

impl HitInstance {
    pub fn dim(&self) -> usize {
        match self {
            HitInstance::ExplicitDisks(b) => b.first().map_or(2, |b| b.center.dim()),
            HitInstance::Voronoi(inst) => inst.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            HitInstance::ExplicitDisks(balls) => {
                if balls.is_empty() {
                    return Err(Error::EmptyInput);
                }
                if let Some(b) = balls.iter().find(|b| b.radius.is_nan() || b.radius <= 0.0 || b.center.dim() != 2) {
                    return Err(Error::InvalidParameter(format!("bad disk {b:?}")));
                }
                Ok(())
            }
            HitInstance::Voronoi(inst) if inst.dim() != 2 => Err(Error::UnsupportedDimension(inst.dim())),
            HitInstance::Voronoi(_) => Ok(()),
        }
    }
}

/// Evidence that a solver output is feasible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Verifier report on the labeled instance with the output as guards.
    Separation(VerifyReport),
    /// Indices of disks whose interior misses every output point.
    Stabbing { disks: usize, unstabbed: Vec<usize> },
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        match self {
            Certificate::Separation(r) => r.separated,
            Certificate::Stabbing { unstabbed, .. } => unstabbed.is_empty(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HitResult {
    pub points: Vec<Point>,
    pub iterations: usize,
    pub certificate: Certificate,
    /// Solution sizes after each improvement (local search).
    pub size_history: Vec<usize>,
    /// Number of pairwise interior-disjoint balls that must all be hit.
    pub lower_bound: usize,
    /// True when `points.len()` equals a proved lower bound.
    pub proved_optimal: bool,
    /// True when a time or budget cap forced a fallback path.
    pub fallback: bool,
}

impl HitResult {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest ball of every unclipped bad feature of `Vor(P ∪ guards)`.
pub(crate) fn bad_min_balls(inst: &LabeledPointSet, guards: &[Point]) -> Result<Vec<Ball>> {
    let (edges, vertices) = bad_spans(inst, guards)?;
    let mut all = inst.points().to_vec();
    all.extend_from_slice(guards);
    let mut out: Vec<Ball> = edges
        .iter()
        .map(|e| {
            let c = e.at(0.0f64.clamp(e.t0, e.t1));
            let r = c.dist(&all[e.sites[0]]);
            Ball::new(c, r)
        })
        .collect();
    out.extend(vertices.into_iter().map(|v| v.ball));
    Ok(out)
}

/// Size of a large set of pairwise interior-disjoint balls. Exact by branch
/// and bound for up to 128 balls within a node budget, greedy otherwise; any
/// such set is a lower bound on every hitting set.
pub fn disjoint_ball_bound(balls: &[Ball]) -> usize {
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&i, &j| balls[i].radius.total_cmp(&balls[j].radius).then(i.cmp(&j)));
    let disjoint = |i: usize, j: usize| balls[i].center.dist(&balls[j].center) >= balls[i].radius + balls[j].radius;
    let mut greedy: Vec<usize> = Vec::new();
    for &i in &order {
        if greedy.iter().all(|&j| disjoint(i, j)) {
            greedy.push(i);
        }
    }
    let n = order.len();
    if n > 128 {
        return greedy.len();
    }
    let compat: Vec<u128> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a && disjoint(order[a], order[b]))
                .fold(0u128, |m, b| m | (1u128 << b))
        })
        .collect();
    struct Search<'a> {
        compat: &'a [u128],
        best: usize,
        nodes: u64,
    }
    impl Search<'_> {
        fn run(&mut self, cand: u128, size: usize) {
            self.nodes += 1;
            if self.nodes > 2_000_000 {
                return;
            }
            if size + cand.count_ones() as usize <= self.best {
                return;
            }
            if cand == 0 {
                self.best = size;
                return;
            }
            let v = cand.trailing_zeros() as usize;
            let rest = cand & !(1u128 << v);
            self.run(rest & self.compat[v], size + 1);
            self.run(rest, size);
        }
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut s = Search {
        compat: &compat,
        best: greedy.len(),
        nodes: 0,
    };
    s.run(full, 0);
    s.best
}

/// Lower bound on the size of any separator of `inst`.
pub fn separator_lower_bound(inst: &LabeledPointSet) -> Result<usize> {
    Ok(disjoint_ball_bound(&bad_min_balls(inst, &[])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(x: f64, y: f64, r: f64) -> Ball {
        Ball::new(Point::new(vec![x, y]), r)
    }

    #[test]
    fn disjoint_bound_examples() {
        assert_eq!(disjoint_ball_bound(&[]), 0);
        let chain = [ball(0.0, 0.0, 1.0), ball(1.5, 0.0, 1.0), ball(3.0, 0.0, 1.0), ball(4.5, 0.0, 1.0)];
        assert_eq!(disjoint_ball_bound(&chain), 2);
        // greedy by radius takes the small middle ball and gets 1
        let trap = [ball(0.0, 0.0, 1.6), ball(2.0, 0.0, 0.5), ball(4.0, 0.0, 1.6)];
        assert_eq!(disjoint_ball_bound(&trap), 2);
    }

    #[test]
    fn two_point_lower_bound() {
        let inst = LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap();
        assert_eq!(separator_lower_bound(&inst).unwrap(), 1);
        let balls = bad_min_balls(&inst, &[]).unwrap();
        assert_eq!(balls.len(), 1);
        assert!(balls[0].center.dist(&[0.5, 0.0].into()) < 1e-12);
    }
}
