//! Separation verifier: decides by linear programming whether a closed
//! Voronoi cell of `P1` meets a closed Voronoi cell of `P2` in the diagram of
//! `P` plus neutral guards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Point};
use crate::instance::{LabeledPointSet, Side};
use crate::kdtree::KdTree;
use crate::linalg::dot;
use crate::lp::{lp_feasible, lp_maximize, LinearConstraintSystem, LpFeasibility, LpOutcome, MAX_LP_DIM};

/// Relative tolerance of the cell tests.
const EPS: f64 = 1e-9;
/// Sites seeding each cell system before cutting planes are added.
const SEED_NEIGHBORS: usize = 8;

/// A pair of opposite-class input points whose closed cells intersect,
/// with a point of the intersection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadPair {
    pub p1: usize,
    pub p2: usize,
    pub witness: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub separated: bool,
    pub witness: Option<BadPair>,
    /// Pairs that survived the cell bounding-box filter.
    pub candidate_pairs: usize,
    pub lp_solves: usize,
}

/// Voronoi diagram of `sites`, queried cell by cell through LPs.
pub(crate) struct CellOracle<'a> {
    sites: &'a [Point],
    tree: KdTree,
    box_half_width: f64,
    lp_solves: std::cell::Cell<usize>,
}

impl<'a> CellOracle<'a> {
    pub(crate) fn new(sites: &'a [Point]) -> Self {
        let diam = geom::spread(sites).max(1.0);
        CellOracle {
            sites,
            tree: KdTree::new(sites),
            box_half_width: 1e4 * diam,
            lp_solves: std::cell::Cell::new(0),
        }
    }

    /// Adds `|x - p| <= |x - q|` in coordinates centered at `p`.
    fn add_site(&self, sys: &mut LinearConstraintSystem, p: usize, q: usize) -> Result<()> {
        let v = self.sites[q].sub(&self.sites[p]);
        let n2 = dot(&v, &v);
        if n2 > 0.0 {
            sys.add_le(v.iter().map(|c| 2.0 * c).collect(), n2)?;
        }
        Ok(())
    }

    /// Nearest site strictly closer to `x` than site `p`, beyond tolerance.
    fn violator(&self, p: usize, x: &Point) -> Option<usize> {
        let (q, d2q) = self.tree.nearest(x.coords())?;
        let d2p = x.dist2(&self.sites[p]);
        (d2q < d2p - EPS * d2p.max(EPS)).then_some(q)
    }

    fn seeded_system(&self, p: usize, around: &Point, skip: &[usize], added: &mut Vec<usize>) -> Result<LinearConstraintSystem> {
        let mut sys = LinearConstraintSystem::new(around.dim());
        for (q, _) in self.tree.k_nearest(around.coords(), SEED_NEIGHBORS + skip.len() + 1) {
            if q != p && !skip.contains(&q) {
                self.add_site(&mut sys, p, q)?;
                added.push(q);
            }
        }
        Ok(sys)
    }

    /// Point of the intersection of the closed cells of `a` and `b`, if any.
    pub(crate) fn pair_witness(&self, a: usize, b: usize) -> Result<Option<Point>> {
        let pa = &self.sites[a];
        let v = self.sites[b].sub(pa);
        let n2 = dot(&v, &v);
        if n2 == 0.0 {
            return Ok(Some(pa.clone()));
        }
        let mid = pa.offset(&v, 0.5);
        let mut added = Vec::new();
        let mut sys = self.seeded_system(a, &mid, &[b], &mut added)?;
        sys.add_eq(v.iter().map(|c| 2.0 * c).collect(), n2)?;
        loop {
            self.lp_solves.set(self.lp_solves.get() + 1);
            let x = match lp_feasible(&sys, EPS)? {
                LpFeasibility::Infeasible => return Ok(None),
                LpFeasibility::Feasible(x) => pa.offset(x.coords(), 1.0),
            };
            match self.violator(a, &x) {
                Some(q) if q != b && !added.contains(&q) => {
                    self.add_site(&mut sys, a, q)?;
                    added.push(q);
                }
                _ => return Ok(Some(x)),
            }
        }
    }

    /// Axis-aligned bounding box of the closed cell of `p`; unbounded sides
    /// are infinite.
    pub(crate) fn cell_box(&self, p: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.sites[p].dim();
        let origin = &self.sites[p];
        let mut added = Vec::new();
        let mut clipped = self.seeded_system(p, origin, &[], &mut added)?;
        let b = self.box_half_width;
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            clipped.add_le(e.clone(), b)?;
            clipped.add_ge(e, -b)?;
        }
        let mut lo = vec![f64::NEG_INFINITY; d];
        let mut hi = vec![f64::INFINITY; d];
        for k in 0..d {
            for sign in [1.0, -1.0] {
                let mut obj = vec![0.0; d];
                obj[k] = sign;
                let value = loop {
                    self.lp_solves.set(self.lp_solves.get() + 1);
                    let x = match lp_maximize(&clipped, &obj, EPS)? {
                        LpOutcome::Optimal(x) => x,
                        LpOutcome::Unbounded | LpOutcome::Infeasible => break None,
                    };
                    let xw = origin.offset(&x, 1.0);
                    match self.violator(p, &xw) {
                        Some(q) if !added.contains(&q) => {
                            self.add_site(&mut clipped, p, q)?;
                            added.push(q);
                        }
                        _ => break Some(x[k] * sign),
                    }
                };
                match value {
                    Some(v) if v < b * (1.0 - 1e-9) => {
                        let pad = 1e-7 * (1.0 + v.abs());
                        if sign > 0.0 {
                            hi[k] = origin.coords()[k] + v + pad;
                        } else {
                            lo[k] = origin.coords()[k] - v - pad;
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok((lo, hi))
    }

    pub(crate) fn lp_solves(&self) -> usize {
        self.lp_solves.get()
    }
}

fn boxes_overlap(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> bool {
    (0..a.0.len()).all(|k| a.0[k] <= b.1[k] && b.0[k] <= a.1[k])
}

fn check_guards(inst: &LabeledPointSet, guards: &[Point]) -> Result<()> {
    let d = inst.dim();
    if d > MAX_LP_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    for g in guards {
        if g.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: g.dim() });
        }
    }
    Ok(())
}

/// Candidate pairs `(i, j)` with `i` in `P1`, `j` in `P2` and overlapping
/// cell boxes, in lexicographic order.
fn candidate_pairs(inst: &LabeledPointSet, oracle: &CellOracle) -> Result<Vec<(usize, usize)>> {
    let ones = inst.indices(Side::One);
    let twos = inst.indices(Side::Two);
    if ones.is_empty() || twos.is_empty() {
        return Ok(Vec::new());
    }
    let boxes = (0..inst.len()).map(|i| oracle.cell_box(i)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &i in &ones {
        for &j in &twos {
            if boxes_overlap(&boxes[i], &boxes[j]) {
                out.push(if i < j { (i, j) } else { (j, i) });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn sites_with_guards(inst: &LabeledPointSet, guards: &[Point]) -> Vec<Point> {
    inst.points().iter().chain(guards).cloned().collect()
}

fn oriented(inst: &LabeledPointSet, i: usize, j: usize, witness: Point) -> BadPair {
    if inst.side(i) == Side::One {
        BadPair { p1: i, p2: j, witness }
    } else {
        BadPair { p1: j, p2: i, witness }
    }
}

/// All bad pairs of the instance with the given neutral guards.
pub fn bad_pairs_with_guards(inst: &LabeledPointSet, guards: &[Point]) -> Result<Vec<BadPair>> {
    check_guards(inst, guards)?;
    let sites = sites_with_guards(inst, guards);
    let oracle = CellOracle::new(&sites);
    let mut out = Vec::new();
    for (i, j) in candidate_pairs(inst, &oracle)? {
        if let Some(w) = oracle.pair_witness(i, j)? {
            out.push(oriented(inst, i, j, w));
        }
    }
    Ok(out)
}

/// All pairs `(p1, p2)` of opposite classes whose closed cells in `Vor(P)` meet.
pub fn bad_pairs_lp(inst: &LabeledPointSet) -> Result<Vec<BadPair>> {
    bad_pairs_with_guards(inst, &[])
}

/// Checks that no closed cell of `P1` meets a closed cell of `P2` in
/// `Vor(P ∪ guards)`; stops at the first witness.
pub fn verify_separated(inst: &LabeledPointSet, guards: &[Point]) -> Result<VerifyReport> {
    check_guards(inst, guards)?;
    let sites = sites_with_guards(inst, guards);
    let oracle = CellOracle::new(&sites);
    let pairs = candidate_pairs(inst, &oracle)?;
    for &(i, j) in &pairs {
        if let Some(w) = oracle.pair_witness(i, j)? {
            return Ok(VerifyReport {
                separated: false,
                witness: Some(oriented(inst, i, j, w)),
                candidate_pairs: pairs.len(),
                lp_solves: oracle.lp_solves(),
            });
        }
    }
    Ok(VerifyReport {
        separated: true,
        witness: None,
        candidate_pairs: pairs.len(),
        lp_solves: oracle.lp_solves(),
    })
}
