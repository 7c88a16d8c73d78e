//! Exact minimum hitting sets of finite families of open disks.

use fixedbitset::FixedBitSet;

use crate::geom::{Ball, Point};

/// Relative inward offset of lens vertices.
const NUDGE: f64 = 1e-6;

/// Open disks with the candidate points that suffice for an optimal hitting
/// set: disk centers and lens vertices pushed into both disks. Some optimal
/// solution uses only candidates, because every maximal face of the
/// arrangement either is a whole disk or has such a vertex on its boundary.
#[derive(Clone, Debug, Default)]
pub(crate) struct DiskFamily {
    pub balls: Vec<Ball>,
    pub cands: Vec<[f64; 2]>,
    /// For every candidate, the disks whose interior contains it.
    pub masks: Vec<FixedBitSet>,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum HsOutcome {
    /// Candidate indices of a minimum hitting set.
    Found(Vec<usize>),
    /// No hitting set of the requested size exists.
    Infeasible,
    /// The node budget ran out before the search finished.
    Aborted,
}

fn xy(p: &Point) -> [f64; 2] {
    [p.coords()[0], p.coords()[1]]
}

fn stabs(b: &Ball, q: [f64; 2]) -> bool {
    let c = b.center.coords();
    (q[0] - c[0]).hypot(q[1] - c[1]) < b.radius
}

/// Boundary intersections of two circles, if they cross.
fn lens_vertices(a: &Ball, b: &Ball) -> Option<[[f64; 2]; 2]> {
    let (ca, cb) = (xy(&a.center), xy(&b.center));
    let d = (cb[0] - ca[0]).hypot(cb[1] - ca[1]);
    if d >= a.radius + b.radius || d <= (a.radius - b.radius).abs() || d == 0.0 {
        return None;
    }
    let x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let h = (a.radius * a.radius - x * x).max(0.0).sqrt();
    let u = [(cb[0] - ca[0]) / d, (cb[1] - ca[1]) / d];
    let m = [ca[0] + x * u[0], ca[1] + x * u[1]];
    Some([[m[0] - h * u[1], m[1] + h * u[0]], [m[0] + h * u[1], m[1] - h * u[0]]])
}

impl DiskFamily {
    pub fn new(balls: &[Ball]) -> Self {
        let mut f = DiskFamily::default();
        for b in balls {
            f.push(b.clone());
        }
        f
    }

    pub fn point(&self, c: usize) -> Point {
        Point::new(self.cands[c].to_vec())
    }

    fn add_candidate(&mut self, q: [f64; 2]) {
        let mut m = FixedBitSet::with_capacity(self.balls.len());
        for (i, b) in self.balls.iter().enumerate() {
            if stabs(b, q) {
                m.insert(i);
            }
        }
        self.cands.push(q);
        self.masks.push(m);
    }

    /// Adds a disk together with its candidates.
    pub fn push(&mut self, b: Ball) {
        let j = self.balls.len();
        for (q, m) in self.cands.iter().zip(self.masks.iter_mut()) {
            m.grow(j + 1);
            if stabs(&b, *q) {
                m.insert(j);
            }
        }
        self.balls.push(b);
        let b = &self.balls[j];
        let mut fresh = vec![xy(&b.center)];
        for a in &self.balls[..j] {
            let Some(vs) = lens_vertices(a, b) else { continue };
            let delta = NUDGE * a.radius.min(b.radius);
            for v in vs {
                let mut q = v;
                for c in [xy(&a.center), xy(&b.center)] {
                    let n = (c[0] - v[0]).hypot(c[1] - v[1]);
                    q[0] += delta * (c[0] - v[0]) / n;
                    q[1] += delta * (c[1] - v[1]) / n;
                }
                if stabs(a, q) && stabs(b, q) {
                    fresh.push(q);
                }
            }
        }
        for q in fresh {
            self.add_candidate(q);
        }
    }

    /// Minimum hitting set of size at most `max_size` by iterative deepening.
    pub fn min_hitting_set(&self, max_size: usize, node_cap: u64) -> HsOutcome {
        let mut all = FixedBitSet::with_capacity(self.balls.len());
        all.insert_range(..);
        self.min_hitting_set_of(&all, max_size, node_cap)
    }

    /// Minimum set of candidates hitting every disk in `target`. Among
    /// candidates that hit the same targets, those inside more disks of the
    /// whole family are tried first.
    pub fn min_hitting_set_of(&self, target: &FixedBitSet, max_size: usize, node_cap: u64) -> HsOutcome {
        let mut nodes = 0u64;
        for s in 0..=max_size {
            let mut chosen = Vec::new();
            match self.dfs(target, s, &mut chosen, &mut nodes, node_cap) {
                Some(true) => return HsOutcome::Found(chosen),
                Some(false) => {}
                None => return HsOutcome::Aborted,
            }
        }
        HsOutcome::Infeasible
    }

    /// `Some(true)` if `uncovered` can be hit with `s` more candidates.
    fn dfs(&self, uncovered: &FixedBitSet, s: usize, chosen: &mut Vec<usize>, nodes: &mut u64, cap: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > cap {
            return None;
        }
        let left = uncovered.count_ones(..);
        if left == 0 {
            return Some(true);
        }
        if s == 0 {
            return Some(false);
        }
        // Branch on the uncovered disk with the fewest candidates.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for i in uncovered.ones() {
            let list: Vec<usize> = (0..self.cands.len()).filter(|&c| self.masks[c].contains(i)).collect();
            if best.as_ref().is_none_or(|(_, l)| list.len() < l.len()) {
                best = Some((i, list));
            }
            if best.as_ref().is_some_and(|(_, l)| l.len() <= 1) {
                break;
            }
        }
        let (_, list) = best?;
        let mut gains: Vec<(usize, FixedBitSet)> = list
            .into_iter()
            .map(|c| {
                let mut g = self.masks[c].clone();
                g.intersect_with(uncovered);
                (c, g)
            })
            .collect();
        gains.sort_by(|a, b| {
            b.1.count_ones(..)
                .cmp(&a.1.count_ones(..))
                .then(self.masks[b.0].count_ones(..).cmp(&self.masks[a.0].count_ones(..)))
                .then(a.0.cmp(&b.0))
        });
        let mut kept: Vec<(usize, FixedBitSet)> = Vec::with_capacity(gains.len());
        for (c, g) in gains {
            if !kept.iter().any(|(_, k)| g.is_subset(k)) {
                kept.push((c, g));
            }
        }
        let max_gain = kept.iter().map(|(_, g)| g.count_ones(..)).max().unwrap_or(0);
        if max_gain == 0 {
            return Some(false);
        }
        for (c, g) in kept {
            let mut rest = uncovered.clone();
            rest.difference_with(&g);
            chosen.push(c);
            match self.dfs(&rest, s - 1, chosen, nodes, cap)? {
                true => return Some(true),
                false => {
                    chosen.pop();
                }
            }
        }
        Some(false)
    }
}
