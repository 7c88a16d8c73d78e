//! Smallest separators for small budgets by verified numeric search.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::features::{bad_spans, EdgeSpan, VertexSpan};
use crate::geom::{spread, Ball, Point};
use crate::instance::LabeledPointSet;
use crate::solvers::hitting::{DiskFamily, HsOutcome};
use crate::solvers::{annihilate_formula, bad_min_balls, disjoint_ball_bound, Certificate, HitResult};
use crate::features::bad_features;
use crate::verify::verify_separated;

/// Largest supported budget.
pub const MAX_BUDGET: usize = 8;
/// Strictness margin, relative to the edge length, demanded of every cover.
const MARGIN: f64 = 1e-7;
/// Grid resolution of the one-guard fallback, in steps per diameter.
const GRID_STEPS: f64 = 200.0;

struct EdgeCost {
    site: [f64; 2],
    mid: [f64; 2],
    dir: [f64; 2],
    t0: f64,
    t1: f64,
    len: f64,
}

impl EdgeCost {
    fn phi(&self, t: f64) -> f64 {
        (t / self.len).atan()
    }

    /// Parameter interval of the edge not strictly covered by the guards.
    fn gap(&self, g: &[f64]) -> Option<(f64, f64)> {
        let (mut left, mut right) = (f64::NEG_INFINITY, f64::INFINITY);
        let am = [self.site[0] - self.mid[0], self.site[1] - self.mid[1]];
        let am2 = am[0] * am[0] + am[1] * am[1];
        for q in g.chunks_exact(2) {
            let ag = [self.site[0] - q[0], self.site[1] - q[1]];
            let agn = ag[0].hypot(ag[1]);
            let alpha = self.dir[0] * ag[0] + self.dir[1] * ag[1];
            let gm = [q[0] - self.mid[0], q[1] - self.mid[1]];
            let rhs = 0.5 * (am2 - gm[0] * gm[0] - gm[1] * gm[1]) - MARGIN * self.len * agn;
            if alpha.abs() <= 1e-15 * agn {
                if rhs >= 0.0 {
                    return None;
                }
                continue;
            }
            let t = rhs / alpha;
            if alpha > 0.0 {
                left = left.max(t);
            } else {
                right = right.min(t);
            }
        }
        let (lo, hi) = (left.max(self.t0), right.min(self.t1));
        (lo < hi).then_some((lo, hi))
    }

    /// Middle of a gap in the arctan parametrization, which is finite even
    /// for unbounded gaps.
    fn gap_middle(&self, lo: f64, hi: f64) -> [f64; 2] {
        let tm = self.len * (0.5 * (self.phi(lo) + self.phi(hi))).tan();
        [self.mid[0] + tm * self.dir[0], self.mid[1] + tm * self.dir[1]]
    }

    /// Uncovered part of the edge as a fraction of its arctan-measure, scaled
    /// up by the distance from the guards to the middle of the gap.
    fn cost(&self, g: &[f64], scale: f64) -> f64 {
        let Some((lo, hi)) = self.gap(g) else { return 0.0 };
        let frac = (self.phi(hi) - self.phi(lo)) / (self.phi(self.t1) - self.phi(self.t0));
        let x = self.gap_middle(lo, hi);
        let near = g
            .chunks_exact(2)
            .map(|q| (q[0] - x[0]).hypot(q[1] - x[1]))
            .fold(f64::INFINITY, f64::min);
        frac * (1.0 + near.min(1e3 * scale) / scale)
    }
}

/// Nonnegative objective over guard coordinates that vanishes exactly when
/// the guards strictly cover every bad edge and vertex of `Vor(P)`.
struct Objective {
    edges: Vec<EdgeCost>,
    vertices: Vec<Ball>,
    scale: f64,
}

impl Objective {
    fn new(points: &[Point], edges: &[EdgeSpan], vertices: &[VertexSpan]) -> Self {
        let xy = |p: &Point| [p.coords()[0], p.coords()[1]];
        let edges = edges
            .iter()
            .map(|e| EdgeCost {
                site: xy(&points[e.sites[0]]),
                mid: e.mid,
                dir: e.dir,
                t0: e.t0,
                t1: e.t1,
                len: points[e.sites[0]].dist(&points[e.sites[1]]),
            })
            .collect();
        let scale = spread(points).max(f64::MIN_POSITIVE);
        Objective {
            edges,
            vertices: vertices.iter().map(|v| v.ball.clone()).collect(),
            scale,
        }
    }

    fn cost(&self, g: &[f64]) -> f64 {
        let mut total: f64 = self.edges.iter().map(|e| e.cost(g, self.scale)).sum();
        for b in &self.vertices {
            let c = b.center.coords();
            let near = g
                .chunks_exact(2)
                .map(|q| (q[0] - c[0]).hypot(q[1] - c[1]))
                .fold(f64::INFINITY, f64::min);
            let x = near / b.radius - 1.0 + MARGIN;
            if x > 0.0 {
                total += x / (1.0 + x);
            }
        }
        total
    }
}

/// Nelder-Mead minimization from `x0`; stops early at zero.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 <= 0.0 {
            break;
        }
        let size = simplex[1..].iter().map(|(x, _)| crate::geom::dist2(x, &simplex[0].0)).fold(0.0, f64::max);
        if size.sqrt() <= 1e-10 * step {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let refl = blend(&centroid, &worst.0, -1.0);
        let fr = f(&refl);
        evals += 1;
        if fr < simplex[0].1 {
            let exp = blend(&centroid, &worst.0, -2.0);
            let fe = f(&exp);
            evals += 1;
            simplex[n] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (refl, fr);
        } else {
            let con = if fr < worst.1 {
                blend(&centroid, &refl, 0.5)
            } else {
                blend(&centroid, &worst.0, 0.5)
            };
            let fc = f(&con);
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[n] = (con, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    *x = blend(&best, x, 0.5);
                    *v = f(x);
                }
                evals += n;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, b: &Ball) -> [f64; 2] {
    let r = b.radius * rng.random::<f64>().sqrt();
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    [b.center.coords()[0] + r * a.cos(), b.center.coords()[1] + r * a.sin()]
}

fn to_points(g: &[f64]) -> Vec<Point> {
    g.chunks_exact(2).map(|q| Point::new(q.to_vec())).collect()
}

/// Result of one search, before it is wrapped into a [`HitResult`].
pub(crate) struct ExactOutcome {
    pub points: Vec<Point>,
    pub restarts: usize,
    pub lower_bound: usize,
    pub fallback: bool,
}

pub(crate) struct SearchLimits {
    pub restarts: usize,
    pub deadline: Option<(Instant, f64)>,
}

impl SearchLimits {
    fn check(&self) -> Result<()> {
        match self.deadline {
            Some((start, secs)) if start.elapsed().as_secs_f64() > secs => Err(Error::TimeCapExceeded(secs)),
            _ => Ok(()),
        }
    }
}

/// Confirms a candidate with the annihilation formulas and the verifier.
fn confirm(inst: &LabeledPointSet, fixed: &[Point], guards: &[Point]) -> Result<bool> {
    let mut all = fixed.to_vec();
    all.extend_from_slice(guards);
    if !verify_separated(inst, &all)?.separated {
        return Ok(false);
    }
    for f in bad_features(inst, fixed)?.features {
        if !annihilate_formula(&f, guards)?.evaluate(guards)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rounds of the sampled hitting-set loop before falling back to restarts.
const SAMPLE_ROUNDS: usize = 200;
/// Node budget of one exact hitting-set solve.
const NODE_CAP: u64 = 200_000;

/// Smallest set of at most `budget` extra guards that, together with the
/// `fixed` guards, separates `inst`.
///
/// Any separator stabs every bad pencil ball, so the minimum hitting set of a
/// finite sample of bad balls bounds the optimum from below. The search
/// alternates between solving that sample exactly and adding the pencil
/// ball at the middle of each bad edge gap the solution leaves open. When
/// that stalls it runs multi-start direct search on the coverage objective.
pub(crate) fn exact_search(
    inst: &LabeledPointSet,
    fixed: &[Point],
    budget: usize,
    seed: u64,
    limits: &SearchLimits,
) -> Result<ExactOutcome> {
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension(inst.dim()));
    }
    if budget > MAX_BUDGET {
        return Err(Error::InvalidParameter(format!("budget {budget} exceeds {MAX_BUDGET}")));
    }
    let done = |points: Vec<Point>, restarts: usize, lower_bound: usize, fallback: bool| ExactOutcome {
        points,
        restarts,
        lower_bound,
        fallback,
    };
    if verify_separated(inst, fixed)?.separated {
        return Ok(done(Vec::new(), 0, 0, false));
    }
    let mut sites = inst.points().to_vec();
    sites.extend_from_slice(fixed);
    let (edges, vertices) = bad_spans(inst, fixed)?;
    let mut balls = bad_min_balls(inst, fixed)?;
    balls.sort_by(|a, b| a.radius.total_cmp(&b.radius).then_with(|| a.center.lex_cmp(&b.center)));
    if balls.is_empty() {
        // Only numerically degenerate contacts remain; the verifier decides.
        return Err(Error::NoSolutionWithinBudget(budget));
    }
    let objective = Objective::new(&sites, &edges, &vertices);
    let f = |g: &[f64]| objective.cost(g);
    let mut lower_bound = disjoint_ball_bound(&balls).max(1);
    if lower_bound > budget {
        return Err(Error::NoSolutionWithinBudget(budget));
    }
    let mut restarts = 0;

    let mut family = DiskFamily::new(&balls);
    for _ in 0..SAMPLE_ROUNDS {
        limits.check()?;
        let hit = match family.min_hitting_set(budget, NODE_CAP) {
            HsOutcome::Found(h) => h,
            HsOutcome::Infeasible => return Err(Error::NoSolutionWithinBudget(budget)),
            HsOutcome::Aborted => break,
        };
        lower_bound = lower_bound.max(hit.len());
        let mut x: Vec<f64> = hit.iter().flat_map(|&c| family.cands[c]).collect();
        let step = hit.iter().map(|&c| family.cands[c]).fold(f64::INFINITY, |m, q| {
            family
                .balls
                .iter()
                .filter(|b| b.stabbed_by(&Point::new(q.to_vec())))
                .map(|b| b.radius)
                .fold(m, f64::min)
        });
        if f(&x) > 0.0 {
            restarts += 1;
            let (y, v, _) = nelder_mead(&f, &x, 0.25 * step, 200 + 200 * hit.len());
            if v <= 0.0 {
                x = y;
            }
        }
        if f(&x) <= 0.0 {
            let guards = to_points(&x);
            if confirm(inst, fixed, &guards)? {
                return Ok(done(guards, restarts, lower_bound, false));
            }
        }
        let before = family.balls.len();
        for e in &objective.edges {
            if let Some((lo, hi)) = e.gap(&x) {
                let c = e.gap_middle(lo, hi);
                let r = (c[0] - e.site[0]).hypot(c[1] - e.site[1]);
                family.push(Ball::new(Point::new(c.to_vec()), r));
            }
        }
        if family.balls.len() == before {
            break;
        }
    }

    let pool = candidate_pool(&sites, &edges, &vertices, &balls);
    let step = balls[balls.len() / 2].radius;
    for g in lower_bound..=budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (g as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for r in 0..limits.restarts {
            limits.check()?;
            restarts += 1;
            let x0 = if r % 3 == 2 {
                let mut x0 = Vec::with_capacity(2 * g);
                for i in 0..g {
                    let b = if i == 0 { &balls[0] } else { &balls[rng.random_range(0..balls.len())] };
                    x0.extend(uniform_in_ball(&mut rng, b));
                }
                x0
            } else {
                grasp_seed(&f, &pool, g, r == 0, &mut rng)
            };
            let local_step = if r % 2 == 0 { step } else { balls[0].radius };
            let (x, v, _) = nelder_mead(&f, &x0, local_step, 400 + 300 * g);
            if v <= 0.0 {
                let guards = to_points(&x);
                if confirm(inst, fixed, &guards)? {
                    return Ok(done(guards, restarts, lower_bound, false));
                }
            }
        }
        if g == 1 {
            if let Some(p) = grid_one_guard(inst, fixed, &objective, &balls[0], limits)? {
                return Ok(done(vec![p], restarts, lower_bound, true));
            }
        }
    }
    Err(Error::NoSolutionWithinBudget(budget))
}

/// Promising single guard positions: midpoints of bad pairs, pencil
/// centers, finite edge ends and Voronoi vertices.
fn candidate_pool(points: &[Point], edges: &[EdgeSpan], vertices: &[VertexSpan], balls: &[Ball]) -> Vec<[f64; 2]> {
    let mut pool: Vec<[f64; 2]> = Vec::new();
    for e in edges {
        pool.push(e.mid);
        let (a, b) = (points[e.sites[0]].coords(), points[e.sites[1]].coords());
        for t in [0.25, 0.75] {
            pool.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
        for t in [e.t0, e.t1] {
            if t.is_finite() {
                let q = e.at(t);
                pool.push([q.coords()[0], q.coords()[1]]);
            }
        }
    }
    pool.extend(vertices.iter().map(|v| [v.ball.center.coords()[0], v.ball.center.coords()[1]]));
    pool.extend(balls.iter().map(|b| [b.center.coords()[0], b.center.coords()[1]]));
    pool.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pool.dedup();
    pool
}

/// Builds `g` guards one at a time, each picked at random among the three
/// pool points that lower the objective most (the best one if `best_only`).
fn grasp_seed(f: &dyn Fn(&[f64]) -> f64, pool: &[[f64; 2]], g: usize, best_only: bool, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x: Vec<f64> = Vec::with_capacity(2 * g);
    for _ in 0..g {
        let mut scored: Vec<(f64, usize)> = pool
            .iter()
            .enumerate()
            .map(|(i, q)| {
                x.extend_from_slice(q);
                let v = f(&x);
                x.truncate(x.len() - 2);
                (v, i)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let pick = if best_only { 0 } else { rng.random_range(0..scored.len().min(3)) };
        x.extend_from_slice(&pool[scored[pick].1]);
    }
    x
}

/// Scans a grid of spacing `diameter / 200` over the smallest bad ball,
/// which must contain any single guard that works.
fn grid_one_guard(
    inst: &LabeledPointSet,
    fixed: &[Point],
    objective: &Objective,
    smallest: &Ball,
    limits: &SearchLimits,
) -> Result<Option<Point>> {
    let h = spread(inst.points()) / GRID_STEPS;
    let c = smallest.center.coords();
    let steps = (smallest.radius / h).ceil() as i64;
    for i in -steps..=steps {
        limits.check()?;
        for j in -steps..=steps {
            let q = [c[0] + i as f64 * h, c[1] + j as f64 * h];
            if objective.cost(&q) <= 0.0 {
                let guards = to_points(&q);
                if confirm(inst, fixed, &guards)? {
                    return Ok(guards.into_iter().next());
                }
            }
        }
    }
    Ok(None)
}

/// Smallest separator with at most `budget` guards found by the search.
/// Every returned solution is verified, and `proved_optimal` is set when its
/// size matches the sampled hitting-set lower bound. `NoSolutionWithinBudget`
/// is a proof of infeasibility only when that bound already exceeds the
/// budget; otherwise the search may simply have missed a solution.
pub fn exact_small_separator(inst: &LabeledPointSet, budget: usize, seed: u64, cfg: &Config) -> Result<HitResult> {
    let limits = SearchLimits {
        restarts: cfg.exact_restarts,
        deadline: cfg.exact_time_cap_secs.map(|s| (Instant::now(), s)),
    };
    let out = exact_search(inst, &[], budget, seed, &limits)?;
    let report = verify_separated(inst, &out.points)?;
    Ok(HitResult {
        proved_optimal: out.points.len() <= out.lower_bound,
        iterations: out.restarts,
        certificate: Certificate::Separation(report),
        size_history: Vec::new(),
        lower_bound: if out.points.is_empty() { 0 } else { out.lower_bound },
        fallback: out.fallback,
        points: out.points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::bad_features;
    use crate::gen::{generate, PointDistribution};
    use crate::instance::Side;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn two_point_one_guard_on_segment() {
        let inst = LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap();
        let res = exact_small_separator(&inst, 1, 1, &cfg()).unwrap();
        assert_eq!(res.points.len(), 1);
        assert!(res.proved_optimal && res.certificate.is_valid());
        let g = res.points[0].coords();
        assert!(g[1].abs() < 1e-6 && g[0] > 0.0 && g[0] < 1.0, "{g:?}");
        assert_eq!(exact_small_separator(&inst, 0, 1, &cfg()), Err(Error::NoSolutionWithinBudget(0)));
    }

    #[test]
    fn one_class_needs_nothing() {
        let pts = generate(PointDistribution::Uniform, 8, 2, 2).unwrap();
        let inst = LabeledPointSet::new(pts, vec![Side::Two; 8]).unwrap();
        let res = exact_small_separator(&inst, 0, 1, &cfg()).unwrap();
        assert!(res.points.is_empty() && res.certificate.is_valid());
    }

    #[test]
    fn objective_zero_means_strict_cover() {
        let inst = LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap();
        let (e, v) = bad_spans(&inst, &[]).unwrap();
        let obj = Objective::new(inst.points(), &e, &v);
        assert_eq!(obj.cost(&[0.5, 0.0]), 0.0);
        assert!(obj.cost(&[0.5, 1.0]) > 0.0);
        assert!(obj.cost(&[0.5, 1.0]) < obj.cost(&[0.5, 5.0]));
        assert!(obj.cost(&[0.0, 0.0 + 1e-3]) > 0.0);
    }

    #[test]
    fn rejects_large_budget() {
        let inst = LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap();
        assert!(matches!(exact_small_separator(&inst, 9, 1, &cfg()), Err(Error::InvalidParameter(_))));
    }

    fn halfplane_instance(n: usize, seed: u64) -> LabeledPointSet {
        let pts = generate(PointDistribution::Uniform, n, 2, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let t: f64 = rng.random_range(-0.1..0.1);
        let sides = pts
            .iter()
            .map(|p| {
                let s = (p.coords()[0] - 0.5) * a.cos() + (p.coords()[1] - 0.5) * a.sin();
                if s < t { Side::One } else { Side::Two }
            })
            .collect();
        LabeledPointSet::new(pts, sides).unwrap()
    }

    /// Grid points of spacing `h` inside the open ball.
    fn grid_in(b: &Ball, h: f64) -> Vec<Point> {
        let c = b.center.coords();
        let k = (b.radius / h).ceil() as i64;
        let mut out = Vec::new();
        for i in -k..=k {
            for j in -k..=k {
                let p = Point::new(vec![c[0] + i as f64 * h, c[1] + j as f64 * h]);
                if b.stabbed_by(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Smallest `s <= 2` such that some grid configuration of `s` guards
    /// leaves no bad feature in the recomputed diagram.
    fn grid_brute_force(inst: &LabeledPointSet) -> Option<usize> {
        let separated = |g: &[Point]| bad_features(inst, g).map(|b| b.is_empty()).unwrap_or(false);
        if separated(&[]) {
            return Some(0);
        }
        let mut balls = bad_min_balls(inst, &[]).unwrap();
        balls.sort_by(|a, b| a.radius.total_cmp(&b.radius));
        let diam = spread(inst.points());
        let first = grid_in(&balls[0], diam / 200.0);
        let hits_all = |q: &Point| balls.iter().all(|b| b.stabbed_by(q));
        if first.iter().any(|q| hits_all(q) && separated(std::slice::from_ref(q))) {
            return Some(1);
        }
        let h = diam / 25.0;
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in inst.points() {
            for k in 0..2 {
                lo[k] = lo[k].min(p.coords()[k] - diam);
                hi[k] = hi[k].max(p.coords()[k] + diam);
            }
        }
        let lattice: Vec<Point> = (0..=((hi[0] - lo[0]) / h) as usize)
            .flat_map(|i| (0..=((hi[1] - lo[1]) / h) as usize).map(move |j| Point::new(vec![lo[0] + i as f64 * h, lo[1] + j as f64 * h])))
            .filter(|q| balls.iter().any(|b| b.stabbed_by(q)))
            .collect();
        let coarse: Vec<&Point> = lattice.iter().filter(|q| balls[0].stabbed_by(q)).collect();
        for q1 in coarse {
            for q2 in &lattice {
                let both = balls.iter().all(|b| b.stabbed_by(q1) || b.stabbed_by(q2));
                if both && q1.dist(q2) > 1e-12 && separated(&[q1.clone(), q2.clone()]) {
                    return Some(2);
                }
            }
        }
        None
    }

    #[test]
    fn matches_grid_brute_force() {
        let mut compared = 0;
        for seed in 0..30 {
            let n = 4 + (seed as usize % 7);
            let inst = halfplane_instance(n, seed);
            let oracle = grid_brute_force(&inst);
            let quick = Config {
                exact_time_cap_secs: Some(4.0),
                exact_restarts: 40,
                ..cfg()
            };
            let exact = exact_small_separator(&inst, 2, seed, &quick);
            if let Ok(res) = &exact {
                assert!(verify_separated(&inst, &res.points).unwrap().separated);
            }
            if let Some(s) = oracle {
                let res = exact.unwrap_or_else(|e| panic!("seed {seed}: grid found {s}, exact failed: {e}"));
                assert!(res.points.len() <= s, "seed {seed}");
                compared += 1;
            }
        }
        assert!(compared >= 10, "{compared}");
    }
}
