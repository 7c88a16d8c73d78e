//! Randomized sphere separators: the balanced Voronoi separator and the
//! guard separator for stabbed ball families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::cover::{blocker, dense_on_sphere, shield, shield_constant};
use crate::error::{Error, Result};
use crate::geom::{Ball, Point, Sphere};
use crate::instance::check_points;
use crate::kdtree::KdTree;

/// Ball centered at an input point whose radius is the distance to that
/// point's `k`-th nearest neighbor (itself included), minimized over all
/// input points; ties go to the smaller index. Its radius is at most twice
/// that of the smallest ball containing `k` points.
pub fn approx_smallest_kball(x: &[Point], k: usize) -> Result<Ball> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 || k > x.len() {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={}", x.len())));
    }
    let tree = KdTree::new(x);
    let (i, r) = kball_index(x, &tree, k);
    Ok(Ball::new(x[i].clone(), r))
}

/// Smallest float `r` with `r * r >= d2`.
pub(crate) fn covering_sqrt(d2: f64) -> f64 {
    let mut r = d2.sqrt();
    while r * r < d2 {
        r = r.next_up();
    }
    r
}

fn kth_distance(tree: &KdTree, q: &[f64], k: usize) -> f64 {
    tree.k_nearest(q, k).last().map_or(0.0, |&(_, d2)| covering_sqrt(d2))
}

fn kball_index(x: &[Point], tree: &KdTree, k: usize) -> (usize, f64) {
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x006b_6261_6c6c);
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let first = order[0];
    let mut best = (first, kth_distance(tree, x[first].coords(), k));
    for &i in &order[1..] {
        let q = x[i].coords();
        if tree.count_within_closed(q, best.1 * best.1, k) < k {
            continue;
        }
        let r = kth_distance(tree, q, k);
        if r < best.1 || (r == best.1 && i < best.0) {
            best = (i, r);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatorStats {
    pub seed: u64,
    /// Rejected rounds before the accepted one.
    pub retries: u32,
    pub net_size: usize,
    pub blocker_count: usize,
    /// Input points within `ell` of the sphere.
    pub near_count: usize,
    /// Radius of the approximate smallest ball with `n / c_d` points.
    pub r: f64,
    pub r_prime: f64,
    pub ell: f64,
    /// Guard count above which a round is rejected.
    pub size_threshold: f64,
    /// True when the radius range was shortened to keep `n / c_d` points outside.
    pub range_clamped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatorResult {
    pub sphere: Sphere,
    pub guards: Vec<Point>,
    /// Indices of input points in the closed ball.
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
    pub stats: SeparatorStats,
}

/// Smallest integer `m` with `m * c >= n`.
pub fn balance_floor(n: usize, c: f64) -> usize {
    let mut m = (n as f64 / c).ceil() as usize;
    while m > 0 && ((m - 1) as f64) * c >= n as f64 {
        m -= 1;
    }
    while (m as f64) * c < n as f64 {
        m += 1;
    }
    m
}

/// Sphere separator with guards on the sphere: a dense net plus blockers of
/// the input points close to the sphere.
pub fn balanced_voronoi_separator(points: &[Point], seed: u64, cfg: &Config) -> Result<SeparatorResult> {
    let d = check_points(points)?;
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let n = points.len();
    let c_d = cfg.c_d(d);
    let m = balance_floor(n, c_d);
    if n < 2 * m.max(1) {
        return Err(Error::TooFewPoints { n, min: 2 * m.max(1) });
    }
    let tree = KdTree::new(points);
    let (ci, r) = kball_index(points, &tree, m);
    if r <= 0.0 {
        return Err(Error::Degenerate(format!("{m} or more coincident points")));
    }
    let psi = points[ci].clone();
    let dist: Vec<f64> = points.iter().map(|p| p.dist(&psi)).collect();
    let mut sorted = dist.clone();
    sorted.sort_by(f64::total_cmp);
    let r_bal = sorted[n - m];
    let range_clamped = r_bal < 2.0 * r;
    let r_hi = r_bal.min(2.0 * r);
    if r_hi <= r {
        return Err(Error::Degenerate("no balanced radius in [r, 2r]".into()));
    }
    let nf = n as f64;
    let root = nf.powf(1.0 / d as f64);
    let size_threshold = 2.0 * cfg.c_sep(d) * nf / root;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut retries = 0;
    while retries <= cfg.max_retries {
        let r_prime = r + (r_hi - r) * rng.random::<f64>();
        match separator_round(points, &dist, &psi, r_prime, root, m, cfg.eps_num)? {
            Some((sphere, guards, inside, outside, net_size, near_count)) if guards.len() as f64 <= size_threshold => {
                let blocker_count = guards.len() - net_size;
                return Ok(SeparatorResult {
                    sphere,
                    guards,
                    inside,
                    outside,
                    stats: SeparatorStats {
                        seed,
                        retries,
                        net_size,
                        blocker_count,
                        near_count,
                        r,
                        r_prime,
                        ell: r_prime / root,
                        size_threshold,
                        range_clamped,
                    },
                });
            }
            _ => retries += 1,
        }
    }
    Err(Error::RetriesExhausted(cfg.max_retries))
}

type Round = (Sphere, Vec<Point>, Vec<usize>, Vec<usize>, usize, usize);

fn separator_round(
    points: &[Point],
    dist: &[f64],
    psi: &Point,
    r_prime: f64,
    root: f64,
    m: usize,
    eps: f64,
) -> Result<Option<Round>> {
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..points.len()).partition(|&i| dist[i] <= r_prime);
    if inside.len() < m || outside.len() < m {
        return Ok(None);
    }
    let sphere = Sphere::new(psi.clone(), r_prime);
    let ell = r_prime / root;
    let mut guards = dense_on_sphere(&sphere, ell)?.points;
    let net_size = guards.len();
    let mut near_count = 0;
    for (i, p) in points.iter().enumerate() {
        if (dist[i] - r_prime).abs() <= ell {
            near_count += 1;
            match blocker(p, &sphere, eps) {
                Ok(b) => guards.extend(b),
                Err(Error::OnSphere) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some((sphere, guards, inside, outside, net_size, near_count)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuardSeparatorStats {
    pub seed: u64,
    pub retries: u32,
    pub shield_size: usize,
    /// Points of `X` within `ell` of the sphere, all of which are guards.
    pub near_count: usize,
    /// Points of `X` in the ball of radius `2r` around the center.
    pub region_count: usize,
    pub r: f64,
    pub r_prime: f64,
    pub ell: f64,
    pub size_threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuardSeparatorResult {
    pub sphere: Sphere,
    pub extra_guards: Vec<Point>,
    /// Indices of `X` in the closed ball bounded by the sphere.
    pub inside: Vec<usize>,
    pub inside_count: usize,
    /// Indices of `X` within `ell` of the sphere.
    pub near: Vec<usize>,
    pub stats: GuardSeparatorStats,
}

/// Sphere around roughly `k` points of `X` with guards that stab every ball
/// meeting the sphere that `X` stabs.
pub fn guard_separator(x: &[Point], k: usize, seed: u64, cfg: &Config) -> Result<GuardSeparatorResult> {
    let d = check_points(x)?;
    let c2 = cfg.c_dbl(d).powi(2);
    let max = (x.len() as f64 / c2).floor() as usize;
    if k > max {
        return Err(Error::KTooLarge { k, max });
    }
    guard_separator_unchecked(x, k, seed, cfg)
}

/// [`guard_separator`] without the bound on `k`; requires `1 <= k <= |X|`.
pub(crate) fn guard_separator_unchecked(x: &[Point], k: usize, seed: u64, cfg: &Config) -> Result<GuardSeparatorResult> {
    let d = check_points(x)?;
    if k == 0 || k > x.len() {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={}", x.len())));
    }
    let tree = KdTree::new(x);
    let (ci, r) = kball_index(x, &tree, k);
    if r <= 0.0 {
        return Err(Error::Degenerate(format!("{k} or more coincident points")));
    }
    let psi = x[ci].clone();
    let kf = k as f64;
    let root = kf.powf(1.0 / d as f64);
    let ell = r / root;
    let dist: Vec<f64> = x.iter().map(|p| p.dist(&psi)).collect();
    let region_count = dist.iter().filter(|&&t| t <= 2.0 * r).count();
    let size_threshold = (shield_constant(d) * 4f64.powi(d as i32 - 1) + 6.0 * cfg.c_dbl(d).powi(2)) * kf / root;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut retries = 0;
    while retries <= cfg.max_retries {
        let r_prime = r + (r - ell).max(0.0) * rng.random::<f64>();
        let sphere = Sphere::new(psi.clone(), r_prime);
        let mut extra = shield(&sphere, ell / 2.0)?;
        let shield_size = extra.len();
        let near: Vec<usize> = (0..x.len()).filter(|&i| (dist[i] - r_prime).abs() <= ell).collect();
        extra.extend(near.iter().map(|&i| x[i].clone()));
        if extra.len() as f64 > size_threshold {
            retries += 1;
            continue;
        }
        let inside: Vec<usize> = (0..x.len()).filter(|&i| dist[i] <= r_prime).collect();
        return Ok(GuardSeparatorResult {
            sphere,
            extra_guards: extra,
            inside_count: inside.len(),
            inside,
            stats: GuardSeparatorStats {
                seed,
                retries,
                shield_size,
                near_count: near.len(),
                region_count,
                r,
                r_prime,
                ell,
                size_threshold,
            },
            near,
        });
    }
    Err(Error::RetriesExhausted(cfg.max_retries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, PointDistribution};
    use crate::geom::circumball;

    /// Smallest radius of a closed ball containing `k` points: the optimum is
    /// a point, the diametral ball of a pair, or the circumball of a triple.
    fn brute_r_opt(x: &[Point], k: usize) -> f64 {
        if k <= 1 {
            return 0.0;
        }
        let count = |c: &Point, r: f64| x.iter().filter(|p| p.dist(c) <= r * (1.0 + 1e-12) + 1e-15).count();
        let mut best = f64::INFINITY;
        let n = x.len();
        for i in 0..n {
            for j in i + 1..n {
                let r = x[i].dist(&x[j]) / 2.0;
                if r < best {
                    let c = Point::new(x[i].coords().iter().zip(x[j].coords()).map(|(a, b)| (a + b) / 2.0).collect());
                    if count(&c, r) >= k {
                        best = r;
                    }
                }
                for l in j + 1..n {
                    if let Ok(b) = circumball(&[x[i].clone(), x[j].clone(), x[l].clone()], 1e-12) {
                        if b.radius < best && count(&b.center, b.radius) >= k {
                            best = b.radius;
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn kball_coincident_points() {
        let mut x: Vec<Point> = vec![Point::origin(2); 5];
        x.push([10.0, 10.0].into());
        x.push([-10.0, 3.0].into());
        let b = approx_smallest_kball(&x, 5).unwrap();
        assert_eq!(b.center, Point::origin(2));
        assert_eq!(b.radius, 0.0);
    }

    #[test]
    fn kball_on_a_line() {
        let x: Vec<Point> = (0..10).map(|i| Point::new(vec![i as f64, 0.0])).collect();
        assert_eq!(brute_r_opt(&x, 3), 1.0);
        let b = approx_smallest_kball(&x, 3).unwrap();
        assert!(b.radius <= 2.0);
        assert!(x.iter().filter(|p| b.contains(p)).count() >= 3);
    }

    #[test]
    fn kball_is_two_approximation() {
        for seed in 0..200 {
            let x = generate(PointDistribution::Uniform, 100, 2, seed).unwrap();
            let b = approx_smallest_kball(&x, 10).unwrap();
            assert!(x.iter().filter(|p| b.contains(p)).count() >= 10);
            let opt = brute_r_opt(&x, 10);
            assert!(b.radius <= 2.0 * opt * (1.0 + 1e-12), "seed {seed}: {} vs {opt}", b.radius);
            assert!(b.radius >= opt * (1.0 - 1e-12));
        }
    }

    #[test]
    fn kball_matches_exhaustive_scan() {
        for seed in 0..20 {
            let x = generate(PointDistribution::Clustered, 500, 3, seed).unwrap();
            let tree = KdTree::new(&x);
            let k = 37;
            let mut best = (0, f64::INFINITY);
            for (i, p) in x.iter().enumerate() {
                let r = kth_distance(&tree, p.coords(), k);
                if r < best.1 {
                    best = (i, r);
                }
            }
            assert_eq!(kball_index(&x, &tree, k), best);
        }
    }

    #[test]
    fn kball_errors() {
        assert_eq!(approx_smallest_kball(&[], 1), Err(Error::EmptyInput));
        assert!(approx_smallest_kball(&[Point::origin(2)], 2).is_err());
    }

    #[test]
    fn balance_floor_values() {
        assert_eq!(balance_floor(100, 10.0), 10);
        assert_eq!(balance_floor(101, 10.0), 11);
        assert_eq!(balance_floor(1000, 65.0), 16);
    }

    #[test]
    fn separator_contract() {
        let cfg = Config::default();
        for (d, n) in [(2, 500), (3, 400)] {
            for seed in 0..10 {
                let pts = generate(PointDistribution::Uniform, n, d, seed).unwrap();
                let res = balanced_voronoi_separator(&pts, seed, &cfg).unwrap();
                let c_d = cfg.c_d(d);
                assert!(res.inside.len() as f64 * c_d >= n as f64);
                assert!(res.outside.len() as f64 * c_d >= n as f64);
                assert_eq!(res.inside.len() + res.outside.len(), n);
                let s = &res.sphere;
                for &i in &res.inside {
                    assert!(pts[i].dist(&s.center) <= s.radius);
                }
                for &i in &res.outside {
                    assert!(pts[i].dist(&s.center) > s.radius);
                }
                for g in &res.guards {
                    assert!((g.dist(&s.center) - s.radius).abs() <= 1e-9 * s.radius);
                }
                assert!(res.guards.len() as f64 <= res.stats.size_threshold);
                assert!(res.stats.r_prime >= res.stats.r && res.stats.r_prime <= 2.0 * res.stats.r);
                assert_eq!(res.stats.blocker_count + res.stats.net_size, res.guards.len());
            }
        }
    }

    #[test]
    fn separator_dominates_sphere() {
        let cfg = Config::default();
        let pts = generate(PointDistribution::Uniform, 500, 2, 7).unwrap();
        let res = balanced_voronoi_separator(&pts, 7, &cfg).unwrap();
        let s = &res.sphere;
        let pt = KdTree::new(&pts);
        let gt = KdTree::new(&res.guards);
        for k in 0..10_000 {
            let a = k as f64 * std::f64::consts::TAU / 10_000.0;
            let y = s.center.offset(&[a.cos(), a.sin()], s.radius);
            let dp = pt.nearest(y.coords()).unwrap().1;
            let dg = gt.nearest(y.coords()).unwrap().1;
            assert!(dg <= dp, "sample {k}");
        }
    }

    #[test]
    fn separator_deterministic() {
        let cfg = Config::default();
        let pts = generate(PointDistribution::Clustered, 300, 2, 3).unwrap();
        let a = balanced_voronoi_separator(&pts, 11, &cfg).unwrap();
        let b = balanced_voronoi_separator(&pts, 11, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn separator_errors() {
        let cfg = Config::default();
        let pts = generate(PointDistribution::Uniform, 1, 2, 1).unwrap();
        assert_eq!(
            balanced_voronoi_separator(&pts, 1, &cfg),
            Err(Error::TooFewPoints { n: 1, min: 2 })
        );
        let pts = generate(PointDistribution::Uniform, 200, 4, 1).unwrap();
        assert_eq!(balanced_voronoi_separator(&pts, 1, &cfg), Err(Error::UnsupportedDimension(4)));
        let dup = vec![Point::origin(2); 40];
        assert!(matches!(balanced_voronoi_separator(&dup, 1, &cfg), Err(Error::Degenerate(_))));
    }

    #[test]
    fn guard_separator_contract() {
        let cfg = Config::default();
        let x = generate(PointDistribution::Uniform, 2000, 2, 5).unwrap();
        let k = 20;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..5 {
            let res = guard_separator(&x, k, seed, &cfg).unwrap();
            assert!(res.inside_count >= k && res.inside_count <= 81 * k);
            let s = &res.sphere;
            assert!(res.stats.r_prime >= res.stats.r && res.stats.r_prime <= 2.0 * res.stats.r - res.stats.ell + 1e-12);
            let mut tested = 0;
            while tested < 1000 {
                let anchor = &x[rng.random_range(0..x.len())];
                let rad = rng.random_range(0.0..3.0) * res.stats.ell;
                let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let t: f64 = rng.random::<f64>() * rad;
                let b = Ball::new(anchor.offset(&[a.cos(), a.sin()], t), rad);
                if !b.stabbed_by(anchor) || !b.intersects_sphere(s) {
                    continue;
                }
                tested += 1;
                assert!(res.extra_guards.iter().any(|g| b.stabbed_by(g)));
            }
        }
        assert_eq!(
            guard_separator(&x, 25, 0, &cfg),
            Err(Error::KTooLarge { k: 25, max: 24 })
        );
    }
}
