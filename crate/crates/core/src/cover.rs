//! Dense nets on spheres and in balls, per-point blockers, and shield rings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point, Sphere};
use crate::linalg::{dot, norm};

/// Size constant of [`dense_on_sphere`]: `|net| <= c * max(1, r/ell)^(d-1)`.
pub fn sphere_net_constant(d: usize) -> f64 {
    match d {
        2 => 32.0,
        _ => 128.0,
    }
}

/// Size constant of [`dense_in_ball`]: `(2 sqrt d + 1)^d` bounds the number of
/// grid vertices of side `spacing / sqrt d` in a ball of radius `spacing`.
pub fn ball_net_constant(d: usize) -> f64 {
    (2.0 * (d as f64).sqrt() + 1.0).powi(d as i32)
}

/// Size constant of [`shield`]: `|shield| <= c * max(1, r/lambda)^(d-1)`.
pub fn shield_constant(d: usize) -> f64 {
    match d {
        2 => 64.0,
        3 => 640.0,
        _ => 8.0 * ball_net_constant(d),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetHost {
    Sphere(Sphere),
    Ball(Ball),
}

/// A point set such that every host point has a net point within `spacing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseNet {
    pub points: Vec<Point>,
    pub host: NetHost,
    pub spacing: f64,
    /// Constant `C` of the size bound `C * max(1, r/spacing)^e`.
    pub size_constant: f64,
}

impl DenseNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The size bound the construction guarantees.
    pub fn size_bound(&self) -> f64 {
        let (r, e) = match &self.host {
            NetHost::Sphere(s) => (s.radius, s.dim() - 1),
            NetHost::Ball(b) => (b.radius, b.center.dim()),
        };
        self.size_constant * (r / self.spacing).max(1.0).powi(e as i32)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Visits integer vectors `idx` of length `d - 1` with
/// `sum (|idx_k| g)^2 <= limit2`, passing the partial sums of the squared
/// minimum and maximum coordinate offsets of the cell `[idx g, (idx + 1) g]`
/// and of the vertex `idx g`.
struct Columns {
    g: f64,
    limit2: f64,
    m: i64,
}

#[derive(Clone, Copy)]
struct Partial {
    cell_min2: f64,
    cell_max2: f64,
    vertex2: f64,
}

impl Columns {
    fn visit(&self, depth: usize, idx: &mut Vec<i64>, acc: Partial, f: &mut dyn FnMut(&[i64], Partial)) {
        if depth == 0 {
            f(idx, acc);
            return;
        }
        for i in -self.m..=self.m {
            let lo = i as f64 * self.g;
            let hi = lo + self.g;
            let cmin = if i >= 0 { lo } else if hi <= 0.0 { -hi } else { 0.0 };
            let cmax = lo.abs().max(hi.abs());
            let next = Partial {
                cell_min2: acc.cell_min2 + cmin * cmin,
                cell_max2: acc.cell_max2 + cmax * cmax,
                vertex2: acc.vertex2 + lo * lo,
            };
            if next.cell_min2 > self.limit2 {
                continue;
            }
            idx.push(i);
            self.visit(depth - 1, idx, next, f);
            idx.pop();
        }
    }
}

/// Integer range of last-axis cells `j` whose interval `[j g, (j+1) g]`
/// reaches within `u` of zero and extends beyond `w` from zero.
fn cell_band(u: f64, w: f64, g: f64) -> Vec<i64> {
    let hi = (u / g).floor() as i64;
    let lo = ((w / g) - 1.0).ceil().max(0.0) as i64;
    let mut out = Vec::new();
    for j in lo..=hi {
        out.push(j);
        out.push(-j - 1);
    }
    out
}

/// ℓ-dense point set on a sphere in dimension 2 or 3: the projections of the
/// centers of all grid cells of side `ell / sqrt d` that meet the sphere.
pub fn dense_on_sphere(s: &Sphere, ell: f64) -> Result<DenseNet> {
    check_positive("ell", ell)?;
    let d = s.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let r = s.radius;
    let g = ell / (d as f64).sqrt();
    let slack = 1e-12 * r.max(g);
    let r2_in = (r + slack) * (r + slack);
    let r2_out = (r - slack).max(0.0).powi(2);
    let cols = Columns {
        g,
        limit2: r2_in,
        m: (r / g).ceil() as i64 + 1,
    };
    let mut points = Vec::new();
    let mut idx = Vec::with_capacity(d);
    let zero = Partial { cell_min2: 0.0, cell_max2: 0.0, vertex2: 0.0 };
    cols.visit(d - 1, &mut idx, zero, &mut |idx, acc| {
        let u = (r2_in - acc.cell_min2).max(0.0).sqrt();
        let w = (r2_out - acc.cell_max2).max(0.0).sqrt();
        for j in cell_band(u, w, g) {
            let mut z: Vec<f64> = idx.iter().map(|&i| (i as f64 + 0.5) * g).collect();
            z.push((j as f64 + 0.5) * g);
            let n = norm(&z);
            let dir: Vec<f64> = if n > 0.0 {
                z.iter().map(|v| v / n).collect()
            } else {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            };
            points.push(s.center.offset(&dir, r));
        }
    });
    Ok(DenseNet {
        points,
        host: NetHost::Sphere(s.clone()),
        spacing: ell,
        size_constant: sphere_net_constant(d),
    })
}

/// Grid vertices of side `g` anchored at `center` with squared distance to
/// `center` in `[lo2, hi2]`.
fn grid_vertices_in_shell(center: &Point, g: f64, lo2: f64, hi2: f64) -> Vec<Point> {
    let d = center.dim();
    let cols = Columns {
        g,
        limit2: hi2,
        m: (hi2.sqrt() / g).floor() as i64 + 1,
    };
    let mut out = Vec::new();
    let mut idx = Vec::with_capacity(d);
    let zero = Partial { cell_min2: 0.0, cell_max2: 0.0, vertex2: 0.0 };
    cols.visit(d - 1, &mut idx, zero, &mut |idx, acc| {
        if acc.vertex2 > hi2 {
            return;
        }
        let jmax = ((hi2 - acc.vertex2).sqrt() / g).floor() as i64;
        let jmin = ((lo2 - acc.vertex2).max(0.0).sqrt() / g).ceil() as i64;
        for j in jmin..=jmax {
            for sj in if j == 0 { vec![0] } else { vec![j, -j] } {
                let mut v: Vec<f64> = idx.iter().map(|&i| i as f64 * g).collect();
                v.push(sj as f64 * g);
                let q2 = dot(&v, &v);
                if q2 >= lo2 && q2 <= hi2 {
                    out.push(center.offset(&v, 1.0));
                }
            }
        }
    });
    out
}

/// `spacing`-dense set in a closed ball: grid vertices of side
/// `spacing / sqrt d`, anchored at the center, that lie in the ball.
pub fn dense_in_ball(b: &Ball, spacing: f64) -> Result<DenseNet> {
    check_positive("spacing", spacing)?;
    let d = b.center.dim();
    let g = spacing / (d as f64).sqrt();
    let points = grid_vertices_in_shell(&b.center, g, 0.0, b.radius * b.radius);
    Ok(DenseNet {
        points,
        host: NetHost::Ball(b.clone()),
        spacing,
        size_constant: ball_net_constant(d),
    })
}

/// Points such that every closed ball of radius at least `lambda` meeting
/// the sphere contains one of them: grid vertices of side `lambda / sqrt d`
/// in the ring `r - 2 lambda <= |x - c| <= r + 2 lambda`.
pub fn shield(s: &Sphere, lambda: f64) -> Result<Vec<Point>> {
    check_positive("lambda", lambda)?;
    let d = s.dim();
    let g = lambda / (d as f64).sqrt();
    let lo = (s.radius - 2.0 * lambda).max(0.0);
    let hi = s.radius + 2.0 * lambda;
    Ok(grid_vertices_in_shell(&s.center, g, lo * lo, hi * hi))
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Cone axes whose caps of angular radius pi/6 cover the direction sphere.
pub(crate) fn cone_axes(d: usize) -> Result<Vec<Vec<f64>>> {
    match d {
        2 => Ok((0..6)
            .map(|k| {
                let a = k as f64 * std::f64::consts::FRAC_PI_3;
                vec![a.cos(), a.sin()]
            })
            .collect()),
        3 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let mut ico = Vec::with_capacity(12);
            for &a in &[-1.0, 1.0] {
                for &b in &[-1.0, 1.0] {
                    ico.push(unit(&[0.0, a, b * phi]));
                    ico.push(unit(&[a, b * phi, 0.0]));
                    ico.push(unit(&[a * phi, 0.0, b]));
                }
            }
            let mut axes = ico.clone();
            for i in 0..ico.len() {
                for j in i + 1..ico.len() {
                    if dot(&ico[i], &ico[j]) > 0.4 {
                        let m: Vec<f64> = ico[i].iter().zip(&ico[j]).map(|(x, y)| x + y).collect();
                        axes.push(unit(&m));
                    }
                }
            }
            Ok(axes)
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Half the angular diameter of each blocker cone.
pub(crate) const CONE_HALF_ANGLE: f64 = std::f64::consts::PI / 6.0;

/// Some unit vector orthogonal to the unit vector `a`.
fn any_orthogonal(a: &[f64]) -> Vec<f64> {
    let k = (0..a.len())
        .min_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
        .unwrap_or(0);
    let mut e = vec![0.0; a.len()];
    e[k] = 1.0;
    let t = dot(&e, a);
    unit(&e.iter().zip(a).map(|(x, y)| x - t * y).collect::<Vec<_>>())
}

/// Constant-size point set on the sphere whose points are at least as close
/// as `p` to every point of the sphere.
pub fn blocker(p: &Point, s: &Sphere, eps: f64) -> Result<Vec<Point>> {
    let d = s.dim();
    if p.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
    }
    let r = s.radius;
    let w = p.sub(&s.center);
    let wn = norm(&w);
    if (wn - r).abs() <= eps * r.max(1.0) {
        return Err(Error::OnSphere);
    }
    if wn > r {
        return Ok(vec![s.center.offset(&w, r / wn)]);
    }
    let axes = cone_axes(d)?;
    let (cos_r, sin_r) = (CONE_HALF_ANGLE.cos(), CONE_HALF_ANGLE.sin());
    let mut out: Vec<Point> = Vec::with_capacity(axes.len());
    for a in &axes {
        let v = if wn <= eps * r {
            a.clone()
        } else {
            let wh: Vec<f64> = w.iter().map(|x| x / wn).collect();
            let c = dot(a, &wh);
            if c >= cos_r {
                wh
            } else {
                let perp: Vec<f64> = wh.iter().zip(a).map(|(x, y)| x - c * y).collect();
                let pn = norm(&perp);
                let perp = if pn <= 1e-12 { any_orthogonal(a) } else { perp.iter().map(|x| x / pn).collect() };
                a.iter().zip(&perp).map(|(x, y)| cos_r * x + sin_r * y).collect()
            }
        };
        let vw = dot(&v, &w);
        let t = -vw + (vw * vw + r * r - wn * wn).max(0.0).sqrt();
        let hit: Vec<f64> = w.iter().zip(&v).map(|(x, y)| x + t * y).collect();
        let q = s.center.offset(&hit, r / norm(&hit));
        if !out.iter().any(|o| o.dist2(&q) <= (eps * r).powi(2)) {
            out.push(q);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_dir(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            if norm(&v) > 1e-9 {
                return unit(&v);
            }
        }
    }

    fn sphere_samples(s: &Sphere, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| s.center.offset(&random_dir(&mut rng, s.dim()), s.radius))
            .collect()
    }

    fn ball_samples(b: &Ball, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = b.center.dim();
        (0..n)
            .map(|_| {
                let dir = random_dir(&mut rng, d);
                let t: f64 = rng.random::<f64>().powf(1.0 / d as f64) * b.radius;
                b.center.offset(&dir, t)
            })
            .collect()
    }

    fn max_gap(net: &[Point], samples: &[Point]) -> f64 {
        let tree = crate::kdtree::KdTree::new(net);
        samples
            .iter()
            .map(|y| tree.nearest(y.coords()).unwrap().1.sqrt())
            .fold(0.0, f64::max)
    }

    #[test]
    fn unit_circle_net_is_dense_and_small() {
        let s = Sphere::new(Point::origin(2), 1.0);
        let net = dense_on_sphere(&s, 0.2).unwrap();
        assert!(max_gap(&net.points, &sphere_samples(&s, 10_000, 1)) <= 0.2);
        assert!(net.len() as f64 <= 32.0 * (1.0 / 0.2));
        assert!(net.len() as f64 <= net.size_bound());
        for p in &net.points {
            assert!((p.dist(&s.center) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_net_is_nonempty() {
        let s = Sphere::new(Point::new(vec![1.0, 2.0]), 5.0);
        let net = dense_on_sphere(&s, 5.0).unwrap();
        assert!(!net.is_empty());
        assert!(max_gap(&net.points, &sphere_samples(&s, 10_000, 2)) <= 5.0);
        let tiny = dense_on_sphere(&Sphere::new(Point::origin(3), 0.01), 10.0).unwrap();
        assert!(!tiny.is_empty());
    }

    #[test]
    fn sphere_nets_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..60 {
            let d = 2 + trial % 2;
            let c: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
            let r = rng.random_range(0.05..4.0);
            let ell = r * rng.random_range(0.03..3.0);
            let s = Sphere::new(Point::new(c), r);
            let net = dense_on_sphere(&s, ell).unwrap();
            assert!(max_gap(&net.points, &sphere_samples(&s, 2_000, trial as u64)) <= ell);
            assert!(net.len() as f64 <= net.size_bound(), "d={d} r/ell={} n={}", r / ell, net.len());
        }
    }

    #[test]
    fn sphere_net_rejects_high_dimension() {
        let s = Sphere::new(Point::origin(4), 1.0);
        assert_eq!(dense_on_sphere(&s, 0.5), Err(Error::UnsupportedDimension(4)));
        assert!(matches!(dense_on_sphere(&Sphere::new(Point::origin(2), 1.0), 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn blocker_outside_point() {
        let s = Sphere::new(Point::origin(2), 1.0);
        let b = blocker(&Point::new(vec![2.0, 0.0]), &s, 1e-9).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].dist(&Point::new(vec![1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn blocker_at_center_uses_axes() {
        let s = Sphere::new(Point::origin(2), 1.0);
        let b = blocker(&Point::origin(2), &s, 1e-9).unwrap();
        assert_eq!(b.len(), 6);
        for (k, q) in b.iter().enumerate() {
            let a = k as f64 * std::f64::consts::FRAC_PI_3;
            assert!(q.dist(&Point::new(vec![a.cos(), a.sin()])) < 1e-12);
        }
    }

    #[test]
    fn blocker_on_sphere_errors() {
        let s = Sphere::new(Point::origin(3), 2.0);
        assert_eq!(blocker(&Point::new(vec![0.0, 2.0, 0.0]), &s, 1e-9), Err(Error::OnSphere));
    }

    #[test]
    fn cone_axes_cover_directions() {
        for d in [2, 3] {
            let axes = cone_axes(d).unwrap();
            assert_eq!(axes.len(), if d == 2 { 6 } else { 42 });
            let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
            for _ in 0..20_000 {
                let v = random_dir(&mut rng, d);
                let best = axes.iter().map(|a| dot(a, &v)).fold(-1.0, f64::max);
                assert!(best >= CONE_HALF_ANGLE.cos() - 1e-12);
            }
        }
    }

    #[test]
    fn blocker_dominates_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..500 {
            let d = 2 + trial % 2;
            let c: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let r = rng.random_range(0.1..3.0);
            let s = Sphere::new(Point::new(c), r);
            let t = r * rng.random::<f64>().powf(0.3) * 0.999;
            let p = s.center.offset(&random_dir(&mut rng, d), t);
            let b = blocker(&p, &s, 1e-9).unwrap();
            assert!(b.len() <= if d == 2 { 6 } else { 42 });
            for q in &b {
                assert!((q.dist(&s.center) - r).abs() <= 1e-9 * r.max(1.0));
            }
            let n = if trial < 20 { 10_000 } else { 500 };
            for y in sphere_samples(&s, n, trial as u64) {
                let near = b.iter().map(|q| q.dist(&y)).fold(f64::INFINITY, f64::min);
                assert!(near <= y.dist(&p) + 1e-12 * r, "trial {trial}");
            }
        }
    }

    fn random_ball_touching(rng: &mut ChaCha8Rng, s: &Sphere, lambda: f64) -> Ball {
        let d = s.dim();
        let y = s.center.offset(&random_dir(rng, d), s.radius);
        let rad = rng.random_range(lambda..3.0 * lambda);
        let off = rad * rng.random::<f64>();
        Ball::new(y.offset(&random_dir(rng, d), off), rad)
    }

    #[test]
    fn shield_stabs_touching_balls() {
        let s = Sphere::new(Point::origin(2), 1.0);
        let sh = shield(&s, 1.0).unwrap();
        assert!(sh.len() as f64 <= shield_constant(2));
        let b = Ball::new(Point::new(vec![1.5, 0.0]), 1.0);
        assert!(sh.iter().any(|p| b.contains(p)));
        for lambda in [1.0, 0.5, 0.25] {
            let t = Ball::new(Point::new(vec![0.0, 1.0 - lambda]), lambda);
            assert!(shield(&s, lambda).unwrap().iter().any(|p| t.contains(p)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3] {
            let s = Sphere::new(Point::new(vec![0.3; d]), 2.0);
            let lambda = 0.3;
            let sh = shield(&s, lambda).unwrap();
            assert!(sh.len() as f64 <= shield_constant(d) * (2.0f64 / lambda).powi(d as i32 - 1));
            for _ in 0..1000 {
                let b = random_ball_touching(&mut rng, &s, lambda);
                assert!(b.intersects_sphere(&s));
                assert!(sh.iter().any(|p| b.contains(p)));
            }
        }
    }

    #[test]
    fn ball_nets() {
        let b = Ball::new(Point::origin(2), 1.0);
        let net = dense_in_ball(&b, 2.0).unwrap();
        assert!(net.points.contains(&Point::origin(2)));
        assert!(max_gap(&net.points, &ball_samples(&b, 10_000, 1)) <= 2.0);

        let b = Ball::new(Point::new(vec![0.5, 0.0]), 1.0);
        let net = dense_in_ball(&b, 0.5).unwrap();
        assert!(max_gap(&net.points, &ball_samples(&b, 10_000, 2)) <= 0.5);
        assert!(net.points.iter().all(|p| b.contains(p)));

        let net = dense_in_ball(&b, 0.25).unwrap();
        assert!(net.len() as f64 <= ball_net_constant(2) * 16.0);
        assert!(net.len() as f64 <= net.size_bound());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..40 {
            let d = 2 + trial % 3;
            let r = rng.random_range(0.1..2.0);
            let sp = r * rng.random_range(0.1..3.0);
            let b = Ball::new(Point::new((0..d).map(|_| rng.random_range(-1.0..1.0)).collect()), r);
            let net = dense_in_ball(&b, sp).unwrap();
            assert!(max_gap(&net.points, &ball_samples(&b, 2_000, trial as u64)) <= sp);
            assert!(net.len() as f64 <= net.size_bound());
        }
    }
}
