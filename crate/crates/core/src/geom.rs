//! Geometric primitives: points, balls, spheres, simplices and the handful of
//! predicates the rest of the crate is built on.
//!
//! Everything is plain `f64` with a relative tolerance (`eps`) supplied by the
//! caller. Inputs are assumed to be in general position; violations surface as
//! errors instead of being perturbed away.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn origin(d: usize) -> Self {
        Point::new(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        dist2(&self.coords, &other.coords)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: &[f64], t: f64) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(dir)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    /// Total order on coordinates, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::new(v.to_vec())
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0 && radius.is_finite());
        Ball { center, radius }
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist2(p) <= self.radius * self.radius
    }

    /// Strict containment: `p` lies in the open interior.
    pub fn stabbed_by(&self, p: &Point) -> bool {
        self.center.dist2(p) < self.radius * self.radius
    }

    pub fn intersects_sphere(&self, s: &Sphere) -> bool {
        let d = self.center.dist(&s.center);
        d <= s.radius + self.radius && d >= s.radius - self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius > 0.0);
        Sphere { center, radius }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Unsigned distance from `p` to the sphere surface.
    pub fn distance(&self, p: &Point) -> f64 {
        (p.dist(&self.center) - self.radius).abs()
    }

    pub fn ball(&self) -> Ball {
        Ball::new(self.center.clone(), self.radius)
    }
}

/// Convex hull of 1..=d+1 affinely independent points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>, eps: f64) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyInput)?;
        let d = first.dim();
        if let Some(p) = vertices.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.dim(),
            });
        }
        if vertices.len() > d + 1 || !affinely_independent(&vertices, eps) {
            return Err(Error::DegenerateSites);
        }
        Ok(Simplex { vertices })
    }

    /// Builds a simplex without checking affine independence. Zero-length
    /// simplices are allowed here; they come out of degenerate Voronoi edges.
    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Dimension of the simplex (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn centroid(&self) -> Point {
        let d = self.vertices[0].dim();
        let mut c = vec![0.0; d];
        for v in &self.vertices {
            for (a, b) in c.iter_mut().zip(v.coords()) {
                *a += b;
            }
        }
        let n = self.vertices.len() as f64;
        Point::new(c.into_iter().map(|x| x / n).collect())
    }
}

fn affinely_independent(points: &[Point], eps: f64) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let base = &points[0];
    let vs: Vec<Vec<f64>> = points[1..].iter().map(|p| p.sub(base)).collect();
    let scale = vs.iter().map(|v| linalg::norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return false;
    }
    // Gram determinant relative to the scale of the edge vectors.
    let k = vs.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| linalg::dot(&vs[i], &vs[j])).collect())
        .collect();
    let g = linalg::det(gram);
    g > eps * scale.powi(2 * k as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallSign {
    Inside,
    On,
    Outside,
}

/// Orientation determinant of d+1 points: det[s_i - s_0], i = 1..=d.
pub fn orientation(sites: &[Point]) -> f64 {
    let base = &sites[0];
    linalg::det(sites[1..].iter().map(|s| s.sub(base)).collect())
}

/// Position of `q` relative to the ball through `sites` (d+1 points in R^d).
///
/// The lifted determinant is divided by `(-1)^d` times the orientation
/// determinant, which yields `R^2 - |q - c|^2` independent of site order.
pub fn in_ball_sign(sites: &[Point], q: &Point, eps: f64) -> Result<BallSign> {
    let d = q.dim();
    if sites.len() != d + 1 {
        return Err(Error::InvalidParameter(format!(
            "in_ball_sign needs {} sites in dimension {d}, got {}",
            d + 1,
            sites.len()
        )));
    }
    if let Some(s) = sites.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: s.dim(),
        });
    }
    let orient = orientation(sites);
    let edge_scale = sites[1..]
        .iter()
        .map(|s| s.dist(&sites[0]))
        .fold(0.0, f64::max);
    if edge_scale == 0.0 || orient.abs() <= eps * edge_scale.powi(d as i32) {
        return Err(Error::DegenerateSites);
    }
    let mut scale = 0.0f64;
    let lifted: Vec<Vec<f64>> = sites
        .iter()
        .map(|s| {
            let mut row = s.sub(q);
            let n2 = linalg::dot(&row, &row);
            scale = scale.max(n2);
            row.push(n2);
            row
        })
        .collect();
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    let power = linalg::det(lifted) / (sign * orient);
    Ok(if power.abs() <= eps * scale {
        BallSign::On
    } else if power > 0.0 {
        BallSign::Inside
    } else {
        BallSign::Outside
    })
}

/// Smallest ball with all `points` on its boundary; its center lies in the
/// affine hull of the points.
pub fn circumball(points: &[Point], eps: f64) -> Result<Ball> {
    let base = points.first().ok_or(Error::EmptyInput)?;
    let d = base.dim();
    if points.len() > d + 1 {
        return Err(Error::DegenerateSites);
    }
    if points.len() == 1 {
        return Ok(Ball::new(base.clone(), 0.0));
    }
    if !affinely_independent(points, eps) {
        return Err(Error::DegenerateSites);
    }
    let vs: Vec<Vec<f64>> = points[1..].iter().map(|p| p.sub(base)).collect();
    let k = vs.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| 2.0 * linalg::dot(&vs[i], &vs[j])).collect())
        .collect();
    let rhs: Vec<f64> = vs.iter().map(|v| linalg::dot(v, v)).collect();
    let lambda = linalg::solve(gram, rhs, 1e-14).ok_or(Error::DegenerateSites)?;
    let mut c = base.coords().to_vec();
    for (l, v) in lambda.iter().zip(&vs) {
        for (a, b) in c.iter_mut().zip(v) {
            *a += l * b;
        }
    }
    let center = Point::new(c);
    let radius = center.dist(base);
    Ok(Ball::new(center, radius))
}

/// Closest point on the sphere to `p`. At the center every sphere point is
/// closest; that case is reported as `AtCenter` (see [`project_to_sphere_or_axis`]).
pub fn project_to_sphere(p: &Point, s: &Sphere, eps: f64) -> Result<Point> {
    let v = p.sub(&s.center);
    let n = linalg::norm(&v);
    if n <= eps * s.radius {
        return Err(Error::AtCenter);
    }
    Ok(s.center.offset(&v, s.radius / n))
}

/// Like [`project_to_sphere`], but resolves the center tie to
/// `center + radius * e_1`.
pub fn project_to_sphere_or_axis(p: &Point, s: &Sphere, eps: f64) -> Point {
    project_to_sphere(p, s, eps).unwrap_or_else(|_| {
        let mut e1 = vec![0.0; s.dim()];
        e1[0] = 1.0;
        s.center.offset(&e1, s.radius)
    })
}

/// Barycentric coordinates of the orthogonal projection of `p` onto the
/// affine hull of `verts`, or `None` if the hull is degenerate.
fn project_affine(p: &Point, verts: &[&Point]) -> Option<(Vec<f64>, Point)> {
    let base = verts[0];
    if verts.len() == 1 {
        return Some((vec![1.0], base.clone()));
    }
    let vs: Vec<Vec<f64>> = verts[1..].iter().map(|v| v.sub(base)).collect();
    let w = p.sub(base);
    let k = vs.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| linalg::dot(&vs[i], &vs[j])).collect())
        .collect();
    let rhs: Vec<f64> = vs.iter().map(|v| linalg::dot(v, &w)).collect();
    let mu = linalg::solve(gram, rhs, 1e-13)?;
    let mut c = base.coords().to_vec();
    for (m, v) in mu.iter().zip(&vs) {
        for (a, b) in c.iter_mut().zip(v) {
            *a += m * b;
        }
    }
    let mut bary = Vec::with_capacity(k + 1);
    bary.push(1.0 - mu.iter().sum::<f64>());
    bary.extend(mu);
    Some((bary, Point::new(c)))
}

/// Closest point of the simplex to `p` (nn(p, f)). Enumerates the faces of
/// the simplex, which is cheap for the dimensions we support.
pub fn closest_point_on_simplex(p: &Point, f: &Simplex, eps: f64) -> Point {
    let verts = f.vertices();
    let m = verts.len();
    let mut best: Option<(f64, Point)> = None;
    for mask in 1u32..(1u32 << m) {
        let face: Vec<&Point> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| &verts[i]).collect();
        let Some((bary, q)) = project_affine(p, &face) else {
            continue;
        };
        if bary.iter().any(|&b| b < -eps) {
            continue;
        }
        let d2 = q.dist2(p);
        if best.as_ref().is_none_or(|(b, _)| d2 < *b) {
            best = Some((d2, q));
        }
    }
    // Vertices are always valid faces, so `best` is set.
    best.map(|(_, q)| q).unwrap_or_else(|| verts[0].clone())
}

/// Axis-aligned bounding box of a point set.
pub fn bounding_box(points: &[Point]) -> Option<(Vec<f64>, Vec<f64>)> {
    let first = points.first()?;
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for p in &points[1..] {
        for (i, c) in p.coords().iter().enumerate() {
            lo[i] = lo[i].min(*c);
            hi[i] = hi[i].max(*c);
        }
    }
    Some((lo, hi))
}

/// Diameter of the bounding box; a cheap stand-in for the point-set diameter.
pub fn spread(points: &[Point]) -> f64 {
    bounding_box(points).map_or(0.0, |(lo, hi)| dist2(&lo, &hi).sqrt())
}
