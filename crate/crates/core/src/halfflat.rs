//! Spans of features, halfflats induced by guards, and shells.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Feature;
use crate::geom::{circumball, Point};
use crate::linalg::{dot, norm, orthogonal_complement, solve};
use crate::lp::{lp_maximize, LinearConstraintSystem, LpOutcome};

const EPS: f64 = 1e-9;

/// Affine flat `anchor + span(basis)` with an orthonormal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flat {
    pub anchor: Point,
    pub basis: Vec<Vec<f64>>,
}

impl Flat {
    /// The span of `f`: all points equidistant to its sites.
    pub fn span_of(f: &Feature) -> Result<Flat> {
        let sites = &f.site_points;
        let d = sites[0].dim();
        let anchor = circumball(sites, 1e-14)?.center;
        let dirs: Vec<Vec<f64>> = sites[1..].iter().map(|s| s.sub(&sites[0])).collect();
        let basis = orthogonal_complement(&dirs, d, 1e-12);
        if basis.len() != d + 1 - sites.len() {
            return Err(Error::DegenerateSites);
        }
        Ok(Flat { anchor, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the projection of `x` in the flat's basis.
    pub fn coords_of(&self, x: &Point) -> Vec<f64> {
        let v = x.sub(&self.anchor);
        self.basis.iter().map(|b| dot(b, &v)).collect()
    }

    pub fn point_at(&self, y: &[f64]) -> Point {
        let mut c = self.anchor.coords().to_vec();
        for (t, b) in y.iter().zip(&self.basis) {
            for (a, e) in c.iter_mut().zip(b) {
                *a += t * e;
            }
        }
        Point::new(c)
    }

    pub fn distance(&self, x: &Point) -> f64 {
        x.dist(&self.point_at(&self.coords_of(x)))
    }

    fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.anchor.dim()];
        for (t, b) in y.iter().zip(&self.basis) {
            for (a, e) in v.iter_mut().zip(b) {
                *a += t * e;
            }
        }
        v
    }
}

/// Intersection of a flat with the halfspace `<x - anchor, normal> <= offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfflat {
    pub flat: Flat,
    /// Unit vector in the direction space of the flat.
    pub in_flat_normal: Vec<f64>,
    pub offset: f64,
}

impl Halfflat {
    /// Closed membership with absolute tolerance `eps`.
    pub fn contains(&self, x: &Point, eps: f64) -> bool {
        if self.flat.distance(x) > eps {
            return false;
        }
        let v = x.sub(&self.flat.anchor);
        dot(&v, &self.in_flat_normal) <= self.offset + eps
    }

    fn condition(&self) -> Condition {
        let w: Vec<f64> = self.flat.basis.iter().map(|b| dot(b, &self.in_flat_normal)).collect();
        Condition::Half { w, r: self.offset }
    }
}

/// A closed halfspace `w . y <= r` of flat coordinates, possibly trivial.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Condition {
    Full,
    Empty,
    Half { w: Vec<f64>, r: f64 },
}

/// Points of the span of `f` at least as close to `p` as to the sites, in
/// flat coordinates. `|x - p|^2 <= |x - s|^2` is linear in `x`.
pub(crate) fn induced_condition(p: &Point, flat: &Flat, site: &Point) -> Condition {
    let sp = site.sub(p);
    let w: Vec<f64> = flat.basis.iter().map(|b| dot(b, &sp)).collect();
    let r = 0.5 * (site.dist2(&flat.anchor) - p.dist2(&flat.anchor));
    let wn = norm(&w);
    if wn <= 1e-12 * norm(&sp).max(f64::MIN_POSITIVE) {
        return if r >= 0.0 { Condition::Full } else { Condition::Empty };
    }
    Condition::Half {
        w: w.iter().map(|x| x / wn).collect(),
        r: r / wn,
    }
}

/// The set of balls of the pencil of `span(f)` that contain `p`, as a halfflat
/// of centers. Fails with `DegenerateGuard` when that set is empty or the
/// whole span, which happens when `p` is a site or equidistant along the span.
pub fn induced_halfflat(p: &Point, f: &Feature) -> Result<Halfflat> {
    let flat = Flat::span_of(f)?;
    if p.dim() != flat.anchor.dim() {
        return Err(Error::DimensionMismatch {
            expected: flat.anchor.dim(),
            got: p.dim(),
        });
    }
    match induced_condition(p, &flat, &f.site_points[0]) {
        Condition::Half { w, r } => Ok(Halfflat {
            in_flat_normal: flat.lift(&w),
            offset: r,
            flat,
        }),
        _ => Err(Error::DegenerateGuard),
    }
}

/// The `k + 1` halfflats beyond the facets of `f` inside its span. Each is
/// closed, contains its facet, and misses the interior of `f`.
pub fn shell(f: &Feature) -> Result<Vec<Halfflat>> {
    if f.dim == 0 {
        return Err(Error::InvalidParameter("a vertex feature has no shell".into()));
    }
    let flat = Flat::span_of(f)?;
    let k = flat.dim();
    let ys: Vec<Vec<f64>> = f.simplex.vertices().iter().map(|v| flat.coords_of(v)).collect();
    if ys.len() != k + 1 {
        return Err(Error::DegenerateSites);
    }
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let facet: Vec<usize> = (0..=k).filter(|&j| j != i).collect();
        let base = &ys[facet[0]];
        let edges: Vec<Vec<f64>> = facet[1..]
            .iter()
            .map(|&j| ys[j].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let mut u = orthogonal_complement(&edges, k, 1e-12)
            .into_iter()
            .next()
            .ok_or(Error::DegenerateSites)?;
        let toward: Vec<f64> = ys[i].iter().zip(base).map(|(a, b)| a - b).collect();
        let h = dot(&u, &toward);
        if h.abs() <= EPS * norm(&toward) {
            return Err(Error::DegenerateSites);
        }
        if h < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        // `u` points toward the opposite vertex; beyond the facet is `u . y <= u . base`.
        out.push(Halfflat {
            in_flat_normal: flat.lift(&u),
            offset: dot(&u, base),
            flat: flat.clone(),
        });
    }
    Ok(out)
}

pub(crate) fn shell_conditions(f: &Feature) -> Result<Vec<Condition>> {
    Ok(shell(f)?.iter().map(Halfflat::condition).collect())
}

/// True if the closed halfspaces cover all of `R^k`, i.e. the open
/// complements `w . y > r` have an empty intersection. For `k + 1` halfspaces
/// with normals in general position this is the vertex test: the normals are
/// positively dependent and each vertex cut out by `k` of the boundaries lies
/// in the remaining halfspace. Degenerate normals go through an LP.
pub(crate) fn covers(conds: &[&Condition], k: usize, tol: f64) -> Result<bool> {
    if conds.iter().any(|c| matches!(c, Condition::Full)) {
        return Ok(true);
    }
    let halves: Vec<(&[f64], f64)> = conds
        .iter()
        .filter_map(|c| match c {
            Condition::Half { w, r } => Some((w.as_slice(), *r)),
            _ => None,
        })
        .collect();
    if halves.is_empty() {
        return Ok(false);
    }
    if k == 0 {
        return Ok(false);
    }
    if halves.len() == k + 1 {
        if let Some(v) = vertex_test(&halves, k, tol) {
            return Ok(v);
        }
    }
    lp_cover_test(&halves, k, tol)
}

fn vertex_test(halves: &[(&[f64], f64)], k: usize, tol: f64) -> Option<bool> {
    let mut lambda = Vec::with_capacity(k + 1);
    let mut vertices = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let rows: Vec<usize> = (0..=k).filter(|&j| j != i).collect();
        let a: Vec<Vec<f64>> = rows.iter().map(|&j| halves[j].0.to_vec()).collect();
        let cols: Vec<Vec<f64>> = (0..k).map(|c| rows.iter().map(|&j| halves[j].0[c]).collect()).collect();
        let minor = crate::linalg::det(cols);
        if minor.abs() <= 1e-10 {
            return None;
        }
        lambda.push(if i % 2 == 0 { minor } else { -minor });
        let b: Vec<f64> = rows.iter().map(|&j| halves[j].1).collect();
        vertices.push(solve(a, b, 1e-12)?);
    }
    let positive = lambda.iter().all(|&l| l > 0.0) || lambda.iter().all(|&l| l < 0.0);
    if !positive {
        return Some(false);
    }
    Some((0..=k).all(|i| dot(halves[i].0, &vertices[i]) <= halves[i].1 + tol))
}

fn lp_cover_test(halves: &[(&[f64], f64)], k: usize, tol: f64) -> Result<bool> {
    // maximize t subject to w . y - t >= r, t <= 1
    let mut sys = LinearConstraintSystem::new(k + 1);
    for (w, r) in halves {
        let mut row: Vec<f64> = w.to_vec();
        row.push(-1.0);
        sys.add_ge(row, *r)?;
    }
    let mut cap = vec![0.0; k + 1];
    cap[k] = 1.0;
    sys.add_le(cap.clone(), 1.0)?;
    match lp_maximize(&sys, &cap, 1e-12)? {
        LpOutcome::Optimal(x) => Ok(x[k] <= tol),
        LpOutcome::Unbounded => Ok(false),
        LpOutcome::Infeasible => Ok(true),
    }
}
