//! Planar Voronoi features: vertices, clipped edges and triangulated cells.

use serde::{Deserialize, Serialize};

use crate::delaunay::delaunay_2d;
use crate::error::{Error, Result};
use crate::geom::{circumball, closest_point_on_simplex, spread, Ball, Point, Simplex};
use crate::instance::{check_points, LabeledPointSet};

const EPS: f64 = 1e-9;

/// Half-width of the default clip box in units of the input diameter.
pub const CLIP_FACTOR: f64 = 8.0;

/// A k-simplex of the triangulated Voronoi diagram together with the
/// `d - k + 1` sites equidistant to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub dim: usize,
    /// Sorted indices of the sites.
    pub sites: Vec<usize>,
    pub site_points: Vec<Point>,
    pub simplex: Simplex,
    /// True if the face was unbounded and cut by the clip box.
    pub clipped: bool,
}

impl Feature {
    /// Ball centered at `x` through the sites.
    pub fn pencil_ball_at(&self, x: &Point) -> Ball {
        let r = x.dist(&self.site_points[0]);
        Ball::new(x.clone(), r)
    }
}

/// Bad features of a labeled instance: sites in both classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadBallFamily {
    pub features: Vec<Feature>,
}

impl BadBallFamily {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Axis-aligned box that bounds every feature simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClipBox {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl ClipBox {
    /// Box of half-width `CLIP_FACTOR * diameter` around the centroid.
    pub fn around(points: &[Point]) -> ClipBox {
        let n = points.len().max(1) as f64;
        let mut c = [0.0; 2];
        for p in points {
            c[0] += p.coords()[0] / n;
            c[1] += p.coords()[1] / n;
        }
        let diam = spread(points);
        let h = CLIP_FACTOR * if diam > 0.0 { diam } else { 1.0 };
        ClipBox {
            lo: [c[0] - h, c[1] - h],
            hi: [c[0] + h, c[1] + h],
        }
    }

    /// Grows the box symmetrically until it contains `p` with some margin.
    fn enclose(&mut self, p: &Point) {
        for a in 0..2 {
            let mid = 0.5 * (self.lo[a] + self.hi[a]);
            let half = 0.5 * (self.hi[a] - self.lo[a]);
            let need = 1.25 * (p.coords()[a] - mid).abs();
            if need > half {
                self.lo[a] = mid - need;
                self.hi[a] = mid + need;
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..2).all(|a| (self.lo[a]..=self.hi[a]).contains(&p.coords()[a]))
    }

    fn scale(&self) -> f64 {
        (self.hi[0] - self.lo[0]).max(self.hi[1] - self.lo[1])
    }

    /// Halfplanes `n . x <= c` bounding the box.
    fn halfplanes(&self) -> [([f64; 2], f64); 4] {
        [
            ([1.0, 0.0], self.hi[0]),
            ([-1.0, 0.0], -self.lo[0]),
            ([0.0, 1.0], self.hi[1]),
            ([0.0, -1.0], -self.lo[1]),
        ]
    }
}

fn xy(p: &Point) -> [f64; 2] {
    [p.coords()[0], p.coords()[1]]
}

fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Halfplane `n . x <= c` of points at least as close to `a` as to `q`.
fn bisector_halfplane(a: [f64; 2], q: [f64; 2]) -> ([f64; 2], f64) {
    let n = [q[0] - a[0], q[1] - a[1]];
    (n, 0.5 * (dot2(q, q) - dot2(a, a)))
}

/// Voronoi edge `mid + t * dir`, `t0 <= t <= t1`; ends may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct EdgeSpan {
    pub sites: [usize; 2],
    pub mid: [f64; 2],
    pub dir: [f64; 2],
    pub t0: f64,
    pub t1: f64,
}

impl EdgeSpan {
    pub fn at(&self, t: f64) -> Point {
        Point::new(vec![self.mid[0] + t * self.dir[0], self.mid[1] + t * self.dir[1]])
    }
}

/// Voronoi vertex with its empty circumball.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct VertexSpan {
    pub sites: [usize; 3],
    pub ball: Ball,
}

/// Adjacency of the planar Voronoi diagram of a point set.
pub(crate) struct Diagram<'a> {
    points: &'a [Point],
    neighbors: Vec<Vec<usize>>,
    triangles: Vec<[usize; 3]>,
}

impl<'a> Diagram<'a> {
    pub(crate) fn new(points: &'a [Point]) -> Result<Self> {
        let d = check_points(points)?;
        if d != 2 {
            return Err(Error::UnsupportedDimension(d));
        }
        let n = points.len();
        let diam = spread(points);
        let collinear = n < 3 || {
            let (i, j) = farthest_axis_pair(points);
            let u = points[j].sub(&points[i]);
            points.iter().all(|p| {
                let w = p.sub(&points[i]);
                (u[0] * w[1] - u[1] * w[0]).abs() <= EPS * diam * diam
            })
        };
        if !collinear {
            let t = delaunay_2d(points)?;
            return Ok(Diagram {
                points,
                neighbors: t.neighbors,
                triangles: t.triangles,
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        if n >= 2 {
            let (i, j) = farthest_axis_pair(points);
            let u = points[j].sub(&points[i]);
            let key = |k: usize| dot2([u[0], u[1]], xy(&points[k]));
            order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
            for w in order.windows(2) {
                if points[w[0]].dist(&points[w[1]]) <= EPS * diam {
                    return Err(Error::Degenerate(format!("point {} duplicates point {}", w[1], w[0])));
                }
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for w in order.windows(2) {
            neighbors[w[0]].push(w[1]);
            neighbors[w[1]].push(w[0]);
        }
        neighbors.iter_mut().for_each(|v| v.sort_unstable());
        Ok(Diagram {
            points,
            neighbors,
            triangles: Vec::new(),
        })
    }

    /// Default clip box: `ClipBox::around` grown to hold every Voronoi vertex.
    pub(crate) fn default_box(&self) -> ClipBox {
        let mut b = ClipBox::around(self.points);
        for t in &self.triangles {
            if let Ok(c) = self.circumcenter(t) {
                b.enclose(&c);
            }
        }
        b
    }

    fn circumcenter(&self, t: &[usize; 3]) -> Result<Point> {
        let s: Vec<Point> = t.iter().map(|&i| self.points[i].clone()).collect();
        Ok(circumball(&s, 1e-14)?.center)
    }

    fn cell_constraints(&self, a: usize, skip: Option<usize>) -> Vec<([f64; 2], f64)> {
        let pa = xy(&self.points[a]);
        self.neighbors[a]
            .iter()
            .filter(|&&q| Some(q) != skip)
            .map(|&q| bisector_halfplane(pa, xy(&self.points[q])))
            .collect()
    }

    fn vertex_features(&self, clip: &ClipBox, keep: &dyn Fn(&[usize]) -> bool, out: &mut Vec<Feature>) {
        for t in &self.triangles {
            let mut sites = t.to_vec();
            sites.sort_unstable();
            if !keep(&sites) {
                continue;
            }
            let Ok(c) = self.circumcenter(t) else { continue };
            if !clip.contains(&c) {
                continue;
            }
            out.push(Feature {
                dim: 0,
                site_points: sites.iter().map(|&i| self.points[i].clone()).collect(),
                sites,
                simplex: Simplex::new_unchecked(vec![c]),
                clipped: false,
            });
        }
    }

    /// Voronoi edge of neighbors `a` and `b`, optionally cut by `clip`, with
    /// flags telling whether each end was set by the box.
    fn edge_span(&self, a: usize, b: usize, clip: Option<&ClipBox>) -> Option<(EdgeSpan, bool, bool)> {
        let (pa, pb) = (xy(&self.points[a]), xy(&self.points[b]));
        let mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
        let len = (pb[0] - pa[0]).hypot(pb[1] - pa[1]);
        let dir = [-(pb[1] - pa[1]) / len, (pb[0] - pa[0]) / len];
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        let (mut box0, mut box1) = (false, false);
        let cons = self.cell_constraints(a, Some(b));
        let boxes = clip.map(|c| c.halfplanes());
        let box_iter = boxes.iter().flat_map(|b| b.iter());
        for (idx, (n, c)) in cons.iter().chain(box_iter).enumerate() {
            let is_box = idx >= cons.len();
            let alpha = dot2(*n, dir);
            let beta = c - dot2(*n, mid);
            if alpha.abs() <= 1e-15 * dot2(*n, *n).sqrt() {
                if beta < 0.0 {
                    return None;
                }
                continue;
            }
            let t = beta / alpha;
            if alpha > 0.0 && t < t1 {
                t1 = t;
                box1 = is_box;
            } else if alpha < 0.0 && t > t0 {
                t0 = t;
                box0 = is_box;
            }
        }
        let tol = EPS * clip.map_or(len, |c| c.scale());
        if t1 - t0 <= tol {
            return None;
        }
        Some((EdgeSpan { sites: [a, b], mid, dir, t0, t1 }, box0, box1))
    }

    fn edge_features(&self, clip: &ClipBox, keep: &dyn Fn(&[usize]) -> bool, out: &mut Vec<Feature>) {
        for a in 0..self.points.len() {
            for &b in &self.neighbors[a] {
                if b < a || !keep(&[a, b]) {
                    continue;
                }
                let Some((e, box0, box1)) = self.edge_span(a, b, Some(clip)) else { continue };
                let mut ends = [e.at(e.t0), e.at(e.t1)];
                ends.sort_by(|p, q| p.lex_cmp(q));
                out.push(Feature {
                    dim: 1,
                    sites: vec![a, b],
                    site_points: vec![self.points[a].clone(), self.points[b].clone()],
                    simplex: Simplex::new_unchecked(ends.to_vec()),
                    clipped: box0 || box1,
                });
            }
        }
    }

    /// Unclipped bad edges and vertices under the `keep` filter.
    pub(crate) fn spans(&self, keep: &dyn Fn(&[usize]) -> bool) -> (Vec<EdgeSpan>, Vec<VertexSpan>) {
        let mut edges = Vec::new();
        for a in 0..self.points.len() {
            for &b in &self.neighbors[a] {
                if b > a && keep(&[a, b]) {
                    edges.extend(self.edge_span(a, b, None).map(|e| e.0));
                }
            }
        }
        let mut vertices = Vec::new();
        for t in &self.triangles {
            let mut sites = *t;
            sites.sort_unstable();
            if keep(&sites) {
                if let Ok(c) = self.circumcenter(t) {
                    let radius = c.dist(&self.points[t[0]]);
                    vertices.push(VertexSpan { sites, ball: Ball::new(c, radius) });
                }
            }
        }
        (edges, vertices)
    }

    /// Voronoi cell of `a` intersected with the clip box, counter-clockwise.
    pub(crate) fn cell_polygon(&self, a: usize, clip: &ClipBox) -> Vec<[f64; 2]> {
        let mut poly = vec![clip.lo, [clip.hi[0], clip.lo[1]], clip.hi, [clip.lo[0], clip.hi[1]]];
        for (n, c) in self.cell_constraints(a, None) {
            poly = clip_polygon(&poly, n, c);
            if poly.is_empty() {
                break;
            }
        }
        let tol = EPS * clip.scale();
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
        for v in poly {
            if out.last().is_none_or(|w| (v[0] - w[0]).hypot(v[1] - w[1]) > tol) {
                out.push(v);
            }
        }
        while out.len() > 1 {
            let (f, l) = (out[0], out[out.len() - 1]);
            if (f[0] - l[0]).hypot(f[1] - l[1]) > tol {
                break;
            }
            out.pop();
        }
        out
    }

    fn cell_features(&self, clip: &ClipBox, keep: &dyn Fn(&[usize]) -> bool, out: &mut Vec<Feature>) {
        let tol = EPS * clip.scale();
        for a in 0..self.points.len() {
            if !keep(&[a]) {
                continue;
            }
            let poly = self.cell_polygon(a, clip);
            if poly.len() < 3 {
                continue;
            }
            let on_box = |v: &[f64; 2]| (0..2).any(|i| (v[i] - clip.lo[i]).abs() <= tol || (v[i] - clip.hi[i]).abs() <= tol);
            let clipped = poly.iter().any(on_box);
            let start = (0..poly.len())
                .min_by(|&i, &j| poly[i][0].total_cmp(&poly[j][0]).then(poly[i][1].total_cmp(&poly[j][1])))
                .unwrap_or(0);
            let m = poly.len();
            let v0 = poly[start];
            for i in 1..m - 1 {
                let (v1, v2) = (poly[(start + i) % m], poly[(start + i + 1) % m]);
                let area = (v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0]);
                if area.abs() <= tol * clip.scale() {
                    continue;
                }
                out.push(Feature {
                    dim: 2,
                    sites: vec![a],
                    site_points: vec![self.points[a].clone()],
                    simplex: Simplex::new_unchecked(
                        [v0, v1, v2].iter().map(|v| Point::new(v.to_vec())).collect(),
                    ),
                    clipped,
                });
            }
        }
    }

    pub(crate) fn features(&self, clip: &ClipBox, keep: &dyn Fn(&[usize]) -> bool, cells: bool) -> Vec<Feature> {
        let mut out = Vec::new();
        self.vertex_features(clip, keep, &mut out);
        self.edge_features(clip, keep, &mut out);
        if cells {
            self.cell_features(clip, keep, &mut out);
        }
        out
    }
}

/// Indices of the extreme points along the axis of largest extent.
fn farthest_axis_pair(points: &[Point]) -> (usize, usize) {
    let mut best = (0, 0, -1.0);
    for a in 0..2 {
        let key = |i: usize| points[i].coords()[a];
        let lo = (0..points.len()).min_by(|&i, &j| key(i).total_cmp(&key(j))).unwrap_or(0);
        let hi = (0..points.len()).max_by(|&i, &j| key(i).total_cmp(&key(j))).unwrap_or(0);
        if key(hi) - key(lo) > best.2 {
            best = (lo, hi, key(hi) - key(lo));
        }
    }
    (best.0, best.1)
}

/// Sutherland-Hodgman clip of a convex polygon by `n . x <= c`.
fn clip_polygon(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (dot2(n, p) - c, dot2(n, q) - c);
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Default clip box used by [`extract_features`].
pub fn default_clip_box(points: &[Point]) -> Result<ClipBox> {
    Ok(Diagram::new(points)?.default_box())
}

/// All features of the planar Voronoi diagram, clipped to the default box.
/// Order: vertices, then edges, then cell triangles.
pub fn extract_features(points: &[Point]) -> Result<Vec<Feature>> {
    let diagram = Diagram::new(points)?;
    let clip = diagram.default_box();
    Ok(diagram.features(&clip, &|_| true, true))
}

/// All features clipped to `clip`; vertices outside the box are dropped.
pub fn extract_features_in(points: &[Point], clip: &ClipBox) -> Result<Vec<Feature>> {
    Ok(Diagram::new(points)?.features(clip, &|_| true, true))
}

/// Bad features of `inst` in the diagram of `P ∪ guards`. Guards belong to
/// neither class, so only features with sites in `P1` and `P2` qualify.
pub fn bad_features(inst: &LabeledPointSet, guards: &[Point]) -> Result<BadBallFamily> {
    bad_features_with_box(inst, guards, None)
}

/// Bad features clipped to `clip`, or to the default box when `None`.
pub fn bad_features_with_box(
    inst: &LabeledPointSet,
    guards: &[Point],
    clip: Option<&ClipBox>,
) -> Result<BadBallFamily> {
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension(inst.dim()));
    }
    if inst.is_trivial() {
        return Ok(BadBallFamily { features: Vec::new() });
    }
    let all = with_guards(inst, guards);
    let diagram = Diagram::new(&all)?;
    let clip = clip.copied().unwrap_or_else(|| diagram.default_box());
    Ok(BadBallFamily {
        features: diagram.features(&clip, &|s: &[usize]| is_bad(inst, s), false),
    })
}

/// Unclipped bad edges and vertices of `inst` in `Vor(P ∪ guards)`.
pub(crate) fn bad_spans(inst: &LabeledPointSet, guards: &[Point]) -> Result<(Vec<EdgeSpan>, Vec<VertexSpan>)> {
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension(inst.dim()));
    }
    if inst.is_trivial() {
        return Ok((Vec::new(), Vec::new()));
    }
    let all = with_guards(inst, guards);
    Ok(Diagram::new(&all)?.spans(&|s: &[usize]| is_bad(inst, s)))
}

fn with_guards(inst: &LabeledPointSet, guards: &[Point]) -> Vec<Point> {
    let mut all = inst.points().to_vec();
    all.extend_from_slice(guards);
    all
}

/// True if the sites include points of both classes; indices past the
/// instance are neutral guards.
fn is_bad(inst: &LabeledPointSet, sites: &[usize]) -> bool {
    let mut seen = [false; 2];
    for &s in sites.iter().filter(|&&s| s < inst.len()) {
        seen[inst.side(s).label() as usize - 1] = true;
    }
    seen[0] && seen[1]
}

/// Smallest ball of the pencil of `f`: centered at the point of the feature
/// nearest to its sites.
pub fn pencil_min_ball(f: &Feature) -> Ball {
    let c = closest_point_on_simplex(&f.site_points[0], &f.simplex, EPS);
    f.pencil_ball_at(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, random_sides, PointDistribution};
    use crate::instance::Side;
    use crate::verify::bad_pairs_lp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(vec![x, y])
    }

    fn check_equidistant(pts: &[Point], f: &Feature) {
        for v in f.simplex.vertices() {
            let r = v.dist(&pts[f.sites[0]]);
            let tol = 1e-7 * (1.0 + r);
            for &s in &f.sites {
                assert!((v.dist(&pts[s]) - r).abs() <= tol, "{f:?}");
            }
            for q in pts {
                assert!(v.dist(q) >= r - tol, "{f:?}");
            }
        }
    }

    #[test]
    fn triangle_has_one_vertex() {
        let pts = vec![p(0.0, 0.0), p(1.0, 0.0), p(0.2, 0.9)];
        let fs = extract_features(&pts).unwrap();
        let verts: Vec<&Feature> = fs.iter().filter(|f| f.dim == 0).collect();
        assert_eq!(verts.len(), 1);
        assert_eq!(verts[0].sites, vec![0, 1, 2]);
        let c = circumball(&pts, 1e-12).unwrap().center;
        assert!(verts[0].simplex.vertices()[0].dist(&c) < 1e-12);
        assert_eq!(fs.iter().filter(|f| f.dim == 1).count(), 3);
        assert!(fs.iter().filter(|f| f.dim == 1).all(|f| f.clipped));
    }

    #[test]
    fn two_points_single_bisector() {
        let pts = vec![p(0.0, 0.0), p(1.0, 0.0)];
        let fs = extract_features(&pts).unwrap();
        let edges: Vec<&Feature> = fs.iter().filter(|f| f.dim == 1).collect();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].sites, vec![0, 1]);
        assert!(edges[0].clipped);
        assert!(edges[0].simplex.vertices().iter().all(|v| (v.coords()[0] - 0.5).abs() < 1e-12));
        assert_eq!(fs.iter().filter(|f| f.dim == 0).count(), 0);
        assert_eq!(fs.iter().filter(|f| f.dim == 2 && f.sites == [0]).count(), 2);
    }

    #[test]
    fn random_features_are_equidistant() {
        for seed in 0..3 {
            let pts = generate(PointDistribution::Uniform, 100, 2, seed).unwrap();
            let fs = extract_features(&pts).unwrap();
            for f in &fs {
                assert_eq!(f.sites.len(), 3 - f.dim);
                check_equidistant(&pts, f);
            }
            let t = delaunay_2d(&pts).unwrap();
            assert_eq!(fs.iter().filter(|f| f.dim == 0).count(), t.triangles.len());
            assert_eq!(fs.iter().filter(|f| f.dim == 1).count(), t.edges.len());
        }
    }

    #[test]
    fn cells_tile_the_box() {
        let pts = generate(PointDistribution::Clustered, 60, 2, 5).unwrap();
        let clip = ClipBox::around(&pts);
        let fs = extract_features_in(&pts, &clip).unwrap();
        let area: f64 = fs
            .iter()
            .filter(|f| f.dim == 2)
            .map(|f| {
                let v = f.simplex.vertices();
                let (a, b, c) = (xy(&v[0]), xy(&v[1]), xy(&v[2]));
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs()
            })
            .sum();
        let box_area = (clip.hi[0] - clip.lo[0]) * (clip.hi[1] - clip.lo[1]);
        assert!((area - box_area).abs() <= 1e-9 * box_area);
        for f in fs.iter().filter(|f| f.dim == 2) {
            check_equidistant(&pts, f);
        }
    }

    #[test]
    fn collinear_inputs_use_strips() {
        let pts = vec![p(0.0, 0.0), p(2.0, 2.0), p(1.0, 1.0)];
        let fs = extract_features(&pts).unwrap();
        let edges: Vec<Vec<usize>> = fs.iter().filter(|f| f.dim == 1).map(|f| f.sites.clone()).collect();
        assert_eq!(edges, vec![vec![0, 2], vec![1, 2]]);
        for f in &fs {
            check_equidistant(&pts, f);
        }
        let dup = vec![p(0.0, 0.0), p(1.0, 1.0), p(0.0, 0.0)];
        assert!(matches!(extract_features(&dup), Err(Error::Degenerate(_))));
    }

    #[test]
    fn bad_features_examples() {
        let inst = LabeledPointSet::from_partition(vec![p(0.0, 0.0), p(1.0, 0.0)], &[0], &[1]).unwrap();
        let bad = bad_features(&inst, &[]).unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad.features[0].sites, vec![0, 1]);
        let same = LabeledPointSet::new(vec![p(0.0, 0.0), p(1.0, 0.0)], vec![Side::One; 2]).unwrap();
        assert!(bad_features(&same, &[]).unwrap().is_empty());
        let guarded = bad_features(&inst, &[p(0.5, 0.0)]).unwrap();
        assert!(guarded.is_empty());
    }

    #[test]
    fn bad_features_agree_with_lp_pairs() {
        let square = vec![p(0.0, 0.0), p(1.0, 0.001), p(1.002, 1.0), p(0.0, 1.0)];
        let inst = LabeledPointSet::from_partition(square, &[0, 2], &[1, 3]).unwrap();
        assert!(!bad_features(&inst, &[]).unwrap().is_empty());
        for seed in 0..100 {
            let pts = generate(PointDistribution::Uniform, 25, 2, seed).unwrap();
            let inst = LabeledPointSet::new(pts, random_sides(25, seed + 1000)).unwrap();
            let mut from_features: Vec<(usize, usize)> = bad_features(&inst, &[])
                .unwrap()
                .features
                .iter()
                .flat_map(|f| {
                    let s = f.sites.clone();
                    let mut pairs = Vec::new();
                    for i in 0..s.len() {
                        for j in i + 1..s.len() {
                            if inst.side(s[i]) != inst.side(s[j]) {
                                pairs.push((s[i], s[j]));
                            }
                        }
                    }
                    pairs
                })
                .collect();
            from_features.sort_unstable();
            from_features.dedup();
            let mut from_lp: Vec<(usize, usize)> = bad_pairs_lp(&inst)
                .unwrap()
                .iter()
                .map(|b| (b.p1.min(b.p2), b.p1.max(b.p2)))
                .collect();
            from_lp.sort_unstable();
            assert_eq!(from_features, from_lp, "seed {seed}");
        }
    }

    #[test]
    fn pencil_min_ball_examples() {
        let f = Feature {
            dim: 1,
            sites: vec![0, 1],
            site_points: vec![p(0.0, 0.0), p(2.0, 0.0)],
            simplex: Simplex::new_unchecked(vec![p(1.0, -1.0), p(1.0, 5.0)]),
            clipped: false,
        };
        let b = pencil_min_ball(&f);
        assert!(b.center.dist(&p(1.0, 0.0)) < 1e-12 && (b.radius - 1.0).abs() < 1e-12);
        let tri = vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)];
        let v = extract_features(&tri).unwrap().into_iter().find(|f| f.dim == 0).unwrap();
        let b = pencil_min_ball(&v);
        assert!(b.center.dist(&p(0.5, 0.5)) < 1e-12);
        assert!(tri.iter().all(|q| (q.dist(&b.center) - b.radius).abs() < 1e-12));
    }

    #[test]
    fn pencil_min_ball_is_minimal_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts = generate(PointDistribution::Uniform, 80, 2, 2).unwrap();
        let edges: Vec<Feature> = extract_features(&pts).unwrap().into_iter().filter(|f| f.dim == 1).take(100).collect();
        assert_eq!(edges.len(), 100);
        for f in &edges {
            let b = pencil_min_ball(f);
            let v = f.simplex.vertices();
            for _ in 0..20 {
                let t: f64 = rng.random();
                let x = Point::new(vec![
                    v[0].coords()[0] + t * (v[1].coords()[0] - v[0].coords()[0]),
                    v[0].coords()[1] + t * (v[1].coords()[1] - v[0].coords()[1]),
                ]);
                assert!(b.radius <= f.pencil_ball_at(&x).radius + 1e-12);
            }
        }
    }
}
