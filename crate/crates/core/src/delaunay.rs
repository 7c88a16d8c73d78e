//! Planar Delaunay triangulation with input-index bookkeeping.

use spade::handles::FixedVertexHandle;
use spade::{DelaunayTriangulation, Point2, Triangulation as _};

use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    /// Counter-clockwise triangles of input indices.
    pub triangles: Vec<[usize; 3]>,
    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Sorted Delaunay neighbors of every input point.
    pub neighbors: Vec<Vec<usize>>,
    /// Edges on the convex hull, `(i, j)` with `i < j`, sorted.
    pub hull_edges: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn is_hull_edge(&self, i: usize, j: usize) -> bool {
        let e = if i < j { (i, j) } else { (j, i) };
        self.hull_edges.binary_search(&e).is_ok()
    }
}

fn to_spade(p: &Point) -> Result<Point2<f64>> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.dim() });
    }
    Ok(Point2::new(p.coords()[0], p.coords()[1]))
}

/// Delaunay triangulation of planar points in general position. Fails with
/// `Degenerate` on fewer than three points, duplicates, or an all-collinear
/// input; cocircular points are triangulated consistently.
pub fn delaunay_2d(points: &[Point]) -> Result<Triangulation> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Degenerate(format!("{n} points cannot be triangulated")));
    }
    let mut dt: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut index_of: Vec<usize> = Vec::with_capacity(n);
    for (i, p) in points.iter().enumerate() {
        let h = dt
            .insert(to_spade(p)?)
            .map_err(|e| Error::Degenerate(format!("point {i}: {e:?}")))?;
        if h.index() != index_of.len() {
            return Err(Error::Degenerate(format!("point {i} duplicates point {}", index_of[h.index()])));
        }
        index_of.push(i);
    }
    if dt.num_inner_faces() == 0 {
        return Err(Error::Degenerate("all points are collinear".into()));
    }
    let idx = |h: FixedVertexHandle| index_of[h.index()];
    let triangles = dt
        .inner_faces()
        .map(|f| {
            let [a, b, c] = f.vertices();
            [idx(a.fix()), idx(b.fix()), idx(c.fix())]
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = dt
        .undirected_edges()
        .map(|e| {
            let [a, b] = e.vertices();
            let (a, b) = (idx(a.fix()), idx(b.fix()));
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut neighbors = vec![Vec::new(); n];
    for &(a, b) in &edges {
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for nb in &mut neighbors {
        nb.sort_unstable();
    }
    let mut hull_edges: Vec<(usize, usize)> = dt
        .convex_hull()
        .map(|e| {
            let [a, b] = e.vertices();
            let (a, b) = (idx(a.fix()), idx(b.fix()));
            (a.min(b), a.max(b))
        })
        .collect();
    hull_edges.sort_unstable();
    Ok(Triangulation {
        triangles,
        edges,
        neighbors,
        hull_edges,
    })
}
