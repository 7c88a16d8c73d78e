//! Static k-d tree over points of runtime dimension.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geom::Point;

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
struct Node {
    start: usize,
    end: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn new(points: &[Point]) -> Self {
        let dim = points.first().map_or(0, |p| p.dim());
        let coords: Vec<f64> = points.iter().flat_map(|p| p.coords().iter().copied()).collect();
        let mut tree = KdTree {
            dim,
            coords,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        if !points.is_empty() {
            tree.build(0, points.len());
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &i in &self.order[start..end] {
            for k in 0..d {
                let c = self.coords[i * d + k];
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            lo: lo.clone(),
            hi: hi.clone(),
            children: None,
        });
        if end - start > LEAF_SIZE {
            let axis = (0..d)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            let mid = (start + end) / 2;
            let coords = &self.coords;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                coords[a * d + axis].total_cmp(&coords[b * d + axis])
            });
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    fn box_dist2(&self, node: &Node, q: &[f64]) -> f64 {
        let mut s = 0.0;
        for ((&x, &lo), &hi) in q.iter().zip(&node.lo).zip(&node.hi).take(self.dim) {
            let v = if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            };
            s += v * v;
        }
        s
    }

    fn box_far_dist2(&self, node: &Node, q: &[f64]) -> f64 {
        let mut s = 0.0;
        for ((&x, &lo), &hi) in q.iter().zip(&node.lo).zip(&node.hi).take(self.dim) {
            let v = (x - lo).abs().max((x - hi).abs());
            s += v * v;
        }
        s
    }

    /// Nearest point to `q`; ties go to the smaller index.
    pub fn nearest(&self, q: &[f64]) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, f64::INFINITY);
        if self.nodes.is_empty() {
            return None;
        }
        self.nearest_rec(0, q, &mut best);
        Some(best)
    }

    fn nearest_rec(&self, id: usize, q: &[f64], best: &mut (usize, f64)) {
        let node = &self.nodes[id];
        if self.box_dist2(node, q) > best.1 {
            return;
        }
        match node.children {
            None => {
                for &i in &self.order[node.start..node.end] {
                    let d2 = crate::geom::dist2(self.point(i), q);
                    if d2 < best.1 || (d2 == best.1 && i < best.0) {
                        *best = (i, d2);
                    }
                }
            }
            Some((l, r)) => {
                let (a, b) = if self.box_dist2(&self.nodes[l], q) <= self.box_dist2(&self.nodes[r], q) {
                    (l, r)
                } else {
                    (r, l)
                };
                self.nearest_rec(a, q, best);
                self.nearest_rec(b, q, best);
            }
        }
    }

    /// The `k` nearest points, sorted by distance then index.
    pub fn k_nearest(&self, q: &[f64], k: usize) -> Vec<(usize, f64)> {
        let mut heap: BinaryHeap<HeapItem> = BinaryHeap::new();
        if k > 0 && !self.nodes.is_empty() {
            self.knn_rec(0, q, k, &mut heap);
        }
        let mut out: Vec<(usize, f64)> = heap.into_iter().map(|h| (h.idx, h.d2)).collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    fn knn_rec(&self, id: usize, q: &[f64], k: usize, heap: &mut BinaryHeap<HeapItem>) {
        let node = &self.nodes[id];
        if heap.len() == k && self.box_dist2(node, q) > heap.peek().unwrap().d2 {
            return;
        }
        match node.children {
            None => {
                for &i in &self.order[node.start..node.end] {
                    let item = HeapItem {
                        d2: crate::geom::dist2(self.point(i), q),
                        idx: i,
                    };
                    if heap.len() < k {
                        heap.push(item);
                    } else if item < *heap.peek().unwrap() {
                        heap.pop();
                        heap.push(item);
                    }
                }
            }
            Some((l, r)) => {
                let (a, b) = if self.box_dist2(&self.nodes[l], q) <= self.box_dist2(&self.nodes[r], q) {
                    (l, r)
                } else {
                    (r, l)
                };
                self.knn_rec(a, q, k, heap);
                self.knn_rec(b, q, k, heap);
            }
        }
    }

    /// Number of points with squared distance `< r2` from `q`, stopping
    /// early once `cap` is reached.
    pub fn count_within_strict(&self, q: &[f64], r2: f64, cap: usize) -> usize {
        self.count(q, r2, true, cap)
    }

    /// Number of points with squared distance `<= r2` from `q`, stopping
    /// early once `cap` is reached.
    pub fn count_within_closed(&self, q: &[f64], r2: f64, cap: usize) -> usize {
        self.count(q, r2, false, cap)
    }

    fn count(&self, q: &[f64], r2: f64, strict: bool, cap: usize) -> usize {
        let mut count = 0;
        if !self.nodes.is_empty() {
            self.count_rec(0, q, r2, strict, cap, &mut count);
        }
        count.min(cap)
    }

    fn count_rec(&self, id: usize, q: &[f64], r2: f64, strict: bool, cap: usize, count: &mut usize) {
        if *count >= cap {
            return;
        }
        let inside = |d2: f64| if strict { d2 < r2 } else { d2 <= r2 };
        let node = &self.nodes[id];
        if !inside(self.box_dist2(node, q)) {
            return;
        }
        if inside(self.box_far_dist2(node, q)) {
            *count += node.end - node.start;
            return;
        }
        match node.children {
            None => {
                for &i in &self.order[node.start..node.end] {
                    if inside(crate::geom::dist2(self.point(i), q)) {
                        *count += 1;
                    }
                }
            }
            Some((l, r)) => {
                self.count_rec(l, q, r2, strict, cap, count);
                self.count_rec(r, q, r2, strict, cap, count);
            }
        }
    }

    /// Indices of points with squared distance `<= r2` from `q`, ascending.
    pub fn within(&self, q: &[f64], r2: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.within_rec(0, q, r2, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, id: usize, q: &[f64], r2: f64, out: &mut Vec<usize>) {
        let node = &self.nodes[id];
        if self.box_dist2(node, q) > r2 {
            return;
        }
        match node.children {
            None => {
                for &i in &self.order[node.start..node.end] {
                    if crate::geom::dist2(self.point(i), q) <= r2 {
                        out.push(i);
                    }
                }
            }
            Some((l, r)) => {
                self.within_rec(l, q, r2, out);
                self.within_rec(r, q, r2, out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapItem {
    d2: f64,
    idx: usize,
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2.total_cmp(&other.d2).then(self.idx.cmp(&other.idx))
    }
}
