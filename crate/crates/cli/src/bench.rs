//! Separator size sweep over instance sizes and seeds.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use vsep::gen::{generate, PointDistribution};
use vsep::separator::balanced_voronoi_separator;
use vsep::Config;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub size: usize,
    /// `n^(1-1/d)`.
    pub n_pow: f64,
    pub ratio: f64,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSummary {
    /// `(n, median ratio)` per instance size.
    pub median_ratio: Vec<(usize, f64)>,
    /// Largest over smallest median ratio.
    pub spread: f64,
}

/// Runs every `(n, seed)` cell in parallel; rows come back sorted by `n`
/// and then seed.
pub fn sweep(
    kind: PointDistribution,
    d: usize,
    sizes: &[usize],
    seeds: u64,
    cfg: &Config,
) -> vsep::Result<Vec<BenchRow>> {
    let cells: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| (0..seeds).map(move |s| (n, s))).collect();
    let mut rows = cells
        .par_iter()
        .map(|&(n, seed)| {
            let pts = generate(kind, n, d, seed)?;
            let start = Instant::now();
            let sep = balanced_voronoi_separator(&pts, seed, cfg)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let n_pow = (n as f64).powf(1.0 - 1.0 / d as f64);
            Ok(BenchRow {
                n,
                d,
                seed,
                size: sep.guards.len(),
                n_pow,
                ratio: sep.guards.len() as f64 / n_pow,
                ms,
            })
        })
        .collect::<vsep::Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.seed));
    Ok(rows)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

pub fn summarize(rows: &[BenchRow]) -> BenchSummary {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.dedup();
    let median_ratio: Vec<(usize, f64)> = sizes
        .iter()
        .map(|&n| (n, median(rows.iter().filter(|r| r.n == n).map(|r| r.ratio).collect())))
        .collect();
    let max = median_ratio.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    let min = median_ratio.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    BenchSummary {
        median_ratio,
        spread: max / min,
    }
}
