//! WebAssembly bindings for the browser demo. Inputs are flat coordinate
//! arrays; results are JSON strings.

use serde_json::json;
use vsep::gen::{generate, halfplane_sides, random_sides, PointDistribution};
use vsep::instance::{LabeledPointSet, Side};
use vsep::separator::balanced_voronoi_separator;
use vsep::solvers::{greedy_hit_disks, greedy_separator, local_search_hit, HitInstance};
use vsep::verify::verify_separated;
use vsep::{Ball, Config, Error, Point, Result};
use wasm_bindgen::prelude::*;

/// Configuration without wall-clock caps, which the browser target lacks.
fn config() -> Config {
    Config {
        exact_time_cap_secs: None,
        ptas_sub_time_cap_secs: None,
        ..Config::default()
    }
}

fn points(coords: &[f64]) -> Result<Vec<Point>> {
    if coords.is_empty() || !coords.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("{} coordinates do not form planar points", coords.len())));
    }
    Ok(coords.chunks_exact(2).map(|c| Point::new(c.to_vec())).collect())
}

fn flat(pts: &[Point]) -> Vec<f64> {
    pts.iter().flat_map(|p| p.coords().iter().copied()).collect()
}

fn instance(coords: &[f64], labels: &[u8]) -> Result<LabeledPointSet> {
    let pts = points(coords)?;
    let sides = labels
        .iter()
        .map(|&l| Side::from_label(l).ok_or_else(|| Error::InvalidParameter(format!("label {l}"))))
        .collect::<Result<Vec<_>>>()?;
    LabeledPointSet::new(pts, sides)
}

/// Seeded points in the unit square as `[x0, y0, x1, y1, ...]`.
pub fn generate_points_impl(kind: &str, n: usize, seed: u32) -> Result<Vec<f64>> {
    let kind: PointDistribution = kind.parse()?;
    Ok(flat(&generate(kind, n, 2, seed as u64)?))
}

/// Labels 1 or 2, either fair coins or split by a random line.
pub fn labels_impl(coords: &[f64], mode: &str, seed: u32) -> Result<Vec<u8>> {
    let pts = points(coords)?;
    let sides = match mode {
        "halfplane" => halfplane_sides(&pts, seed as u64),
        "random" => random_sides(pts.len(), seed as u64),
        other => return Err(Error::InvalidParameter(format!("unknown label mode {other:?}"))),
    };
    Ok(sides.into_iter().map(Side::label).collect())
}

/// Sphere separator with its guards and the inside/outside split.
pub fn separate_impl(coords: &[f64], seed: u32) -> Result<String> {
    let pts = points(coords)?;
    let sep = balanced_voronoi_separator(&pts, seed as u64, &config())?;
    Ok(json!({
        "center": sep.sphere.center.coords(),
        "radius": sep.sphere.radius,
        "guards": flat(&sep.guards),
        "inside": sep.inside,
        "outside": sep.outside,
        "retries": sep.stats.retries,
    })
    .to_string())
}

/// Greedy separator of a labeled instance, checked by the verifier.
pub fn greedy_impl(coords: &[f64], labels: &[u8]) -> Result<String> {
    let inst = instance(coords, labels)?;
    let res = greedy_separator(&inst)?;
    let report = verify_separated(&inst, &res.points)?;
    Ok(json!({
        "guards": flat(&res.points),
        "rounds": res.iterations,
        "lower_bound": res.lower_bound,
        "separated": report.separated,
    })
    .to_string())
}

/// Greedy and local-search hitting sets of disks given as `[x, y, r, ...]`.
pub fn local_search_disks_impl(disks: &[f64], ell: usize) -> Result<String> {
    if disks.is_empty() || !disks.len().is_multiple_of(3) {
        return Err(Error::InvalidParameter(format!("{} values do not form disks", disks.len())));
    }
    let balls: Vec<Ball> = disks
        .chunks_exact(3)
        .map(|d| Ball::new(Point::new(vec![d[0], d[1]]), d[2]))
        .collect();
    let greedy = greedy_hit_disks(&balls)?;
    let res = local_search_hit(&HitInstance::ExplicitDisks(balls), ell, 0, &config())?;
    Ok(json!({
        "greedy": flat(&greedy.points),
        "points": flat(&res.points),
        "size_history": res.size_history,
        "lower_bound": res.lower_bound,
        "valid": res.certificate.is_valid(),
    })
    .to_string())
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = generatePoints)]
pub fn generate_points(kind: &str, n: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    generate_points_impl(kind, n, seed).map_err(js)
}

#[wasm_bindgen]
pub fn labels(coords: &[f64], mode: &str, seed: u32) -> Result<Vec<u8>, JsError> {
    labels_impl(coords, mode, seed).map_err(js)
}

#[wasm_bindgen]
pub fn separate(coords: &[f64], seed: u32) -> Result<String, JsError> {
    separate_impl(coords, seed).map_err(js)
}

#[wasm_bindgen]
pub fn greedy(coords: &[f64], labels: &[u8]) -> Result<String, JsError> {
    greedy_impl(coords, labels).map_err(js)
}

#[wasm_bindgen(js_name = localSearchDisks)]
pub fn local_search_disks(disks: &[f64], ell: usize) -> Result<String, JsError> {
    local_search_disks_impl(disks, ell).map_err(js)
}
