//! Measures `mean |S| / n^(1-1/d)` of the sphere separator on uniform data
//! with the size rejection disabled and writes `fixtures/calibration.json`.

use serde_json::json;
use vsep::gen::{generate, PointDistribution};
use vsep::separator::balanced_voronoi_separator;
use vsep::Config;

const SEEDS: u64 = 20;

fn main() -> vsep::Result<()> {
    let cfg = Config {
        c_sep: Some(1e12),
        ..Config::default()
    };
    let mut dims = Vec::new();
    for (d, sizes) in [(2usize, [1024usize, 4096]), (3, [1024, 4096])] {
        let mut ratios = Vec::new();
        for n in sizes {
            for seed in 0..SEEDS {
                let pts = generate(PointDistribution::Uniform, n, d, seed)?;
                let s = balanced_voronoi_separator(&pts, seed, &cfg)?;
                ratios.push(s.guards.len() as f64 / (n as f64).powf(1.0 - 1.0 / d as f64));
            }
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        dims.push(json!({
            "d": d,
            "sizes": sizes,
            "seeds": SEEDS,
            "mean_ratio": mean,
            "max_ratio": max,
            "c_sep": (mean * 2.0).ceil() / 2.0,
        }));
    }
    let out = json!({ "distribution": "uniform", "dimensions": dims });
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/calibration.json");
    std::fs::write(path, serde_json::to_string_pretty(&out).expect("serializable") + "\n").expect("writable fixture");
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}
