//! Seeded synthetic point-set generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::instance::Side;

pub const MAX_DIM: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointDistribution {
    Uniform,
    Clustered,
    Annulus,
    GridJitter,
}

impl std::str::FromStr for PointDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "clustered" => Ok(Self::Clustered),
            "annulus" => Ok(Self::Annulus),
            "grid-jitter" => Ok(Self::GridJitter),
            _ => Err(Error::InvalidParameter(format!("unknown distribution {s:?}"))),
        }
    }
}

impl std::fmt::Display for PointDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Clustered => "clustered",
            Self::Annulus => "annulus",
            Self::GridJitter => "grid-jitter",
        })
    }
}

fn unit_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `n` points in `[0,1]^d` drawn from `kind`, deterministic in `seed`.
///
/// * `Clustered`: `max(2, round(n^(1/3)))` Gaussian blobs with standard
///   deviation 0.04 around uniform centers, clamped to the cube.
/// * `Annulus`: uniform on the shell `0.35 <= |x - c| <= 0.5` around the cube center.
/// * `GridJitter`: the first `n` vertices of a grid of side `ceil(n^(1/d))`
///   with uniform jitter of a tenth of the spacing.
pub fn generate(kind: PointDistribution, n: usize, d: usize, seed: u64) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = match kind {
        PointDistribution::Uniform => (0..n)
            .map(|_| Point::new((0..d).map(|_| rng.random::<f64>()).collect()))
            .collect(),
        PointDistribution::Clustered => {
            let m = ((n as f64).cbrt().round() as usize).max(2);
            let centers: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..d).map(|_| rng.random_range(0.15..0.85)).collect())
                .collect();
            let noise = Normal::new(0.0, 0.04).expect("valid deviation");
            (0..n)
                .map(|_| {
                    let c = &centers[rng.random_range(0..m)];
                    Point::new(c.iter().map(|&x| (x + noise.sample(&mut rng)).clamp(0.0, 1.0)).collect())
                })
                .collect()
        }
        PointDistribution::Annulus => {
            let (r0, r1) = (0.35f64, 0.5f64);
            (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let t = (r0.powi(d as i32) + u * (r1.powi(d as i32) - r0.powi(d as i32))).powf(1.0 / d as f64);
                    let dir = unit_direction(&mut rng, d);
                    Point::new(dir.iter().map(|x| 0.5 + t * x).collect())
                })
                .collect()
        }
        PointDistribution::GridJitter => {
            let side = ((n as f64).powf(1.0 / d as f64).ceil() as usize).max(1);
            let side = if side.pow(d as u32) < n { side + 1 } else { side };
            let h = 1.0 / side as f64;
            (0..n)
                .map(|mut idx| {
                    let mut c = Vec::with_capacity(d);
                    for _ in 0..d {
                        let i = idx % side;
                        idx /= side;
                        let j: f64 = rng.random_range(-0.05..0.05);
                        c.push(((i as f64 + 0.5 + j) * h).clamp(0.0, 1.0));
                    }
                    Point::new(c)
                })
                .collect()
        }
    };
    Ok(pts)
}

/// Independent fair-coin labels.
pub fn random_sides(n: usize, seed: u64) -> Vec<Side> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| if rng.random::<bool>() { Side::One } else { Side::Two })
        .collect()
}

/// Labels by a random hyperplane through a point near the cube center:
/// points on its negative side are `One`.
pub fn halfplane_sides(points: &[Point], seed: u64) -> Vec<Side> {
    let Some(d) = points.first().map(Point::dim) else {
        return Vec::new();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = unit_direction(&mut rng, d);
    let offset: f64 = rng.random_range(-0.1..0.1);
    points
        .iter()
        .map(|p| {
            let s: f64 = p.coords().iter().zip(&normal).map(|(c, u)| (c - 0.5) * u).sum();
            if s < offset { Side::One } else { Side::Two }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfplane_labels_are_linearly_separable() {
        let pts = generate(PointDistribution::Uniform, 200, 2, 3).unwrap();
        let sides = halfplane_sides(&pts, 3);
        assert_eq!(sides, halfplane_sides(&pts, 3));
        assert!(sides.contains(&Side::One) && sides.contains(&Side::Two));
        // the two classes have disjoint convex hulls: some direction splits them
        let split = (0..360).any(|deg| {
            let a = (deg as f64).to_radians();
            let proj = |p: &Point| p.coords()[0] * a.cos() + p.coords()[1] * a.sin();
            let max1 = pts.iter().zip(&sides).filter(|(_, s)| **s == Side::One).map(|(p, _)| proj(p)).fold(f64::MIN, f64::max);
            let min2 = pts.iter().zip(&sides).filter(|(_, s)| **s == Side::Two).map(|(p, _)| proj(p)).fold(f64::MAX, f64::min);
            max1 < min2
        });
        assert!(split);
        assert!(halfplane_sides(&[], 1).is_empty());
    }

    #[test]
    fn deterministic_and_in_cube() {
        for kind in [
            PointDistribution::Uniform,
            PointDistribution::Clustered,
            PointDistribution::Annulus,
            PointDistribution::GridJitter,
        ] {
            for d in [2, 3, 5] {
                let a = generate(kind, 300, d, 7).unwrap();
                assert_eq!(a, generate(kind, 300, d, 7).unwrap());
                assert_ne!(a, generate(kind, 300, d, 8).unwrap());
                assert_eq!(a.len(), 300);
                assert!(a.iter().all(|p| p.dim() == d && p.coords().iter().all(|&c| (0.0..=1.0).contains(&c))));
            }
            assert_eq!(kind.to_string().parse::<PointDistribution>().unwrap(), kind);
        }
    }

    #[test]
    fn annulus_shell() {
        let pts = generate(PointDistribution::Annulus, 500, 2, 1).unwrap();
        let c = Point::new(vec![0.5, 0.5]);
        assert!(pts.iter().all(|p| (0.35 - 1e-12..=0.5 + 1e-12).contains(&p.dist(&c))));
    }

    #[test]
    fn grid_jitter_is_spread() {
        let pts = generate(PointDistribution::GridJitter, 100, 2, 3).unwrap();
        let mut min = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                min = min.min(pts[i].dist(&pts[j]));
            }
        }
        assert!(min >= 0.08);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(generate(PointDistribution::Uniform, 0, 2, 1), Err(Error::EmptyInput));
        assert_eq!(generate(PointDistribution::Uniform, 5, 11, 1), Err(Error::UnsupportedDimension(11)));
        assert!("blobs".parse::<PointDistribution>().is_err());
    }
}
