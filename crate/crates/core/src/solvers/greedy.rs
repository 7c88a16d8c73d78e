//! Greedy separator: repeatedly net the smallest bad ball.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::dense_in_ball;
use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::instance::LabeledPointSet;
use crate::solvers::{bad_min_balls, disjoint_ball_bound, Certificate, HitResult};
use crate::verify::verify_separated;

/// Relative jitter applied to net points.
const JITTER: f64 = 1e-6;

fn smaller(a: &Ball, b: &Ball) -> bool {
    a.radius
        .total_cmp(&b.radius)
        .then_with(|| a.center.lex_cmp(&b.center))
        .is_lt()
}

/// Net of `ball(c, 2r)` with spacing `r`, jittered and with points that
/// coincide with existing sites removed.
fn round_net(b: &Ball, sites: &[Point], round: usize) -> Result<Vec<Point>> {
    let net = dense_in_ball(&Ball::new(b.center.clone(), 2.0 * b.radius), b.radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(round as u64);
    let j = JITTER * b.radius;
    let min_gap = 1e3 * f64::EPSILON * (1.0 + b.radius);
    Ok(net
        .points
        .into_iter()
        .map(|p| Point::new(p.coords().iter().map(|c| c + rng.random_range(-j..=j)).collect()))
        .filter(|p| sites.iter().all(|s| s.dist(p) > min_gap))
        .collect())
}

/// Greedy separator together with the ball chosen in every round.
pub(crate) fn greedy_rounds(inst: &LabeledPointSet) -> Result<(HitResult, Vec<Ball>)> {
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension(inst.dim()));
    }
    let lower_bound = disjoint_ball_bound(&bad_min_balls(inst, &[])?);
    let cap = 16 * inst.len();
    let mut guards: Vec<Point> = Vec::new();
    let mut chosen = Vec::new();
    for round in 0..=cap {
        let balls = bad_min_balls(inst, &guards)?;
        let ball = match balls.into_iter().reduce(|a, b| if smaller(&b, &a) { b } else { a }) {
            Some(b) => b,
            None => {
                let report = verify_separated(inst, &guards)?;
                match &report.witness {
                    None => {
                        let proved_optimal = guards.len() == lower_bound;
                        let result = HitResult {
                            points: guards,
                            iterations: round,
                            certificate: Certificate::Separation(report),
                            size_history: Vec::new(),
                            lower_bound,
                            proved_optimal,
                            fallback: false,
                        };
                        return Ok((result, chosen));
                    }
                    Some(w) => {
                        let r = w.witness.dist(&inst.points()[w.p1]);
                        Ball::new(w.witness.clone(), r)
                    }
                }
            }
        };
        if round == cap {
            break;
        }
        let mut sites = inst.points().to_vec();
        sites.extend_from_slice(&guards);
        guards.extend(round_net(&ball, &sites, round)?);
        chosen.push(ball);
    }
    Err(Error::NonTermination(cap))
}

/// Constant-factor separator of a planar labeled instance: while a bad
/// feature remains in `Vor(P ∪ X)`, take its smallest pencil ball `ball(c, r)`
/// (ties by center) and add an `r`-dense net of `ball(c, 2r)` to `X`.
pub fn greedy_separator(inst: &LabeledPointSet) -> Result<HitResult> {
    greedy_rounds(inst).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, random_sides, PointDistribution};
    use crate::instance::Side;
    use rand::Rng;

    fn two_point() -> LabeledPointSet {
        LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap()
    }

    #[test]
    fn two_point_instance() {
        let res = greedy_separator(&two_point()).unwrap();
        assert!(res.certificate.is_valid());
        assert!(verify_separated(&two_point(), &res.points).unwrap().separated);
        let per_round = dense_in_ball(&Ball::new(Point::new(vec![0.5, 0.0]), 1.0), 0.5).unwrap().len();
        assert!(res.iterations <= 3 && res.points.len() <= per_round * res.iterations);
    }

    #[test]
    fn separated_instance_needs_nothing() {
        let pts = generate(PointDistribution::Uniform, 20, 2, 1).unwrap();
        let inst = LabeledPointSet::new(pts, vec![Side::One; 20]).unwrap();
        let res = greedy_separator(&inst).unwrap();
        assert!(res.points.is_empty());
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn random_instances_are_separated() {
        for seed in 0..20 {
            let pts = generate(PointDistribution::Uniform, 20, 2, seed).unwrap();
            let inst = LabeledPointSet::new(pts, random_sides(20, seed)).unwrap();
            let res = greedy_separator(&inst).unwrap();
            assert!(verify_separated(&inst, &res.points).unwrap().separated, "seed {seed}");
            assert!(res.points.len() >= res.lower_bound);
        }
    }

    #[test]
    fn nets_stab_larger_intersecting_balls() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts = generate(PointDistribution::Clustered, 30, 2, 3).unwrap();
        let inst = LabeledPointSet::new(pts, random_sides(30, 3)).unwrap();
        let (res, chosen) = greedy_rounds(&inst).unwrap();
        assert!(res.certificate.is_valid());
        for (round, b) in chosen.iter().enumerate() {
            let net = round_net(b, &[], round).unwrap();
            for _ in 0..100 {
                let r = b.radius * rng.random_range(1.0..4.0);
                let d = rng.random_range(0.0..(r + b.radius) * (1.0 - 1e-3));
                let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let c = b.center.offset(&[a.cos(), a.sin()], d);
                let big = Ball::new(c, r);
                assert!(net.iter().any(|p| big.stabbed_by(p)), "round {round}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let pts = generate(PointDistribution::Uniform, 25, 2, 9).unwrap();
        let inst = LabeledPointSet::new(pts, random_sides(25, 9)).unwrap();
        let a = greedy_separator(&inst).unwrap();
        let b = greedy_separator(&inst).unwrap();
        assert_eq!(a, b);
    }
}
