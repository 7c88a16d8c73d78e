//! Approximation scheme: greedy solution refined by exact local re-solves.

use std::time::Instant;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::instance::LabeledPointSet;
use crate::separator::guard_separator_unchecked;
use crate::solvers::exact::{exact_search, SearchLimits, MAX_BUDGET};
use crate::solvers::{greedy_separator, Certificate, HitResult};
use crate::verify::verify_separated;

/// Sub-instance size parameter `max(2, round(c_ptas / eps^2))`.
pub fn ptas_k(eps: f64, cfg: &Config) -> usize {
    ((cfg.c_ptas / (eps * eps)).round() as usize).max(2)
}

/// Best replacement for `xi` on the labeled points inside the round's ball,
/// with all earlier output and the round's guards fixed. Returns `xi` itself
/// when no strictly smaller solution is found, and whether a cap forced that.
fn resolve(
    inst: &LabeledPointSet,
    inside: &[usize],
    fixed: &[Point],
    xi: Vec<Point>,
    seed: u64,
    cfg: &Config,
) -> Result<(Vec<Point>, bool)> {
    if xi.is_empty() || inside.is_empty() {
        return Ok((xi, false));
    }
    let points: Vec<Point> = inside.iter().map(|&i| inst.points()[i].clone()).collect();
    let sides = inside.iter().map(|&i| inst.side(i)).collect();
    let sub = LabeledPointSet::new(points, sides)?;
    let budget = (xi.len() - 1).min(cfg.ptas_sub_budget_cap).min(MAX_BUDGET);
    let limits = SearchLimits {
        restarts: cfg.exact_restarts,
        deadline: cfg.ptas_sub_time_cap_secs.map(|s| (Instant::now(), s)),
    };
    match exact_search(&sub, fixed, budget, seed, &limits) {
        Ok(out) => Ok((out.points, out.fallback)),
        Err(Error::NoSolutionWithinBudget(_)) => {
            let capped = budget < xi.len() - 1;
            Ok((xi, capped))
        }
        Err(Error::TimeCapExceeded(_)) => Ok((xi, true)),
        Err(e) => Err(e),
    }
}

fn push_distinct(out: &mut Vec<Point>, new: Vec<Point>) {
    for p in new {
        if !out.contains(&p) {
            out.push(p);
        }
    }
}

/// Starts from the greedy separator `X` and repeatedly cuts off a ball
/// around `min(k, |X_i|)` remaining points of `X` with `guard_separator`.
/// The labeled points inside are re-solved exactly with every earlier output
/// point and the sphere's guards fixed, falling back to the cut-off points of
/// `X` when the sub-solve hits its time or budget cap. The union is verified
/// and the smaller of it and the greedy solution is returned.
pub fn ptas_separator(inst: &LabeledPointSet, eps: f64, seed: u64, cfg: &Config) -> Result<HitResult> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension(inst.dim()));
    }
    let greedy = greedy_separator(inst)?;
    let k = ptas_k(eps, cfg);
    let mut remaining: Vec<Point> = greedy.points.clone();
    let mut output: Vec<Point> = Vec::new();
    let mut fallback = false;
    let mut rounds = 0;
    while !remaining.is_empty() {
        rounds += 1;
        let round_seed = seed.wrapping_add(rounds as u64);
        let cut = if remaining.len() >= 2 {
            match guard_separator_unchecked(&remaining, k.min(remaining.len()), round_seed, cfg) {
                Ok(g) => Some(g),
                Err(Error::Degenerate(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let Some(cut) = cut else {
            output.append(&mut remaining);
            break;
        };
        let ball = cut.sphere.ball();
        let xi: Vec<Point> = cut
            .inside
            .iter()
            .filter(|i| !cut.near.contains(i))
            .map(|&i| remaining[i].clone())
            .collect();
        let inside: Vec<usize> = (0..inst.len()).filter(|&i| ball.contains(&inst.points()[i])).collect();
        push_distinct(&mut output, cut.extra_guards);
        let (replacement, capped) = resolve(inst, &inside, &output, xi, round_seed, cfg)?;
        fallback |= capped;
        push_distinct(&mut output, replacement);
        let mut keep = vec![true; remaining.len()];
        for &i in cut.inside.iter().chain(&cut.near) {
            keep[i] = false;
        }
        let mut it = keep.iter();
        remaining.retain(|_| *it.next().expect("same length"));
    }
    let report = verify_separated(inst, &output)?;
    if !report.separated || output.len() >= greedy.len() {
        return Ok(HitResult {
            iterations: rounds,
            fallback: fallback || !report.separated,
            ..greedy
        });
    }
    Ok(HitResult {
        proved_optimal: output.len() == greedy.lower_bound,
        points: output,
        iterations: rounds,
        certificate: Certificate::Separation(report),
        size_history: Vec::new(),
        lower_bound: greedy.lower_bound,
        fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, random_sides, PointDistribution};
    use crate::instance::Side;

    fn quick() -> Config {
        Config {
            ptas_sub_time_cap_secs: Some(0.5),
            exact_restarts: 20,
            ..Config::default()
        }
    }

    #[test]
    fn k_parameter() {
        let cfg = Config::default();
        assert_eq!(ptas_k(1.0, &cfg), 4);
        assert_eq!(ptas_k(0.5, &cfg), 16);
        assert_eq!(ptas_k(10.0, &cfg), 2);
    }

    #[test]
    fn two_point_instance() {
        let inst = LabeledPointSet::from_partition(vec![[0.0, 0.0].into(), [1.0, 0.0].into()], &[0], &[1]).unwrap();
        let greedy = greedy_separator(&inst).unwrap();
        let res = ptas_separator(&inst, 1.0, 0, &quick()).unwrap();
        assert!(res.certificate.is_valid());
        assert!(verify_separated(&inst, &res.points).unwrap().separated);
        assert!(res.len() <= greedy.len());
        assert!(ptas_separator(&inst, 0.0, 0, &quick()).is_err());
    }

    #[test]
    fn separated_instance_is_empty() {
        let pts = generate(PointDistribution::Uniform, 15, 2, 3).unwrap();
        let inst = LabeledPointSet::new(pts, vec![Side::Two; 15]).unwrap();
        assert!(ptas_separator(&inst, 1.0, 0, &quick()).unwrap().is_empty());
    }

    #[test]
    fn random_instances_valid_and_no_worse_than_greedy() {
        for seed in 0..4 {
            let pts = generate(PointDistribution::Uniform, 40, 2, seed).unwrap();
            let inst = LabeledPointSet::new(pts, random_sides(40, seed)).unwrap();
            let greedy = greedy_separator(&inst).unwrap();
            for eps in [0.5, 1.0] {
                let res = ptas_separator(&inst, eps, seed, &quick()).unwrap();
                assert!(verify_separated(&inst, &res.points).unwrap().separated);
                assert!(res.len() <= greedy.len());
            }
        }
    }
}
