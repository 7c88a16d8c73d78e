//! Local search by bounded exchanges.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::instance::LabeledPointSet;
use crate::solvers::disks::{greedy_hit_disks, stab_report};
use crate::solvers::exact::{exact_search, SearchLimits};
use crate::solvers::hitting::{DiskFamily, HsOutcome};
use crate::solvers::{disjoint_ball_bound, greedy_separator, Certificate, HitInstance, HitResult};
use crate::verify::verify_separated;

/// Largest exchange size accepted by [`local_search_hit`].
pub const MAX_EXCHANGE: usize = 6;

const NODE_CAP: u64 = 1_000_000;

/// Replacement for the points of `x` outside `y`, of size below `y.len()`.
type Exchange<'a> = dyn FnMut(&[Point], usize) -> Result<Option<Vec<Point>>> + 'a;

/// First-improvement scan: subsets `Y` of `x` by ascending size and then
/// lexicographically by index; the first `Y` with a strictly smaller
/// replacement is swapped out and the scan restarts.
fn improve(
    mut x: Vec<Point>,
    ell: usize,
    exchange: &mut Exchange<'_>,
    deadline: Option<(Instant, f64)>,
) -> Result<(Vec<Point>, Vec<usize>, bool)> {
    let mut history = vec![x.len()];
    'scan: loop {
        for size in 1..=ell.min(x.len()) {
            for y in (0..x.len()).combinations(size) {
                if let Some((start, secs)) = deadline {
                    if start.elapsed().as_secs_f64() > secs {
                        return Ok((x, history, true));
                    }
                }
                let rest: Vec<Point> = (0..x.len()).filter(|i| !y.contains(i)).map(|i| x[i].clone()).collect();
                if let Some(new) = exchange(&rest, size)? {
                    debug_assert!(new.len() < size);
                    x = rest;
                    x.extend(new);
                    history.push(x.len());
                    continue 'scan;
                }
            }
        }
        return Ok((x, history, false));
    }
}

fn disk_exchange(balls: &[Ball]) -> impl FnMut(&[Point], usize) -> Result<Option<Vec<Point>>> + '_ {
    let family = DiskFamily::new(balls);
    move |rest, size| {
        let mut open = FixedBitSet::with_capacity(balls.len());
        for (i, b) in balls.iter().enumerate() {
            open.set(i, !rest.iter().any(|p| b.stabbed_by(p)));
        }
        if open.is_clear() {
            return Ok(Some(Vec::new()));
        }
        Ok(match family.min_hitting_set_of(&open, size - 1, NODE_CAP) {
            HsOutcome::Found(c) => Some(c.iter().map(|&c| family.point(c)).collect()),
            HsOutcome::Infeasible | HsOutcome::Aborted => None,
        })
    }
}

fn voronoi_exchange<'a>(
    inst: &'a LabeledPointSet,
    seed: u64,
    cfg: &'a Config,
) -> impl FnMut(&[Point], usize) -> Result<Option<Vec<Point>>> + 'a {
    move |rest, size| {
        let limits = SearchLimits {
            restarts: cfg.exact_restarts,
            deadline: cfg.ptas_sub_time_cap_secs.map(|s| (Instant::now(), s)),
        };
        match exact_search(inst, rest, size - 1, seed, &limits) {
            Ok(out) => Ok(Some(out.points)),
            Err(Error::NoSolutionWithinBudget(_) | Error::TimeCapExceeded(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Starts from the greedy solution and applies exchanges of at most `ell`
/// points by strictly fewer points until none exists. Explicit disks use an
/// exact candidate-set search for the replacement; labeled instances use the
/// exact separator search on the residual instance with the remaining points
/// as fixed guards, each call capped by `ptas_sub_time_cap_secs`, and the
/// whole run capped by `exact_time_cap_secs` (reported as `fallback`).
pub fn local_search_hit(inst: &HitInstance, ell: usize, seed: u64, cfg: &Config) -> Result<HitResult> {
    if ell == 0 {
        return Err(Error::InvalidParameter("exchange size must be at least 1".into()));
    }
    if ell > MAX_EXCHANGE {
        return Err(Error::ExchangeBudgetExceeded(ell));
    }
    inst.validate()?;
    let deadline = cfg.exact_time_cap_secs.map(|s| (Instant::now(), s));
    match inst {
        HitInstance::ExplicitDisks(balls) => {
            let start = greedy_hit_disks(balls)?;
            let (points, size_history, capped) = improve(start.points, ell, &mut disk_exchange(balls), deadline)?;
            let lower_bound = disjoint_ball_bound(balls);
            Ok(HitResult {
                certificate: stab_report(balls, &points),
                iterations: size_history.len() - 1,
                size_history,
                proved_optimal: points.len() == lower_bound,
                lower_bound,
                fallback: capped,
                points,
            })
        }
        HitInstance::Voronoi(lps) => {
            let start = greedy_separator(lps)?;
            let lower_bound = start.lower_bound;
            let (points, size_history, capped) =
                improve(start.points, ell, &mut voronoi_exchange(lps, seed, cfg), deadline)?;
            let report = verify_separated(lps, &points)?;
            Ok(HitResult {
                certificate: Certificate::Separation(report),
                iterations: size_history.len() - 1,
                size_history,
                proved_optimal: points.len() == lower_bound,
                lower_bound,
                fallback: capped,
                points,
            })
        }
    }
}
