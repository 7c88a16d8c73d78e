//! Hitting sets of explicit families of open disks.

use crate::cover::dense_in_ball;
use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::solvers::hitting::{DiskFamily, HsOutcome};
use crate::solvers::{disjoint_ball_bound, Certificate, HitInstance, HitResult};

/// Largest family accepted by [`brute_force_hit_disks`].
pub const BRUTE_FORCE_MAX_DISKS: usize = 25;
/// Largest solution size searched by [`brute_force_hit_disks`].
pub const BRUTE_FORCE_MAX_SIZE: usize = 6;

/// Disks whose interior misses every point.
pub fn stab_report(balls: &[Ball], points: &[Point]) -> Certificate {
    let unstabbed = balls
        .iter()
        .enumerate()
        .filter(|(_, b)| !points.iter().any(|p| b.stabbed_by(p)))
        .map(|(i, _)| i)
        .collect();
    Certificate::Stabbing {
        disks: balls.len(),
        unstabbed,
    }
}

fn validate(balls: &[Ball]) -> Result<()> {
    HitInstance::ExplicitDisks(balls.to_vec()).validate()
}

/// Constant-factor hitting set: while a disk is unstabbed, take the smallest
/// one `ball(c, r)` (ties by center) and add the points of an `r`-dense net
/// of `ball(c, 2r)` that stab some unstabbed disk.
pub fn greedy_hit_disks(balls: &[Ball]) -> Result<HitResult> {
    validate(balls)?;
    let mut points: Vec<Point> = Vec::new();
    let mut open: Vec<usize> = (0..balls.len()).collect();
    let mut rounds = 0;
    while !open.is_empty() {
        rounds += 1;
        let &i = open
            .iter()
            .min_by(|&&a, &&b| {
                balls[a]
                    .radius
                    .total_cmp(&balls[b].radius)
                    .then_with(|| balls[a].center.lex_cmp(&balls[b].center))
            })
            .expect("nonempty");
        let b = &balls[i];
        let net = dense_in_ball(&Ball::new(b.center.clone(), 2.0 * b.radius), b.radius)?;
        for q in net.points {
            if open.iter().any(|&j| balls[j].stabbed_by(&q)) {
                open.retain(|&j| !balls[j].stabbed_by(&q));
                points.push(q);
            }
        }
        if open.contains(&i) {
            open.retain(|&j| !balls[j].stabbed_by(&b.center));
            points.push(b.center.clone());
        }
    }
    let lower_bound = disjoint_ball_bound(balls);
    Ok(HitResult {
        certificate: stab_report(balls, &points),
        proved_optimal: points.len() == lower_bound,
        iterations: rounds,
        size_history: Vec::new(),
        lower_bound,
        fallback: false,
        points,
    })
}

/// Minimum hitting set over disk centers and pairwise lens vertices, which
/// contain an optimal solution. `TooLarge` when the family or `max_size`
/// exceeds the exhaustive-search caps, or when no solution of size at most
/// `max_size` exists.
pub fn brute_force_hit_disks(balls: &[Ball], max_size: usize) -> Result<HitResult> {
    validate(balls)?;
    if balls.len() > BRUTE_FORCE_MAX_DISKS {
        return Err(Error::TooLarge(format!("{} disks exceed {BRUTE_FORCE_MAX_DISKS}", balls.len())));
    }
    if max_size > BRUTE_FORCE_MAX_SIZE {
        return Err(Error::TooLarge(format!("max_size {max_size} exceeds {BRUTE_FORCE_MAX_SIZE}")));
    }
    let family = DiskFamily::new(balls);
    match family.min_hitting_set(max_size, u64::MAX) {
        HsOutcome::Found(c) => {
            let points: Vec<Point> = c.iter().map(|&c| family.point(c)).collect();
            Ok(HitResult {
                certificate: stab_report(balls, &points),
                iterations: 0,
                size_history: Vec::new(),
                lower_bound: points.len(),
                proved_optimal: true,
                fallback: false,
                points,
            })
        }
        HsOutcome::Infeasible | HsOutcome::Aborted => {
            Err(Error::TooLarge(format!("optimum exceeds max_size {max_size}")))
        }
    }
}
