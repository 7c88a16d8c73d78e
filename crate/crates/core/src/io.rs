//! Plain-text point and disk files.
//!
//! One record per line, whitespace-separated decimals, `#` starts a comment.
//! Point files may carry a final label column with values 1 or 2.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geom::{Ball, Point};
use crate::instance::{check_points, LabeledPointSet, Side};

/// How to interpret the last column of a point file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LabelMode {
    /// Labels iff every row has at least three columns and the last one is
    /// always `1` or `2`.
    #[default]
    Auto,
    Labeled,
    Unlabeled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointsFile {
    pub points: Vec<Point>,
    pub sides: Option<Vec<Side>>,
}

impl PointsFile {
    /// Labeled instance; fails when the file has no labels.
    pub fn into_instance(self) -> Result<LabeledPointSet> {
        let sides = self.sides.ok_or_else(|| Error::BadPartition("file has no label column".into()))?;
        LabeledPointSet::new(self.points, sides)
    }
}

fn rows(text: &str) -> Result<Vec<(usize, Vec<&str>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        if let Some((_, first)) = out.first() {
            let first: &Vec<&str> = first;
            if first.len() != cols.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {} columns, found {}", first.len(), cols.len()),
                });
            }
        }
        out.push((i + 1, cols));
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

fn number(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a number: {s:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite value {s:?}"),
        });
    }
    Ok(v)
}

/// Parses a point file.
pub fn parse_points(text: &str, mode: LabelMode) -> Result<PointsFile> {
    let rows = rows(text)?;
    let width = rows[0].1.len();
    let is_label = |s: &str| s == "1" || s == "2";
    let labeled = match mode {
        LabelMode::Labeled => true,
        LabelMode::Unlabeled => false,
        LabelMode::Auto => width >= 3 && rows.iter().all(|(_, c)| is_label(c[width - 1])),
    };
    let dim = if labeled { width - 1 } else { width };
    let mut points = Vec::with_capacity(rows.len());
    let mut sides = Vec::with_capacity(rows.len());
    for (line, cols) in &rows {
        let coords = cols[..dim].iter().map(|s| number(*line, s)).collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords));
        if labeled {
            let l: u8 = cols[dim].parse().map_err(|_| Error::Parse {
                line: *line,
                msg: format!("bad label {:?}", cols[dim]),
            })?;
            sides.push(Side::from_label(l).ok_or_else(|| Error::Parse {
                line: *line,
                msg: format!("label must be 1 or 2, got {l}"),
            })?);
        }
    }
    check_points(&points)?;
    Ok(PointsFile {
        points,
        sides: labeled.then_some(sides),
    })
}

/// Writes points, one per line, with shortest round-trip decimals.
pub fn format_points(points: &[Point], sides: Option<&[Side]>) -> String {
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        let mut cols: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
        if let Some(s) = sides {
            cols.push(s[i].label().to_string());
        }
        out.push_str(&cols.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a disk file with rows `x y r`.
pub fn parse_balls(text: &str) -> Result<Vec<Ball>> {
    let rows = rows(text)?;
    if rows[0].1.len() != 3 {
        return Err(Error::Parse {
            line: rows[0].0,
            msg: "disk rows need three columns: x y r".into(),
        });
    }
    rows.iter()
        .map(|(line, c)| {
            let r = number(*line, c[2])?;
            if r <= 0.0 {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("radius must be positive, got {r}"),
                });
            }
            Ok(Ball::new(Point::new(vec![number(*line, c[0])?, number(*line, c[1])?]), r))
        })
        .collect()
}

pub fn format_balls(balls: &[Ball]) -> String {
    balls
        .iter()
        .map(|b| format!("{:?} {:?} {:?}\n", b.center.coords()[0], b.center.coords()[1], b.radius))
        .collect()
}

/// Hex SHA-256 of a byte string.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
