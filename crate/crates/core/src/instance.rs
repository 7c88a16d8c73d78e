//! Labeled point sets: a point set with a two-class partition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;

/// Class of an input point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }

    /// Label used in points files.
    pub fn label(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }

    pub fn from_label(l: u8) -> Option<Side> {
        match l {
            1 => Some(Side::One),
            2 => Some(Side::Two),
            _ => None,
        }
    }
}

/// A point set `P` with its partition into `P1` and `P2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPointSet {
    points: Vec<Point>,
    sides: Vec<Side>,
}

/// Checks that all points are finite and share one dimension `>= 2`.
pub fn check_points(points: &[Point]) -> Result<usize> {
    let d = points.first().ok_or(Error::EmptyInput)?.dim();
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
        if p.coords().iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
    }
    Ok(d)
}

impl LabeledPointSet {
    pub fn new(points: Vec<Point>, sides: Vec<Side>) -> Result<Self> {
        if points.len() != sides.len() {
            return Err(Error::BadPartition(format!(
                "{} points but {} labels",
                points.len(),
                sides.len()
            )));
        }
        check_points(&points)?;
        Ok(LabeledPointSet { points, sides })
    }

    /// Builds the instance from index lists of the two classes, which must
    /// partition `0..points.len()`.
    pub fn from_partition(points: Vec<Point>, p1: &[usize], p2: &[usize]) -> Result<Self> {
        let n = points.len();
        let mut sides: Vec<Option<Side>> = vec![None; n];
        for (list, side) in [(p1, Side::One), (p2, Side::Two)] {
            for &i in list {
                if i >= n {
                    return Err(Error::BadPartition(format!("index {i} out of range")));
                }
                if sides[i].replace(side).is_some() {
                    return Err(Error::BadPartition(format!("index {i} labeled twice")));
                }
            }
        }
        let sides = sides
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::BadPartition(format!("index {i} unlabeled"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, sides)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn side(&self, i: usize) -> Side {
        self.sides[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn indices(&self, side: Side) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sides[i] == side).collect()
    }

    /// True if one class is empty, so no guards are needed.
    pub fn is_trivial(&self) -> bool {
        self.sides.iter().all(|&s| s == self.sides[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<Point> {
        vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [2.0, 0.0].into()]
    }

    #[test]
    fn partition_validation() {
        let inst = LabeledPointSet::from_partition(pts(), &[0, 2], &[1]).unwrap();
        assert_eq!(inst.indices(Side::One), vec![0, 2]);
        assert_eq!(inst.side(1), Side::Two);
        assert!(matches!(
            LabeledPointSet::from_partition(pts(), &[0, 1], &[1, 2]),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            LabeledPointSet::from_partition(pts(), &[0], &[1]),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(
            LabeledPointSet::new(pts(), vec![Side::One]),
            Err(Error::BadPartition(_))
        ));
    }

    #[test]
    fn point_validation() {
        assert_eq!(check_points(&[]), Err(Error::EmptyInput));
        assert_eq!(
            check_points(&[[0.0, 0.0].into(), [0.0, 0.0, 1.0].into()]),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        );
        assert_eq!(check_points(&[[1.0].into()]), Err(Error::UnsupportedDimension(1)));
    }

    #[test]
    fn labels_round_trip() {
        for s in [Side::One, Side::Two] {
            assert_eq!(Side::from_label(s.label()), Some(s));
            assert_eq!(s.other().other(), s);
        }
        assert_eq!(Side::from_label(3), None);
    }
}
