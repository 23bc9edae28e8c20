//! Concrete metric spaces and their points.
//!
//! Four kinds of space are supported:
//!
//! * `Euclidean(n)` — R^n with the usual norm,
//! * `HalfLine` — [0, ∞) with |s − t|,
//! * `IntervalFibers` — countably many copies of [0, 1], distance |s − t|
//!   inside a fiber and 1 across fibers,
//! * `BoundedRemetrized(base)` — the same point set with d′ = d/(1 + d),
//!   which is bounded and uniformly equivalent to d.
//!
//! The first two kinds are "normed": they carry a norm and a nonnegative
//! scalar action, which the radial transforms in [`crate::transforms`]
//! require.

use crate::error::{Error, Result};
use serde::Serialize;

/// A point of one of the supported spaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Point {
    /// A point of R^n.
    Vector(Vec<f64>),
    /// A point t >= 0 of the half-line.
    HalfLine(f64),
    /// A point (t, n) with t in [0, 1] on fiber n >= 1.
    Fiber { fiber: u32, t: f64 },
}

impl Point {
    pub fn vector(coords: impl Into<Vec<f64>>) -> Self {
        let coords = coords.into();
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point::Vector(coords)
    }

    pub fn half_line(t: f64) -> Self {
        debug_assert!(t >= 0.0);
        Point::HalfLine(t)
    }

    pub fn fiber(fiber: u32, t: f64) -> Self {
        debug_assert!(fiber >= 1 && (0.0..=1.0).contains(&t));
        Point::Fiber { fiber, t }
    }

    /// Coordinates of a vector point, if this is one.
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(c) => Some(c),
            _ => None,
        }
    }

    /// The scalar coordinate: vector points report their first coordinate,
    /// half-line points their parameter, fiber points their in-fiber
    /// position.
    pub fn first_coord(&self) -> f64 {
        match self {
            Point::Vector(c) => c[0],
            Point::HalfLine(t) => *t,
            Point::Fiber { t, .. } => *t,
        }
    }
}

/// One of the supported metric spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Euclidean { dim: usize },
    HalfLine,
    IntervalFibers,
    BoundedRemetrized { base: Box<Space> },
}

impl Space {
    /// R^n. Errors on `dim == 0`.
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "Euclidean dimension must be >= 1".into(),
            ));
        }
        Ok(Space::Euclidean { dim })
    }

    pub fn half_line() -> Self {
        Space::HalfLine
    }

    pub fn interval_fibers() -> Self {
        Space::IntervalFibers
    }

    /// The same point set with distance d′ = d/(1 + d).
    pub fn bounded_remetrized(base: Space) -> Self {
        Space::BoundedRemetrized { base: Box::new(base) }
    }

    /// Short human-readable name, used in error messages and labels.
    pub fn name(&self) -> String {
        match self {
            Space::Euclidean { dim } => format!("R^{dim}"),
            Space::HalfLine => "half-line".into(),
            Space::IntervalFibers => "I x N".into(),
            Space::BoundedRemetrized { base } => format!("remetrized({})", base.name()),
        }
    }

    /// The distinguished point: the origin for normed kinds, (t=0, n=1)
    /// for the fiber space.
    pub fn base_point(&self) -> Point {
        match self {
            Space::Euclidean { dim } => Point::Vector(vec![0.0; *dim]),
            Space::HalfLine => Point::HalfLine(0.0),
            Space::IntervalFibers => Point::Fiber { fiber: 1, t: 0.0 },
            Space::BoundedRemetrized { base } => base.base_point(),
        }
    }

    /// The space whose geometry (norm, scalar action, dimension) drives
    /// sampling: remetrization changes distances but not points.
    pub fn geometry(&self) -> &Space {
        match self {
            Space::BoundedRemetrized { base } => base.geometry(),
            other => other,
        }
    }

    pub fn is_normed(&self) -> bool {
        matches!(self, Space::Euclidean { .. } | Space::HalfLine)
    }

    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match self {
            Space::Euclidean { .. } => match (x, y) {
                (Point::Vector(a), Point::Vector(b)) => {
                    debug_assert_eq!(a.len(), b.len());
                    a.iter()
                        .zip(b)
                        .map(|(u, v)| (u - v) * (u - v))
                        .sum::<f64>()
                        .sqrt()
                }
                _ => panic!("Euclidean distance needs vector points"),
            },
            Space::HalfLine => match (x, y) {
                (Point::HalfLine(s), Point::HalfLine(t)) => (s - t).abs(),
                _ => panic!("half-line distance needs half-line points"),
            },
            Space::IntervalFibers => match (x, y) {
                (Point::Fiber { fiber: n, t: s }, Point::Fiber { fiber: k, t }) => {
                    if n == k {
                        (s - t).abs()
                    } else {
                        1.0
                    }
                }
                _ => panic!("fiber distance needs fiber points"),
            },
            Space::BoundedRemetrized { base } => {
                let d = base.distance(x, y);
                d / (1.0 + d)
            }
        }
    }

    /// Norm of a point; only defined on normed kinds.
    pub fn norm(&self, x: &Point) -> Result<f64> {
        match self {
            Space::Euclidean { .. } | Space::HalfLine => {
                Ok(self.distance(x, &self.base_point()))
            }
            other => Err(Error::UnsupportedSpace {
                op: "norm",
                space: other.name(),
            }),
        }
    }

    /// Scalar action c · x for c >= 0; only defined on normed kinds.
    pub fn scale(&self, c: f64, x: &Point) -> Result<Point> {
        debug_assert!(c >= 0.0);
        match (self, x) {
            (Space::Euclidean { .. }, Point::Vector(a)) => {
                Ok(Point::Vector(a.iter().map(|v| c * v).collect()))
            }
            (Space::HalfLine, Point::HalfLine(t)) => Ok(Point::HalfLine(c * t)),
            (other, _) => Err(Error::UnsupportedSpace {
                op: "scalar action",
                space: other.name(),
            }),
        }
    }

    /// Euclidean dimension, when the geometry is Euclidean.
    pub fn dim(&self) -> Option<usize> {
        match self.geometry() {
            Space::Euclidean { dim } => Some(*dim),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_distance_is_absolute_difference_in_dim_1() {
        let space = Space::euclidean(1).unwrap();
        let d = space.distance(&Point::vector([3.0]), &Point::vector([-1.0]));
        assert_eq!(d, 4.0);
    }

    #[test]
    fn fiber_distance_matches_case_split() {
        let space = Space::interval_fibers();
        let same = space.distance(&Point::fiber(3, 0.2), &Point::fiber(3, 0.7));
        let cross = space.distance(&Point::fiber(3, 0.2), &Point::fiber(4, 0.2));
        assert!((same - 0.5).abs() <= f64::EPSILON);
        assert_eq!(cross, 1.0);
    }

    #[test]
    fn remetrized_distance_is_d_over_one_plus_d() {
        let space = Space::bounded_remetrized(Space::euclidean(1).unwrap());
        let d = space.distance(&Point::vector([0.0]), &Point::vector([3.0]));
        assert_eq!(d, 0.75);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(matches!(
            Space::euclidean(0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn base_points() {
        assert_eq!(
            Space::euclidean(2).unwrap().base_point(),
            Point::vector([0.0, 0.0])
        );
        assert_eq!(
            Space::interval_fibers().base_point(),
            Point::fiber(1, 0.0)
        );
    }

    #[test]
    fn norm_is_rejected_off_normed_kinds() {
        let fibers = Space::interval_fibers();
        assert!(fibers.norm(&Point::fiber(1, 0.5)).is_err());
        let rem = Space::bounded_remetrized(Space::euclidean(1).unwrap());
        assert!(rem.norm(&Point::vector([1.0])).is_err());
    }
}
