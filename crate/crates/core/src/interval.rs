//! Intervals of definition and uniform grids.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One end of an interval. Unbounded ends are an explicit marker, never a
/// large float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Finite(f64),
    Unbounded,
}

impl Endpoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            Endpoint::Finite(x) => Some(x),
            Endpoint::Unbounded => None,
        }
    }
}

/// Which end of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Open interval `(x1, x2)` on which a potential is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    left: Endpoint,
    right: Endpoint,
}

impl Interval {
    pub fn new(left: Endpoint, right: Endpoint) -> Result<Self> {
        for e in [left, right] {
            if let Endpoint::Finite(x) = e {
                if !x.is_finite() {
                    return Err(Error::Parameter(format!(
                        "interval ends must be finite numbers or unbounded, got {x}"
                    )));
                }
            }
        }
        if let (Endpoint::Finite(a), Endpoint::Finite(b)) = (left, right) {
            if a >= b {
                return Err(Error::Parameter(format!("empty interval ({a}, {b})")));
            }
        }
        Ok(Self { left, right })
    }

    pub fn bounded(a: f64, b: f64) -> Result<Self> {
        Self::new(Endpoint::Finite(a), Endpoint::Finite(b))
    }

    pub fn half_line(a: f64) -> Self {
        Self { left: Endpoint::Finite(a), right: Endpoint::Unbounded }
    }

    pub fn real_line() -> Self {
        Self { left: Endpoint::Unbounded, right: Endpoint::Unbounded }
    }

    pub fn left(&self) -> Endpoint {
        self.left
    }

    pub fn right(&self) -> Endpoint {
        self.right
    }

    pub fn end(&self, side: Side) -> Endpoint {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.left.finite().is_some() && self.right.finite().is_some()
    }

    /// True when `x` lies strictly inside.
    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let above = match self.left {
            Endpoint::Finite(a) => x > a,
            Endpoint::Unbounded => true,
        };
        let below = match self.right {
            Endpoint::Finite(b) => x < b,
            Endpoint::Unbounded => true,
        };
        above && below
    }

    pub(crate) fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain { x, domain: self.to_string() })
        }
    }

    /// Reference point used to pin integration constants: the midpoint of a
    /// bounded interval, `a + 1` on a half-line, `0` on the real line.
    pub fn reference_point(&self) -> f64 {
        match (self.left, self.right) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => 0.5 * (a + b),
            (Endpoint::Finite(a), Endpoint::Unbounded) => a + 1.0,
            (Endpoint::Unbounded, Endpoint::Finite(b)) => b - 1.0,
            (Endpoint::Unbounded, Endpoint::Unbounded) => 0.0,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.left {
            Endpoint::Finite(a) => write!(f, "({a}, ")?,
            Endpoint::Unbounded => write!(f, "(-inf, ")?,
        }
        match self.right {
            Endpoint::Finite(b) => write!(f, "{b})"),
            Endpoint::Unbounded => write!(f, "+inf)"),
        }
    }
}

/// Uniform grid on a bounded (possibly truncated) interval, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x1: f64,
    x2: f64,
    n_points: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(x1: f64, x2: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::Parameter(format!("grid needs at least 3 points, got {n_points}")));
        }
        if !(x1.is_finite() && x2.is_finite() && x1 < x2) {
            return Err(Error::Parameter(format!("invalid grid bounds [{x1}, {x2}]")));
        }
        let spacing = (x2 - x1) / (n_points - 1) as f64;
        Ok(Self { x1, x2, n_points, spacing })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Node `i`; the last node is pinned to `x2` exactly.
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x2
        } else {
            self.x1 + i as f64 * self.spacing
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Nodes `1..n_points-1`, i.e. the unknowns of a Dirichlet problem.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..self.n_points - 1).map(|i| self.node(i)).collect()
    }

    /// Midpoint between node `i` and node `i + 1`.
    pub fn midpoint(&self, i: usize) -> f64 {
        self.x1 + (i as f64 + 0.5) * self.spacing
    }

    pub fn interval(&self) -> Interval {
        Interval { left: Endpoint::Finite(self.x1), right: Endpoint::Finite(self.x2) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reversed_interval() {
        assert!(Interval::bounded(1.0, 0.0).is_err());
        assert!(Interval::bounded(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn contains_is_open() {
        let i = Interval::bounded(0.0, 1.0).unwrap();
        assert!(!i.contains(0.0));
        assert!(i.contains(0.5));
        assert!(Interval::half_line(0.0).contains(1e300));
        assert!(!Interval::real_line().contains(f64::NAN));
    }

    #[test]
    fn grid_spacing_is_exact() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.interior_nodes().len(), 3);
        assert!(Grid::new(0.0, 1.0, 2).is_err());
    }
}
