//! Deforming functions `f(x) = 1 + g(x)` and the mass `M = 1/f^2`.
//!
//! Each family carries hand-coded first and second derivatives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Endpoint, Grid, Interval, Side};

/// Closed-form families of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `g = 0`.
    Constant,
    /// `g = alpha sin^2 x`.
    TrigSin2 { alpha: f64 },
    /// `g = alpha sinh^2 x`.
    HypSinh2 { alpha: f64 },
    /// `g = alpha x^2 + 2 beta x`.
    Quadratic { alpha: f64, beta: f64 },
    /// `g = alpha x`.
    Linear { alpha: f64 },
    /// `g = alpha e^{-x}`.
    Exponential { alpha: f64 },
    /// `g = alpha e^{-x} sinh x`.
    EckartExp { alpha: f64 },
    /// `g = alpha sin x`.
    Sine { alpha: f64 },
    /// `g = sin x (alpha cos x + beta sin x)`.
    SinCos { alpha: f64, beta: f64 },
}

/// Behaviour of `f` when approaching an end of its domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndLimit {
    /// Tends to a finite positive constant.
    Finite(f64),
    /// Tends to zero.
    Vanishing,
    /// Grows without bound.
    Divergent,
    /// Has no limit.
    Oscillating,
}

/// `f`, its derivatives, `g` and `M` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSample {
    pub f: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub g: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformingFunction {
    family: Family,
    domain: Interval,
}

impl DeformingFunction {
    pub fn new(family: Family, domain: Interval) -> Self {
        Self { family, domain }
    }

    pub fn constant(domain: Interval) -> Self {
        Self::new(Family::Constant, domain)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Deformation parameters keyed by name.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self.family {
            Family::Constant => {}
            Family::TrigSin2 { alpha }
            | Family::HypSinh2 { alpha }
            | Family::Linear { alpha }
            | Family::Exponential { alpha }
            | Family::EckartExp { alpha }
            | Family::Sine { alpha } => {
                m.insert("alpha".into(), alpha);
            }
            Family::Quadratic { alpha, beta } | Family::SinCos { alpha, beta } => {
                m.insert("alpha".into(), alpha);
                m.insert("beta".into(), beta);
            }
        }
        m
    }

    /// `(g, g', g'')` without any domain check.
    pub(crate) fn raw(&self, x: f64) -> (f64, f64, f64) {
        match self.family {
            Family::Constant => (0.0, 0.0, 0.0),
            Family::TrigSin2 { alpha } => {
                let s = x.sin();
                (alpha * s * s, alpha * (2.0 * x).sin(), 2.0 * alpha * (2.0 * x).cos())
            }
            Family::HypSinh2 { alpha } => {
                let s = x.sinh();
                (alpha * s * s, alpha * (2.0 * x).sinh(), 2.0 * alpha * (2.0 * x).cosh())
            }
            Family::Quadratic { alpha, beta } => {
                (alpha * x * x + 2.0 * beta * x, 2.0 * alpha * x + 2.0 * beta, 2.0 * alpha)
            }
            Family::Linear { alpha } => (alpha * x, alpha, 0.0),
            Family::Exponential { alpha } => {
                let e = (-x).exp();
                (alpha * e, -alpha * e, alpha * e)
            }
            Family::EckartExp { alpha } => {
                // e^{-x} sinh x = (1 - e^{-2x}) / 2
                let e = (-2.0 * x).exp();
                (-0.5 * alpha * (e - 1.0), alpha * e, -2.0 * alpha * e)
            }
            Family::Sine { alpha } => (alpha * x.sin(), alpha * x.cos(), -alpha * x.sin()),
            Family::SinCos { alpha, beta } => {
                let (s2, c2) = (2.0 * x).sin_cos();
                (
                    0.5 * alpha * s2 + 0.5 * beta * (1.0 - c2),
                    alpha * c2 + beta * s2,
                    -2.0 * alpha * s2 + 2.0 * beta * c2,
                )
            }
        }
    }

    /// `f(x)` without a domain check; used for midpoints and dense sampling.
    pub(crate) fn f_raw(&self, x: f64) -> f64 {
        match self.family {
            Family::EckartExp { alpha } => (1.0 + 0.5 * alpha) - 0.5 * alpha * (-2.0 * x).exp(),
            _ => 1.0 + self.raw(x).0,
        }
    }

    /// Evaluates `f`, `f'`, `f''`, `g` and `M` at an interior point.
    pub fn eval(&self, x: f64) -> Result<MassSample> {
        self.domain.check(x)?;
        let (g, g1, g2) = self.raw(x);
        let f = self.f_raw(x);
        if f <= 0.0 || !f.is_finite() {
            return Err(Error::NonPositive { x, f });
        }
        Ok(MassSample { f, f_prime: g1, f_second: g2, g, mass: 1.0 / (f * f) })
    }

    pub fn f(&self, x: f64) -> Result<f64> {
        self.eval(x).map(|s| s.f)
    }

    /// Limit of `f` at one end of the domain.
    pub fn end_limit(&self, side: Side) -> EndLimit {
        let classify = |v: f64| {
            if v.abs() < 1e-14 {
                EndLimit::Vanishing
            } else {
                EndLimit::Finite(v)
            }
        };
        if let Endpoint::Finite(x) = self.domain.end(side) {
            return classify(self.f_raw(x));
        }
        match (self.family, side) {
            (Family::Constant, _) => EndLimit::Finite(1.0),
            (Family::TrigSin2 { .. } | Family::Sine { .. } | Family::SinCos { .. }, _) => {
                EndLimit::Oscillating
            }
            (Family::HypSinh2 { alpha } | Family::Linear { alpha }, _) if alpha == 0.0 => {
                EndLimit::Finite(1.0)
            }
            (Family::HypSinh2 { .. } | Family::Linear { .. }, _) => EndLimit::Divergent,
            (Family::Quadratic { alpha, beta }, _) if alpha == 0.0 && beta == 0.0 => {
                EndLimit::Finite(1.0)
            }
            (Family::Quadratic { .. }, _) => EndLimit::Divergent,
            (Family::Exponential { .. }, Side::Right) => EndLimit::Finite(1.0),
            (Family::Exponential { alpha }, Side::Left) => {
                if alpha == 0.0 {
                    EndLimit::Finite(1.0)
                } else {
                    EndLimit::Divergent
                }
            }
            (Family::EckartExp { alpha }, Side::Right) => classify(1.0 + 0.5 * alpha),
            (Family::EckartExp { alpha }, Side::Left) => {
                if alpha == 0.0 {
                    EndLimit::Finite(1.0)
                } else {
                    EndLimit::Divergent
                }
            }
        }
    }
}

/// Outcome of [`positivity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub ok: bool,
    pub min_f: f64,
    /// First node where `f <= 0`, with the sampled value.
    pub violation: Option<(f64, f64)>,
}

/// Samples `f` at every grid node.
pub fn positivity_check(df: &DeformingFunction, grid: &Grid) -> PositivityReport {
    let mut min_f = f64::INFINITY;
    let mut violation = None;
    for x in grid.nodes() {
        let f = df.f_raw(x);
        min_f = min_f.min(f);
        if violation.is_none() && !(f > 0.0) {
            violation = Some((x, f));
        }
    }
    PositivityReport { ok: violation.is_none(), min_f, violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn box_family(alpha: f64) -> DeformingFunction {
        DeformingFunction::new(
            Family::TrigSin2 { alpha },
            Interval::bounded(-FRAC_PI_2, FRAC_PI_2).unwrap(),
        )
    }

    #[test]
    fn box_family_values() {
        let df = box_family(0.5);
        let s = df.eval(0.0).unwrap();
        assert_eq!((s.f, s.mass), (1.0, 1.0));
        let s = df.eval(FRAC_PI_2 - 1e-12).unwrap();
        assert!((s.f - 1.5).abs() < 1e-12);
        assert!((s.mass - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn eckart_at_minus_two_is_pure_exponential() {
        let df = DeformingFunction::new(Family::EckartExp { alpha: -2.0 }, Interval::half_line(0.0));
        for x in [0.1, 0.7, 3.0, 10.0] {
            let f = df.f(x).unwrap();
            assert!((f / (-2.0 * x).exp() - 1.0).abs() < 1e-9, "x = {x}");
        }
        assert_eq!(df.end_limit(Side::Right), EndLimit::Vanishing);
    }

    #[test]
    fn domain_and_positivity_errors() {
        let df = box_family(0.5);
        assert!(matches!(df.eval(2.0), Err(Error::Domain { .. })));
        let bad = box_family(-1.5);
        assert!(matches!(bad.eval(1.5), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn positivity_sampling() {
        let grid = Grid::new(-FRAC_PI_2, FRAC_PI_2, 1001).unwrap();
        let r = positivity_check(&box_family(0.5), &grid);
        assert!(r.ok);
        assert!((r.min_f - 1.0).abs() < 1e-12);

        let r = positivity_check(&box_family(-1.5), &grid);
        assert!(!r.ok);
        let (x, f) = r.violation.unwrap();
        assert!(f <= 0.0);
        // 1 - 1.5 sin^2 x = 0 at sin^2 x = 2/3
        assert!(x.sin().powi(2) >= 2.0 / 3.0 - 1e-3);

        let r = positivity_check(&DeformingFunction::constant(grid.interval()), &grid);
        assert!(r.ok);
        assert_eq!(r.min_f, 1.0);
    }

    #[test]
    fn zero_parameters_give_constant_mass() {
        let d = Interval::bounded(0.1, 3.0).unwrap();
        for fam in [
            Family::TrigSin2 { alpha: 0.0 },
            Family::HypSinh2 { alpha: 0.0 },
            Family::Quadratic { alpha: 0.0, beta: 0.0 },
            Family::Linear { alpha: 0.0 },
            Family::Exponential { alpha: 0.0 },
            Family::EckartExp { alpha: 0.0 },
            Family::Sine { alpha: 0.0 },
            Family::SinCos { alpha: 0.0, beta: 0.0 },
        ] {
            let s = DeformingFunction::new(fam, d).eval(FRAC_PI_4).unwrap();
            assert_eq!((s.g, s.f_prime, s.f_second, s.mass), (0.0, 0.0, 0.0, 1.0), "{fam:?}");
        }
    }
}
