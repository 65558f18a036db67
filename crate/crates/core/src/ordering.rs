//! From the von Roos kinetic term to the deformed operator.
//!
//! `-1/2 (M^xi' d M^eta' d M^zeta' + M^zeta' d M^eta' d M^xi')` equals
//! `-sqrt f d f d sqrt f + V~` with `V~ = rho f f'' + sigma f'^2`.

use crate::ambiguity::AmbiguityParams;
use crate::deforming::DeformingFunction;
use crate::error::{Error, Result};
use crate::interval::Grid;
use crate::oracle::discretize::Kernel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingContext {
    pub df: DeformingFunction,
    pub amb: AmbiguityParams,
}

impl OrderingContext {
    pub fn new(df: DeformingFunction, amb: AmbiguityParams) -> Self {
        Self { df, amb }
    }

    /// The mass `M = 1/f^2` as a plain field, unchecked.
    pub fn mass_field(&self) -> impl Fn(f64) -> f64 + '_ {
        |x| {
            let f = self.df.f_raw(x);
            1.0 / (f * f)
        }
    }
}

/// `V~(x) = rho f f'' + sigma f'^2`.
pub fn v_tilde_eval(ctx: &OrderingContext, x: f64) -> Result<f64> {
    let s = ctx.df.eval(x)?;
    Ok(ctx.amb.rho() * s.f * s.f_second + ctx.amb.sigma() * s.f_prime * s.f_prime)
}

/// `V(a; x) = V_eff(x) - V~(x)`.
pub fn recover_initial_potential(
    ctx: &OrderingContext,
    v_eff: &dyn Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    Ok(v_eff(x) - v_tilde_eval(ctx, x)?)
}

fn check_samples(psi: &[f64], grid: &Grid) -> Result<()> {
    if psi.len() != grid.n_points() {
        return Err(Error::Parameter(format!(
            "{} samples on a {}-node grid",
            psi.len(),
            grid.n_points()
        )));
    }
    Ok(())
}

/// Discrete von Roos kinetic action on `psi`, at the interior nodes.
pub fn vonroos_apply(
    mass: &dyn Fn(f64) -> f64,
    primed: [f64; 3],
    psi: &[f64],
    grid: &Grid,
) -> Result<Vec<f64>> {
    check_samples(psi, grid)?;
    Ok(Kernel::von_roos(mass, primed, grid)?.apply(psi))
}

/// Discrete `-(sqrt f d/dx sqrt f)^2` action on `psi`, at the interior nodes.
pub fn deformed_kinetic_apply(
    df: &DeformingFunction,
    psi: &[f64],
    grid: &Grid,
) -> Result<Vec<f64>> {
    check_samples(psi, grid)?;
    Ok(Kernel::deformed(df, grid)?.apply(psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambiguity::Preset;
    use crate::deforming::Family;
    use crate::interval::Interval;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn box_ctx(alpha: f64, amb: AmbiguityParams) -> OrderingContext {
        let d = Interval::bounded(-FRAC_PI_2, FRAC_PI_2).unwrap();
        OrderingContext::new(DeformingFunction::new(Family::TrigSin2 { alpha }, d), amb)
    }

    #[test]
    fn lk_box_value() {
        let v = v_tilde_eval(&box_ctx(0.5, AmbiguityParams::lk()), FRAC_PI_4).unwrap();
        assert!((v + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn shifted_oscillator_origin() {
        let (alpha, beta) = (0.3, 0.2);
        let df = DeformingFunction::new(Family::Quadratic { alpha, beta }, Interval::real_line());
        for p in Preset::ALL {
            let amb = p.params();
            let v = v_tilde_eval(&OrderingContext::new(df, amb), 0.0).unwrap();
            let want = 2.0 * amb.rho() * alpha + 4.0 * amb.sigma() * beta * beta;
            assert!((v - want).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_mass_has_no_extra_term() {
        for p in Preset::ALL {
            let ctx = box_ctx(0.0, p.params());
            for x in [-1.2, 0.0, 0.4, 1.5] {
                assert_eq!(v_tilde_eval(&ctx, x).unwrap(), 0.0);
                assert_eq!(recover_initial_potential(&ctx, &|x| x * x, x).unwrap(), x * x);
            }
        }
    }

    #[test]
    fn round_trip() {
        let ctx = box_ctx(0.7, AmbiguityParams::zk());
        let v_eff = |x: f64| 3.0 * x.cos();
        for x in [-1.0, 0.2, 1.3] {
            let v = recover_initial_potential(&ctx, &v_eff, x).unwrap();
            assert!((v + v_tilde_eval(&ctx, x).unwrap() - v_eff(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_mass_is_second_derivative() {
        let grid = Grid::new(-FRAC_PI_2, FRAC_PI_2, 2001).unwrap();
        let k = 3.0;
        let psi: Vec<f64> = grid.nodes().iter().map(|x| (k * x).sin()).collect();
        let out = vonroos_apply(&|_| 1.0, [0.0, -1.0, 0.0], &psi, &grid).unwrap();
        let h = grid.spacing();
        for (j, v) in out.iter().enumerate() {
            let x = grid.node(j + 1);
            assert!((v - k * k * (k * x).sin()).abs() < k.powi(4) * h * h);
        }
    }

    #[test]
    fn exponent_sum_is_enforced() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let psi = vec![0.0; 11];
        assert!(vonroos_apply(&|_| 1.0, [0.1, -1.0, 0.0], &psi, &grid).is_err());
        assert!(vonroos_apply(&|_| 1.0, [0.0, -1.0, 0.0], &psi[..5], &grid).is_err());
    }
}
