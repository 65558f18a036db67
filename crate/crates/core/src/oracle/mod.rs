//! Independent finite-difference verification engine.

pub mod discretize;
pub mod quadrature;
pub mod tridiag;

pub use discretize::{discretize_deformed, discretize_vonroos};
pub use quadrature::{integrate_uniform, quadrature, simpson_fn, Rule};
pub use tridiag::{eigenpairs, GridMeta, Spectrum, TridiagonalOperator};

use crate::ambiguity::AmbiguityParams;
use crate::deforming::DeformingFunction;
use crate::error::Result;
use crate::interval::Grid;
use crate::ordering::{deformed_kinetic_apply, v_tilde_eval, vonroos_apply, OrderingContext};

/// Smooth test functions used by [`equivalence_check`], scaled to the grid.
pub fn test_battery(grid: &Grid) -> Vec<Vec<f64>> {
    let (a, b) = (grid.x1(), grid.x2());
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let bump = |x: f64| (-((x - mid) / (0.4 * half)).powi(2)).exp();
    let window = |x: f64| {
        let t = (x - a) / (b - a) * std::f64::consts::PI;
        (2.0 * t).sin() * t.sin()
    };
    vec![
        grid.nodes().into_iter().map(bump).collect(),
        grid.nodes().into_iter().map(window).collect(),
    ]
}

/// Largest pointwise gap between the von Roos form on `V` and the deformed
/// form on `V + V~`, over the battery and the interior nodes that are at
/// least two steps from either end.
pub fn equivalence_check(
    df: &DeformingFunction,
    amb: &AmbiguityParams,
    v: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<f64> {
    let ctx = OrderingContext::new(*df, *amb);
    let mass = ctx.mass_field();
    let primed = amb.mass_exponents();
    let nodes = grid.nodes();
    let n = nodes.len();
    let mut extra = vec![0.0; n];
    for j in 2..n - 2 {
        extra[j] = v_tilde_eval(&ctx, nodes[j])?;
    }
    let mut worst = 0.0f64;
    for psi in test_battery(grid) {
        let lhs = vonroos_apply(&mass, primed, &psi, grid)?;
        let rhs = deformed_kinetic_apply(df, &psi, grid)?;
        for j in 2..n - 2 {
            let vj = v(nodes[j]);
            let a = lhs[j - 1] + vj * psi[j];
            let b = rhs[j - 1] + (vj + extra[j]) * psi[j];
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}
