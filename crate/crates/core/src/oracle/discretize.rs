//! Symmetric three-point discretizations of the two kinetic forms.
//!
//! Both operators are instances of
//! `-1/2 (a d/dx b d/dx c + c d/dx b d/dx a)` with `a`, `c` sampled on nodes
//! and `b` on midpoints. The deformed form is `a = c = sqrt f`, `b = f`.

use crate::deforming::DeformingFunction;
use crate::error::{Error, Result};
use crate::interval::Grid;
use crate::oracle::tridiag::TridiagonalOperator;

/// Node and midpoint coefficient samples of the symmetric kinetic kernel.
#[derive(Debug, Clone)]
pub(crate) struct Kernel {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    h: f64,
}

const OVERFLOW_GUARD: f64 = 1e150;

fn positive(x: f64, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonPositive { x, f: v })
    }
}

impl Kernel {
    pub(crate) fn deformed(df: &DeformingFunction, grid: &Grid) -> Result<Self> {
        let n = grid.n_points();
        let mut a = Vec::with_capacity(n);
        for x in grid.nodes() {
            a.push(positive(x, df.f_raw(x))?.sqrt());
        }
        let mut b = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let x = grid.midpoint(i);
            b.push(positive(x, df.f_raw(x))?);
        }
        Ok(Self { c: a.clone(), a, b, h: grid.spacing() })
    }

    pub(crate) fn von_roos(
        mass: &dyn Fn(f64) -> f64,
        primed: [f64; 3],
        grid: &Grid,
    ) -> Result<Self> {
        let sum: f64 = primed.iter().sum();
        if (sum + 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("mass exponents sum to {sum}, expected -1")));
        }
        let [xp, ep, zp] = primed;
        let n = grid.n_points();
        let (mut a, mut c) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for x in grid.nodes() {
            let m = positive(x, mass(x))?;
            a.push(m.powf(xp));
            c.push(m.powf(zp));
        }
        let mut b = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let x = grid.midpoint(i);
            b.push(positive(x, mass(x))?.powf(ep));
        }
        Ok(Self { a, b, c, h: grid.spacing() })
    }

    /// Diagonal coefficient at node `j` (interior).
    fn diag(&self, j: usize) -> f64 {
        self.a[j] * self.c[j] * (self.b[j] + self.b[j - 1]) / (self.h * self.h)
    }

    /// Coupling between nodes `j` and `j + 1`.
    fn off(&self, j: usize) -> f64 {
        -0.5 * (self.a[j] * self.c[j + 1] + self.c[j] * self.a[j + 1]) * self.b[j] / (self.h * self.h)
    }

    /// Kinetic action at interior nodes, using boundary samples of `psi`.
    pub(crate) fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        (1..n - 1)
            .map(|j| self.diag(j) * psi[j] + self.off(j - 1) * psi[j - 1] + self.off(j) * psi[j + 1])
            .collect()
    }

    fn into_operator(self, v: &dyn Fn(f64) -> f64, grid: &Grid) -> Result<TridiagonalOperator> {
        let n = grid.n_points();
        let mut diag = Vec::with_capacity(n - 2);
        for j in 1..n - 1 {
            let x = grid.node(j);
            let vj = v(x);
            if !vj.is_finite() || vj.abs() > OVERFLOW_GUARD {
                return Err(Error::SingularPotential { x, value: vj });
            }
            diag.push(self.diag(j) + vj);
        }
        let off = (1..n - 2).map(|j| self.off(j)).collect();
        TridiagonalOperator::new(diag, off, *grid)
    }
}

/// `H = -(sqrt f d/dx sqrt f)^2 + V_eff` on the interior nodes of `grid`.
pub fn discretize_deformed(
    df: &DeformingFunction,
    v_eff: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    Kernel::deformed(df, grid)?.into_operator(v_eff, grid)
}

/// Symmetrized von Roos kinetic term with mass `M` and primed exponents,
/// plus `V`, on the interior nodes of `grid`.
pub fn discretize_vonroos(
    mass: &dyn Fn(f64) -> f64,
    primed: [f64; 3],
    v: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<TridiagonalOperator> {
    Kernel::von_roos(mass, primed, grid)?.into_operator(v, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::oracle::tridiag::eigenpairs;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constant_mass_box() {
        let grid = Grid::new(-FRAC_PI_2, FRAC_PI_2, 2001).unwrap();
        let df = DeformingFunction::constant(grid.interval());
        let op = discretize_deformed(&df, &|_| 0.0, &grid).unwrap();
        let s = eigenpairs(&op, 3, false).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((e - exact).abs() < 1e-4 * exact);
        }
    }

    #[test]
    fn constant_mass_forms_coincide() {
        let grid = Grid::new(0.0, 2.0, 51).unwrap();
        let df = DeformingFunction::constant(Interval::bounded(0.0, 2.0).unwrap());
        let v = |x: f64| x * x;
        let d = discretize_deformed(&df, &v, &grid).unwrap();
        for p in crate::ambiguity::Preset::ALL {
            let r = discretize_vonroos(&|_| 1.0, p.params().mass_exponents(), &v, &grid).unwrap();
            assert_eq!(d, r);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let grid = Grid::new(-10.0, 10.0, 4001).unwrap();
        let df = DeformingFunction::constant(Interval::real_line());
        let op = discretize_deformed(&df, &|x| x * x, &grid).unwrap();
        let e0 = eigenpairs(&op, 1, false).unwrap().eigenvalues[0];
        assert!((e0 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_exponents() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let err = discretize_vonroos(&|_| 1.0, [0.0, 0.0, 0.0], &|_| 0.0, &grid);
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn singular_potential_is_reported() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let df = DeformingFunction::constant(Interval::bounded(0.0, 1.0).unwrap());
        let err = discretize_deformed(&df, &|x| 1.0 / (x - 0.5), &grid);
        assert!(matches!(err, Err(Error::SingularPotential { .. })));
    }
}
