//! Symmetric tridiagonal operators and their lowest eigenpairs.
//!
//! Eigenvalues come from bisection on the Sturm count (number of negative
//! pivots of the LDL^T factorization of `T - t I`); eigenvectors from a few
//! steps of inverse iteration with a pivoted tridiagonal LU solve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Grid;
use crate::oracle::quadrature::quadrature;

/// Dirichlet-truncated operator on the interior nodes of `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    off: Vec<f64>,
    grid: Grid,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, grid: Grid) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Parameter(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        if diag.len() != grid.n_points() - 2 {
            return Err(Error::Parameter("operator size must equal the interior node count".into()));
        }
        Ok(Self { diag, off, grid })
    }

    /// Bare matrix with a nominal unit-spaced grid.
    pub fn from_matrix(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        let grid = Grid::new(0.0, (n + 1) as f64, n + 2)?;
        Self::new(diag, off, grid)
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let r = if i < self.off.len() { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let r = if i < self.off.len() { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - l - r);
            hi = hi.max(self.diag[i] + l + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `t`.
    pub fn sturm_count(&self, t: f64) -> usize {
        let guard = f64::EPSILON * self.norm_inf().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - t;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - t - e * e / q;
            }
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bisect(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        loop {
            let mid = 0.5 * (lo + hi);
            if !mid.is_finite() || hi - lo <= 1e-12 * mid.abs().max(1.0) || mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Solves `(T - shift I) x = b` by LU with partial pivoting.
    fn shifted_solve(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_inf().max(1.0);
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du = self.off.clone();
        let mut dl = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut x = b.to_vec();
        // forward elimination (dgttrf/dgtts2 layout)
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let m = dl[i] / d[i];
                dl[i] = m;
                d[i + 1] -= m * du[i];
                x[i + 1] -= m * x[i];
            } else {
                let m = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = m;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - m * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -m * du[i + 1];
                }
                x.swap(i, i + 1);
                x[i + 1] -= m * x[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        // back substitution
        x[n - 1] /= d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    /// Iterates until the residual stops shrinking, at most 5 steps; fails
    /// unless the last residual is below `1e-8 ||T||`.
    fn inverse_iteration(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.dim();
        let scale = self.norm_inf().max(1.0);
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i as f64) * 0.7).sin()).collect();
        let mut residual = f64::INFINITY;
        for _ in 0..5 {
            let mut w = self.shifted_solve(shift, &v);
            let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::Convergence(format!("breakdown at eigenvalue {lambda}")));
            }
            w.iter_mut().for_each(|a| *a /= norm);
            let tw = self.apply(&w);
            let r = tw.iter().zip(&w).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            let stalled = r > 0.5 * residual;
            v = w;
            residual = residual.min(r);
            if stalled && residual < 1e-8 * scale {
                return Ok(v);
            }
        }
        if residual < 1e-8 * scale {
            return Ok(v);
        }
        Err(Error::Convergence(format!(
            "residual {residual:e} above {:e} at eigenvalue {lambda}",
            1e-8 * scale
        )))
    }
}

/// Truncation and resolution behind a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub x1: f64,
    pub x2: f64,
    pub n_points: usize,
    pub spacing: f64,
}

impl From<&Grid> for GridMeta {
    fn from(g: &Grid) -> Self {
        Self { x1: g.x1(), x2: g.x2(), n_points: g.n_points(), spacing: g.spacing() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Samples on every grid node (zero at the two boundary nodes),
    /// orthonormal under the quadrature rule.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub grid_meta: GridMeta,
}

/// The `k` lowest eigenvalues of `op`, with eigenvectors when asked.
pub fn eigenpairs(op: &TridiagonalOperator, k: usize, want_vectors: bool) -> Result<Spectrum> {
    let n = op.dim();
    if k > n {
        return Err(Error::Parameter(format!("asked for {k} eigenvalues of a {n}x{n} operator")));
    }
    let (mut lo, mut hi) = op.gershgorin();
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Convergence("operator entries overflow the spectral bounds".into()));
    }
    let pad = 1e-10 * lo.abs().max(hi.abs()).max(1.0);
    lo -= pad;
    hi += pad;
    let mut eigenvalues = Vec::with_capacity(k);
    for j in 0..k {
        let start = eigenvalues.last().copied().unwrap_or(lo).max(lo);
        eigenvalues.push(op.bisect(j, start, hi));
    }
    let eigenvectors = if want_vectors {
        let grid = *op.grid();
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
        for &lambda in &eigenvalues {
            let v = op.inverse_iteration(lambda)?;
            let mut full = Vec::with_capacity(n + 2);
            full.push(0.0);
            full.extend_from_slice(&v);
            full.push(0.0);
            let dot = |a: &[f64], b: &[f64]| {
                let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
                quadrature(&prod, &grid)
            };
            for prev in &vecs {
                let c = dot(&full, prev) / dot(prev, prev);
                full.iter_mut().zip(prev).for_each(|(a, b)| *a -= c * b);
            }
            let norm = dot(&full, &full).sqrt();
            let peak = full.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let sign = full
                .iter()
                .find(|a| a.abs() > 1e-3 * peak)
                .map(|a| a.signum())
                .unwrap_or(1.0);
            full.iter_mut().for_each(|a| *a *= sign / norm);
            vecs.push(full);
        }
        Some(vecs)
    } else {
        None
    };
    Ok(Spectrum { eigenvalues, eigenvectors, grid_meta: op.grid().into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let op = TridiagonalOperator::from_matrix(vec![2.0, 2.0], vec![1.0]).unwrap();
        let s = eigenpairs(&op, 2, true).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-12);
        let v = &s.eigenvectors.unwrap()[0];
        assert!((v[1] + v[2]).abs() < 1e-8);
    }

    #[test]
    fn toeplitz_second_difference() {
        let n = 999;
        let h = std::f64::consts::PI / (n + 1) as f64;
        let grid = Grid::new(0.0, std::f64::consts::PI, n + 2).unwrap();
        let op = TridiagonalOperator::new(
            vec![2.0 / (h * h); n],
            vec![-1.0 / (h * h); n - 1],
            grid,
        )
        .unwrap();
        let s = eigenpairs(&op, 5, false).unwrap();
        for (j, e) in s.eigenvalues.iter().enumerate() {
            let k = (j + 1) as f64;
            let exact = (2.0 - 2.0 * (k * std::f64::consts::PI / (n + 1) as f64).cos()) / (h * h);
            assert!((e - exact).abs() < 1e-9 * exact, "{e} vs {exact}");
            assert!((e - k * k).abs() < k.powi(4) * h * h / 12.0 * 1.01 + 1e-12);
        }
    }

    #[test]
    fn sturm_count_is_monotone() {
        let op = TridiagonalOperator::from_matrix(
            vec![1.0, -2.0, 3.0, 0.5, 4.0],
            vec![0.3, -1.0, 0.7, 2.0],
        )
        .unwrap();
        let mut prev = 0;
        for i in 0..400 {
            let t = -6.0 + 0.03 * i as f64;
            let c = op.sturm_count(t);
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(op.sturm_count(100.0), 5);
    }

    #[test]
    fn too_many_levels() {
        let op = TridiagonalOperator::from_matrix(vec![1.0], vec![]).unwrap();
        assert!(eigenpairs(&op, 2, false).is_err());
    }
}
