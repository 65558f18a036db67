//! Composite quadrature on uniform samples.

use serde::{Deserialize, Serialize};

use crate::interval::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Simpson,
    /// Used when the sample count is even; Simpson needs an odd count.
    Trapezoid,
}

/// Integral of uniformly spaced samples with step `h`, plus the rule used.
pub fn integrate_uniform(samples: &[f64], h: f64) -> (f64, Rule) {
    let n = samples.len();
    match n {
        0 | 1 => (0.0, Rule::Trapezoid),
        _ if n % 2 == 0 => {
            let inner: f64 = samples[1..n - 1].iter().sum();
            (h * (0.5 * (samples[0] + samples[n - 1]) + inner), Rule::Trapezoid)
        }
        _ => {
            let mut odd = 0.0;
            let mut even = 0.0;
            for (i, v) in samples.iter().enumerate().take(n - 1).skip(1) {
                if i % 2 == 1 {
                    odd += v;
                } else {
                    even += v;
                }
            }
            (h / 3.0 * (samples[0] + samples[n - 1] + 4.0 * odd + 2.0 * even), Rule::Simpson)
        }
    }
}

/// Composite Simpson integral of samples taken on every node of `grid`.
///
/// Falls back to the trapezoid rule for an even node count; use
/// [`integrate_uniform`] to see which rule was applied.
pub fn quadrature(samples: &[f64], grid: &Grid) -> f64 {
    debug_assert_eq!(samples.len(), grid.n_points());
    integrate_uniform(samples, grid.spacing()).0
}

/// Composite Simpson integral of a function on `[a, b]` with `intervals`
/// subintervals (rounded up to even).
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals.max(2);
    let m = m + m % 2;
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}
