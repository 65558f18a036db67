//! Closed antiderivatives of `W / f` in the base-function variable.
//!
//! Logarithms of `y - r` at real roots `r` go through [`Var`], so a base
//! function that saturates onto a root keeps its precision.

use crate::si_engine::{BaseFunction, ClassId, SuperpotentialClass};

/// The integration variable `y`, with accurate `ln |y - r|` and `y - r`.
pub(crate) trait Var {
    fn y(&self) -> f64;

    fn ln_dist(&self, r: f64) -> f64 {
        (self.y() - r).abs().ln()
    }

    fn diff(&self, r: f64) -> f64 {
        self.y() - r
    }
}

impl Var for f64 {
    fn y(&self) -> f64 {
        *self
    }
}

/// `y = phi(x)` for a base function `phi`.
pub(crate) struct OnBase {
    pub phi: BaseFunction,
    pub x: f64,
}

impl Var for OnBase {
    fn y(&self) -> f64 {
        self.phi.value(self.x)
    }

    fn ln_dist(&self, r: f64) -> f64 {
        self.phi.ln_abs_minus(self.x, r)
    }

    fn diff(&self, r: f64) -> f64 {
        self.phi.minus(self.x, r)
    }
}

/// Real roots of `a y^2 + b y + c` (`a != 0`), computed without cancellation,
/// as `(root of t - r, root of t + r)` with `t = 2 a y + b`, `r = sqrt(disc)`.
fn roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return None;
    }
    let r = disc.sqrt();
    let q = -0.5 * (b + b.signum() * r);
    let (r1, r2) = (q / a, c / q);
    Some(if b >= 0.0 { (r2, r1) } else { (r1, r2) })
}

/// `ln |a y^2 + b y + c|`.
fn ln_abs_quadratic(a: f64, b: f64, c: f64, v: &impl Var) -> f64 {
    if a == 0.0 {
        if b == 0.0 {
            return c.abs().ln();
        }
        return b.abs().ln() + v.ln_dist(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc == 0.0 {
        return a.abs().ln() + 2.0 * v.ln_dist(-b / (2.0 * a));
    }
    match roots(a, b, c) {
        Some((p, m)) => a.abs().ln() + v.ln_dist(p) + v.ln_dist(m),
        None => {
            let y = v.y();
            ((a * y + b) * y + c).abs().ln()
        }
    }
}

/// `int dy / (a y^2 + b y + c)`.
fn inv_quadratic(a: f64, b: f64, c: f64, v: &impl Var) -> f64 {
    let y = v.y();
    if a == 0.0 {
        if b == 0.0 {
            return y / c;
        }
        return (b.abs().ln() + v.ln_dist(-c / b)) / b;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        let r = (-disc).sqrt();
        2.0 / r * ((2.0 * a * y + b) / r).atan()
    } else if let Some((plus, minus)) = roots(a, b, c) {
        (v.ln_dist(plus) - v.ln_dist(minus)) / disc.sqrt()
    } else {
        -1.0 / (a * v.diff(-b / (2.0 * a)))
    }
}

/// `int (lambda y + mu) / (a y^2 + b y + c) dy`.
fn class1(a: f64, b: f64, c: f64, lambda: f64, mu: f64, v: &impl Var) -> f64 {
    let y = v.y();
    if a != 0.0 {
        lambda / (2.0 * a) * ln_abs_quadratic(a, b, c, v)
            + (mu - lambda * b / (2.0 * a)) * inv_quadratic(a, b, c, v)
    } else if b != 0.0 {
        lambda / b * y + (mu - lambda * c / b) * (b.abs().ln() + v.ln_dist(-c / b)) / b
    } else {
        (0.5 * lambda * y * y + mu * y) / c
    }
}

/// `ln |a y^2 + b|`.
fn ln_abs_binomial(a: f64, b: f64, v: &impl Var) -> f64 {
    ln_abs_quadratic(a, 0.0, b, v)
}

/// `int (lambda y^2 + mu) / (y (a y^2 + b)) dy`, via `u = y^2`.
fn class2(a: f64, b: f64, lambda: f64, mu: f64, v: &impl Var) -> f64 {
    let ln_u = 2.0 * v.ln_dist(0.0);
    let u = v.y() * v.y();
    let half = match (a == 0.0, b == 0.0) {
        (false, false) => mu / b * ln_u + (lambda * b - mu * a) / (a * b) * ln_abs_binomial(a, b, v),
        (false, true) => lambda / a * ln_u - mu / (a * u),
        (true, false) => lambda * u / b + mu / b * ln_u,
        (true, true) => f64::NAN,
    };
    0.5 * half
}

/// `int dy / (a y^2 + b)` with `a, b != 0`.
fn inv_binomial(a: f64, b: f64, v: &impl Var) -> f64 {
    let ab = a * b;
    if ab > 0.0 {
        (v.y() * (a / b).sqrt()).atan() / ab.sqrt() * b.signum()
    } else {
        let r = (-ab).sqrt();
        let s = (-b / a).sqrt();
        let ratio = v.ln_dist(-s) - v.ln_dist(s);
        if b > 0.0 {
            ratio / (2.0 * r)
        } else {
            -ratio / (2.0 * r)
        }
    }
}

/// `int (lambda y + mu) / ((a y^2 + b)(c y + d)) dy`.
fn class3(a: f64, b: f64, c: f64, d: f64, lambda: f64, mu: f64, v: &impl Var) -> f64 {
    let p = (lambda * d - c * mu) / (d * d + c * c * b / a);
    let s = -p * c / a;
    let r = (mu - s * b) / d;
    let mut out = p / (2.0 * a) * ln_abs_binomial(a, b, v) + r * inv_binomial(a, b, v);
    if c != 0.0 {
        out += s / c * (c.abs().ln() + v.ln_dist(-d / c));
    }
    out
}

/// `F` with `dF/dx = W(lambda, mu; x) / f(x)`, as a function of `y = phi(x)`.
pub(crate) fn w_over_f(sp: &SuperpotentialClass, lambda: f64, mu: f64, v: &impl Var) -> f64 {
    let h = sp.hatted();
    match sp.class_id {
        ClassId::Class1 => class1(h.a, h.b, h.c, lambda, mu, v),
        ClassId::Class2 => class2(h.a, h.b, lambda, mu, v),
        ClassId::Class3 => class3(sp.consts.a, sp.consts.b, h.c, h.d, lambda, mu, v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(integrand: impl Fn(f64) -> f64, prim: impl Fn(f64) -> f64, ys: &[f64]) {
        let h = 1e-5;
        for &y in ys {
            let d = (prim(y + h) - prim(y - h)) / (2.0 * h);
            let want = integrand(y);
            assert!((d - want).abs() < 1e-6 * want.abs().max(1.0), "y = {y}: {d} vs {want}");
        }
    }

    #[test]
    fn quadratic_cases() {
        let ys = [-2.3, -0.4, 0.3, 1.7];
        for (a, b, c) in [(1.5, 0.0, 1.0), (-1.0, 0.3, 2.0), (0.5, 3.0, 1.0), (1.0, 2.0, 1.0), (0.0, 2.0, 7.0), (0.0, 0.0, 2.0)] {
            let (l, m) = (0.7, -1.3);
            check(
                |y| (l * y + m) / ((a * y + b) * y + c),
                |y| class1(a, b, c, l, m, &y),
                &ys,
            );
        }
    }

    #[test]
    fn binomial_cases() {
        for (a, b, ys) in [
            (-1.0, 1.0, vec![-0.9, -0.2, 0.5, 0.8]),
            (2.0, 3.0, vec![-2.0, 0.1, 4.0]),
            (2.0, -3.0, vec![-3.0, 2.0, 5.0]),
        ] {
            let (l, m) = (1.1, 0.4);
            check(
                |y| (l * y * y + m) / (y * (a * y * y + b)),
                |y| class2(a, b, l, m, &y),
                &ys.iter().map(|y: &f64| y.abs() + 0.05).collect::<Vec<_>>(),
            );
            check(
                |y| (l * y + m) / ((a * y * y + b) * (0.3 * y + 1.0)),
                |y| class3(a, b, 0.3, 1.0, l, m, &y),
                &ys,
            );
        }
    }
}
