//! Coefficient matching for the shape-invariance conditions.
//!
//! The first condition, `V_eff = W0^2 - f W0' + eps0`, fixes `(lambda0,
//! mu0, eps0)`. The second, `Wi^2 + f Wi' = W(i+1)^2 - f W(i+1)' +
//! eps(i+1)`, steps the chain. Both are solved by equating the
//! coefficients of the class basis.

use serde::{Deserialize, Serialize};

use crate::deforming::DeformingFunction;
use crate::error::{Error, Result};
use crate::si_engine::class::{ClassId, SuperpotentialClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Which root of each quadratic to keep. Class 1 uses only `first`
/// (for `lambda`); class 2 uses `first` for `lambda` and `second` for `mu`;
/// class 3 uses them for `lambda + mu` and `lambda - mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootBranch {
    pub first: Sign,
    pub second: Sign,
}

impl RootBranch {
    pub fn new(first: Sign, second: Sign) -> Self {
        Self { first, second }
    }
}

/// Everything coefficient matching needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainProblem {
    pub sp: SuperpotentialClass,
    /// `V_eff` coefficients in the class basis.
    pub v: [f64; 3],
    pub branch: RootBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterChain {
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// Partial sums of `epsilons`.
    pub energies: Vec<f64>,
}

impl ParameterChain {
    pub fn depth(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.energies
            .get(n)
            .copied()
            .ok_or_else(|| Error::Chain(format!("level {n} beyond chain depth {}", self.depth())))
    }
}

/// Root of `t^2 - p t - q = 0` on the requested side.
fn quadratic_root(p: f64, q: f64, sign: Sign, what: &str) -> Result<f64> {
    let disc = p * p + 4.0 * q;
    if disc < 0.0 || !disc.is_finite() {
        return Err(Error::NoRealRoot(format!("{what}: discriminant {disc}")));
    }
    let sq = disc.sqrt();
    // large-magnitude root first, the other from the product -q
    let big = if p >= 0.0 { 0.5 * (p + sq) } else { 0.5 * (p - sq) };
    let small = if big == 0.0 { 0.0 } else { -q / big };
    let (plus, minus) = if p >= 0.0 { (big, small) } else { (small, big) };
    Ok(match sign {
        Sign::Plus => plus,
        Sign::Minus => minus,
    })
}

fn nonzero(v: f64, what: &str) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        Err(Error::DegenerateClass(format!("{what} vanishes")))
    } else {
        Ok(v)
    }
}

/// Solves the first condition and iterates the second `depth` times.
pub fn solve_chain(problem: &ChainProblem, depth: usize) -> Result<ParameterChain> {
    let sp = &problem.sp;
    let h = sp.hatted();
    let [v2, v1, v0] = problem.v;
    let br = problem.branch;
    let n = depth + 1;
    let mut lambdas = Vec::with_capacity(n);
    let mut mus = Vec::with_capacity(n);
    let mut epsilons = Vec::with_capacity(n);

    match sp.class_id {
        ClassId::Class1 => {
            let lambda = nonzero(quadratic_root(h.a, v2, br.first, "lambda")?, "lambda")?;
            let mu = (v1 + lambda * h.b) / (2.0 * lambda);
            lambdas.push(lambda);
            mus.push(mu);
            epsilons.push(v0 - mu * mu + lambda * h.c);
            for i in 0..depth {
                let (l, m) = (lambdas[i], mus[i]);
                let ln = l + h.a;
                if ln == 0.0 {
                    return Err(Error::Chain(format!("lambda vanishes at index {}", i + 1)));
                }
                let mn = (2.0 * l * m + (l + ln) * h.b) / (2.0 * ln);
                lambdas.push(ln);
                mus.push(mn);
                epsilons.push(m * m - mn * mn + (l + ln) * h.c);
            }
        }
        ClassId::Class2 => {
            let lambda = quadratic_root(h.a, v2, br.first, "lambda")?;
            let mu = quadratic_root(-h.b, v1, br.second, "mu")?;
            lambdas.push(lambda);
            mus.push(mu);
            epsilons.push(v0 - 2.0 * lambda * mu + lambda * h.b - mu * h.a);
            for i in 0..depth {
                let (l, m) = (lambdas[i], mus[i]);
                let (ln, mn) = (l + h.a, m - h.b);
                lambdas.push(ln);
                mus.push(mn);
                epsilons.push(
                    2.0 * l * m + l * h.b - m * h.a - (2.0 * ln * mn - ln * h.b + mn * h.a),
                );
            }
        }
        ClassId::Class3 => {
            let (a, b) = (sp.consts.a, sp.consts.b);
            nonzero(a, "A")?;
            nonzero(b, "B")?;
            if (a + b).abs() > 1e-14 * a.abs() {
                return Err(Error::DegenerateClass(format!(
                    "class 3 coefficient matching needs A = -B, got A = {a}, B = {b}"
                )));
            }
            let r0 = v0 - (b / a) * v2;
            let s = quadratic_root(b * (h.d + h.c), r0 + v1, br.first, "lambda + mu")?;
            let d = quadratic_root(b * (h.d - h.c), r0 - v1, br.second, "lambda - mu")?;
            let (lambda, mu) = (0.5 * (s + d), 0.5 * (s - d));
            lambdas.push(lambda);
            mus.push(mu);
            epsilons.push((v2 - lambda * lambda - mu * a * h.c) / a);
            let (ds, dd) = (b * (h.c + h.d), b * (h.d - h.c));
            for i in 0..depth {
                let (l, m) = (lambdas[i], mus[i]);
                let (sn, dn) = (l + m + ds, l - m + dd);
                let (ln, mn) = (0.5 * (sn + dn), 0.5 * (sn - dn));
                lambdas.push(ln);
                mus.push(mn);
                epsilons.push((l * l - m * a * h.c - ln * ln - mn * a * h.c) / a);
            }
        }
    }

    let mut energies = Vec::with_capacity(n);
    let mut acc = 0.0;
    for e in &epsilons {
        acc += e;
        energies.push(acc);
    }
    Ok(ParameterChain { lambdas, mus, epsilons, energies })
}

/// Pointwise residuals of the two conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// `W0^2 - f W0' + eps0 - V_eff`.
    pub r1: f64,
    /// `Wi^2 + f Wi' - W(i+1)^2 + f W(i+1)' - eps(i+1)`.
    pub r2: f64,
}

pub fn si_residual(
    problem: &ChainProblem,
    df: &DeformingFunction,
    v_eff: &dyn Fn(f64) -> f64,
    chain: &ParameterChain,
    i: usize,
    x: f64,
) -> Result<Residual> {
    if i + 1 > chain.depth() {
        return Err(Error::Chain(format!("index {i} needs chain depth {}", i + 1)));
    }
    let f = df.f(x)?;
    let sp = &problem.sp;
    let w0 = sp.w_eval(chain.lambdas[0], chain.mus[0], x)?;
    let wi = sp.w_eval(chain.lambdas[i], chain.mus[i], x)?;
    let wn = sp.w_eval(chain.lambdas[i + 1], chain.mus[i + 1], x)?;
    Ok(Residual {
        r1: w0.w * w0.w - f * w0.w_prime + chain.epsilons[0] - v_eff(x),
        r2: wi.w * wi.w + f * wi.w_prime - wn.w * wn.w + f * wn.w_prime - chain.epsilons[i + 1],
    })
}

/// `V_eff + 2 f W'(lambda0)`.
pub fn partner_potential(
    problem: &ChainProblem,
    df: &DeformingFunction,
    v_eff: &dyn Fn(f64) -> f64,
    chain: &ParameterChain,
    x: f64,
) -> Result<f64> {
    let f = df.f(x)?;
    let w = problem.sp.w_eval(chain.lambdas[0], chain.mus[0], x)?;
    Ok(v_eff(x) + 2.0 * f * w.w_prime)
}
