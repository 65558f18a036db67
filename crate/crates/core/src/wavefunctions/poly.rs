//! Polynomials `P_n(y)` built by the descending class recursions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::si_engine::{ClassId, ParameterChain, SuperpotentialClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformedPolynomial {
    /// Ascending powers of `y`.
    pub coeffs: Vec<f64>,
    pub degree: usize,
    pub class_id: ClassId,
    pub chain_offset: usize,
    /// Class 3 only: the degree `n + 1` coefficient of the last recursion
    /// step before truncation.
    pub cancelled: Option<f64>,
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

/// `sum_k p[k] y^k * q` as dense vectors, `p` given as `(power, coeff)`.
fn add_scaled(out: &mut Vec<f64>, q: &[f64], terms: &[(usize, f64)]) {
    for &(shift, coef) in terms {
        if coef == 0.0 {
            continue;
        }
        if out.len() < q.len() + shift {
            out.resize(q.len() + shift, 0.0);
        }
        for (k, v) in q.iter().enumerate() {
            out[k + shift] += coef * v;
        }
    }
}

/// One recursion step: `P_{k+1}` at offset `j` from `P_k` at offset `j+1`.
fn step(
    sp: &SuperpotentialClass,
    chain: &ParameterChain,
    p: &[f64],
    k: usize,
    j: usize,
) -> Vec<f64> {
    let h = sp.hatted();
    let kf = k as f64;
    let dp = derivative(p);
    let (l0, l1) = (chain.lambdas[j], chain.lambdas[j + k + 1]);
    let (m0, m1) = (chain.mus[j], chain.mus[j + k + 1]);
    let mut out = Vec::new();
    match sp.class_id {
        ClassId::Class1 => {
            add_scaled(&mut out, &dp, &[(0, -h.c), (1, -h.b), (2, -h.a)]);
            add_scaled(&mut out, p, &[(0, m1 + m0), (1, l1 + l0)]);
        }
        ClassId::Class2 => {
            add_scaled(&mut out, &dp, &[(1, 2.0 * h.a), (2, 2.0 * h.b)]);
            add_scaled(
                &mut out,
                p,
                &[(0, l1 + l0 - kf * h.a), (1, m1 + m0 - kf * h.b)],
            );
        }
        ClassId::Class3 => {
            let (a, b) = (sp.consts.a, sp.consts.b);
            let mut bracket = Vec::new();
            add_scaled(&mut bracket, &dp, &[(0, -b), (2, -a)]);
            add_scaled(&mut bracket, p, &[(1, kf * a)]);
            add_scaled(&mut out, &bracket, &[(0, h.d), (1, h.c)]);
            add_scaled(&mut out, p, &[(0, m1 + m0), (1, l1 + l0)]);
        }
    }
    out.resize(out.len().max(k + 2), 0.0);
    out
}

/// `P_n` at chain offset 0, seeded with `P_0 = 1` at offset `n`.
pub fn build_polynomial(
    sp: &SuperpotentialClass,
    chain: &ParameterChain,
    n: usize,
) -> Result<DeformedPolynomial> {
    if chain.depth() < n {
        return Err(Error::Chain(format!("P_{n} needs chain depth {n}, have {}", chain.depth())));
    }
    let mut p = vec![1.0];
    let mut cancelled = None;
    for k in 0..n {
        let j = n - k - 1;
        let mut q = step(sp, chain, &p, k, j);
        if sp.class_id == ClassId::Class3 {
            cancelled = Some(q.get(k + 2).copied().unwrap_or(0.0));
        }
        q.truncate(k + 2);
        p = q;
    }
    p.resize(n + 1, 0.0);
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::Chain(format!("non-finite coefficient in P_{n}")));
    }
    Ok(DeformedPolynomial { degree: n, coeffs: p, class_id: sp.class_id, chain_offset: 0, cancelled })
}

impl DeformedPolynomial {
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// `(ln |P(y)|, sign)`, stable for large `|y|`.
    pub fn ln_abs(&self, y: f64) -> (f64, f64) {
        let top = self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        if y.abs() <= 1.0 || top == 0 {
            let v = self.eval(y);
            return (v.abs().ln(), v.signum());
        }
        let inv = 1.0 / y;
        let s = self.coeffs[..=top].iter().fold(0.0, |acc, c| acc * inv + c);
        (top as f64 * y.abs().ln() + s.abs().ln(), s.signum() * y.signum().powi(top as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_abs_agrees_with_direct() {
        let p = DeformedPolynomial {
            coeffs: vec![1.5, -2.0, 0.25, 3.0],
            degree: 3,
            class_id: ClassId::Class1,
            chain_offset: 0,
            cancelled: None,
        };
        for y in [-7.0, -1.3, -0.2, 0.0, 0.9, 4.0, 1e3] {
            let (l, s) = p.ln_abs(y);
            let v = p.eval(y);
            assert!((s * l.exp() - v).abs() < 1e-12 * v.abs().max(1.0), "y = {y}");
        }
        let (l, s) = p.ln_abs(1e200);
        assert!((l - (3.0f64.ln() + 600.0 * 10f64.ln())).abs() < 1e-9 && s > 0.0);
    }

    #[test]
    fn derivative_of_cubic() {
        assert_eq!(derivative(&[1.0, 2.0, 3.0, 4.0]), vec![2.0, 6.0, 12.0]);
    }
}
