//! Log-space evaluation of `psi_n = f^{-1/2} q(y) P_n(y) exp(-F_n)`.

use crate::catalog::Potential;
use crate::deforming::DeformingFunction;
use crate::error::{Error, Result};
use crate::interval::Grid;
use crate::si_engine::{solve_chain, ChainProblem, ClassId, ParameterChain};
use crate::wavefunctions::antideriv::{w_over_f, OnBase};
use crate::wavefunctions::poly::{build_polynomial, DeformedPolynomial};

/// `psi = sign * exp(ln_root - ln_f / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    /// `ln |psi sqrt f|`.
    pub ln_root: f64,
    pub sign: f64,
    pub ln_f: f64,
}

impl LogValue {
    pub fn ln_abs(&self) -> f64 {
        self.ln_root - 0.5 * self.ln_f
    }

    /// `ln (|psi|^2 f)`.
    pub fn ln_density_f(&self) -> f64 {
        2.0 * self.ln_root
    }
}

/// Level `n` of one potential, ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct StateModel {
    problem: ChainProblem,
    df: DeformingFunction,
    chain: ParameterChain,
    poly: DeformedPolynomial,
    n: usize,
    f_ref: f64,
}

impl StateModel {
    pub fn new(problem: ChainProblem, df: DeformingFunction, n: usize, x_ref: f64) -> Result<Self> {
        let chain = solve_chain(&problem, n)?;
        let poly = build_polynomial(&problem.sp, &chain, n)?;
        let mut m = Self { problem, df, chain, poly, n, f_ref: 0.0 };
        let at = OnBase { phi: m.problem.sp.phi, x: x_ref };
        m.f_ref = w_over_f(&m.problem.sp, m.chain.lambdas[n], m.chain.mus[n], &at);
        if !m.f_ref.is_finite() {
            return Err(Error::SingularPoint { x: x_ref, what: "reference point" });
        }
        Ok(m)
    }

    pub fn for_potential(p: &Potential, n: usize) -> Result<Self> {
        Self::new(p.chain_problem(), p.deforming(), n, p.domain().reference_point())
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn chain(&self) -> &ParameterChain {
        &self.chain
    }

    pub fn polynomial(&self) -> &DeformedPolynomial {
        &self.poly
    }

    pub fn energy(&self) -> f64 {
        self.chain.energies[self.n]
    }

    pub fn deforming(&self) -> &DeformingFunction {
        &self.df
    }

    /// Evaluation without the domain check; may return non-finite parts.
    pub(crate) fn ln_eval_raw(&self, x: f64) -> LogValue {
        let sp = &self.problem.sp;
        let phi = sp.phi.value(x);
        let nf = self.n as f64;
        let (y, ln_pref) = match sp.class_id {
            ClassId::Class1 => (phi, 0.0),
            ClassId::Class2 => {
                let y = 1.0 / (phi * phi);
                (y, -0.5 * nf * y.ln())
            }
            ClassId::Class3 => (phi, -0.5 * nf * sp.radicand_at(x).ln()),
        };
        let (ln_p, sign) = self.poly.ln_abs(y);
        let at = OnBase { phi: sp.phi, x };
        let big_f = w_over_f(sp, self.chain.lambdas[self.n], self.chain.mus[self.n], &at);
        let ln_root = if ln_p == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            ln_pref + ln_p - (big_f - self.f_ref)
        };
        LogValue { ln_root, sign, ln_f: self.df.f_raw(x).ln() }
    }

    pub fn ln_eval(&self, x: f64) -> Result<LogValue> {
        self.df.domain().check(x)?;
        let v = self.ln_eval_raw(x);
        if v.ln_root.is_nan() || v.ln_root == f64::INFINITY {
            return Err(Error::SingularPoint { x, what: "wavefunction" });
        }
        Ok(v)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.ln_eval(x)?;
        Ok(v.sign * v.ln_abs().exp())
    }

    /// Samples on every grid node, scaled so the largest magnitude is 1.
    /// Nodes outside the open domain get 0.
    pub fn sample_scaled(&self, grid: &Grid) -> Result<Vec<f64>> {
        let dom = self.df.domain();
        let mut logs = Vec::with_capacity(grid.n_points());
        for x in grid.nodes() {
            if dom.contains(x) {
                let v = self.ln_eval(x)?;
                logs.push((v.ln_abs(), v.sign));
            } else {
                logs.push((f64::NEG_INFINITY, 0.0));
            }
        }
        let top = logs.iter().map(|l| l.0).fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(logs.into_iter().map(|(l, s)| s * (l - top).exp()).collect())
    }
}

/// `f^{-1/2} exp(-int W/f)` with the constant fixed at the reference point.
pub fn ground_state_numeric(p: &Potential, x: f64) -> Result<f64> {
    StateModel::for_potential(p, 0)?.eval(x)
}

/// Unnormalized `psi_n(x)`.
pub fn excited_state_eval(p: &Potential, n: usize, x: f64) -> Result<f64> {
    StateModel::for_potential(p, n)?.eval(x)
}

/// `P_n` at chain offset 0.
pub fn polynomial_chain(p: &Potential, n: usize) -> Result<DeformedPolynomial> {
    let problem = p.chain_problem();
    let chain = solve_chain(&problem, n)?;
    build_polynomial(&problem.sp, &chain, n)
}
