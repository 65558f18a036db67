//! Base functions and the three superpotential classes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    Tan,
    Tanh,
    Cot,
    Coth,
    Identity,
    Reciprocal,
    ExpNeg,
    Sin,
}

impl BaseFunction {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Self::Tan => x.tan(),
            Self::Tanh => x.tanh(),
            Self::Cot => 1.0 / x.tan(),
            Self::Coth => 1.0 / x.tanh(),
            Self::Identity => x,
            Self::Reciprocal => 1.0 / x,
            Self::ExpNeg => (-x).exp(),
            Self::Sin => x.sin(),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Self::Tan => 1.0 / x.cos().powi(2),
            Self::Tanh => 1.0 / x.cosh().powi(2),
            Self::Cot => -1.0 / x.sin().powi(2),
            Self::Coth => -1.0 / x.sinh().powi(2),
            Self::Identity => 1.0,
            Self::Reciprocal => -1.0 / (x * x),
            Self::ExpNeg => -(-x).exp(),
            Self::Sin => x.cos(),
        }
    }

    /// `ln |phi(x) - r|`, kept accurate where `tanh` or `coth` saturate
    /// towards `r = +-1`.
    pub fn ln_abs_minus(self, x: f64, r: f64) -> f64 {
        let unit = (r.abs() - 1.0).abs() < 1e-12;
        let ln2 = std::f64::consts::LN_2;
        match self {
            Self::Tanh if unit && r > 0.0 => ln2 - softplus(2.0 * x),
            Self::Tanh if unit => ln2 - softplus(-2.0 * x),
            Self::Coth if unit && r > 0.0 => ln2 - ln_abs_expm1(2.0 * x),
            Self::Coth if unit => ln2 - ln_abs_expm1(-2.0 * x),
            Self::Sin if unit => ln2 + 2.0 * half_angle_sin(x, r).abs().ln(),
            _ => (self.value(x) - r).abs().ln(),
        }
    }

    /// `phi(x) - r` with the same care as [`Self::ln_abs_minus`].
    pub fn minus(self, x: f64, r: f64) -> f64 {
        let unit = (r.abs() - 1.0).abs() < 1e-12;
        match self {
            Self::Tanh if unit => -r.signum() * self.ln_abs_minus(x, r).exp(),
            Self::Coth if unit => x.signum() * self.ln_abs_minus(x, r).exp(),
            Self::Sin if unit => -r.signum() * 2.0 * half_angle_sin(x, r).powi(2),
            _ => self.value(x) - r,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tan => "tan x",
            Self::Tanh => "tanh x",
            Self::Cot => "cot x",
            Self::Coth => "coth x",
            Self::Identity => "x",
            Self::Reciprocal => "1/x",
            Self::ExpNeg => "exp(-x)",
            Self::Sin => "sin x",
        }
    }
}

/// `sin(pi/4 - r x/2)`, whose square is `|sin x - r| / 2` for `r = +-1`.
fn half_angle_sin(x: f64, r: f64) -> f64 {
    (std::f64::consts::FRAC_PI_4 - 0.5 * r.signum() * x).sin()
}

/// `ln(1 + e^z)`.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `ln |e^z - 1|`.
fn ln_abs_expm1(z: f64) -> f64 {
    if z > 30.0 {
        z + (-(-z).exp()).ln_1p()
    } else {
        z.exp_m1().abs().ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassId {
    /// `W = lambda phi + mu`, `phi' = A phi^2 + B phi + C`. Includes the
    /// `mu = B = B' = 0` case.
    Class1,
    /// `W = lambda phi + mu / phi`, `phi' = A phi^2 + B`.
    Class2,
    /// `W = (lambda phi + mu) / sqrt(A phi^2 + B)`,
    /// `phi' = (C phi + D) sqrt(A phi^2 + B)`.
    Class3,
}

/// Constants of the `phi'` relation (or of `g phi'` when primed).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Consts {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Consts {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialClass {
    pub class_id: ClassId,
    pub phi: BaseFunction,
    pub consts: Consts,
    pub primed: Consts,
}

/// `W` and `W'` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WSample {
    pub w: f64,
    pub w_prime: f64,
}

impl SuperpotentialClass {
    pub fn new(class_id: ClassId, phi: BaseFunction, consts: Consts, primed: Consts) -> Self {
        Self { class_id, phi, consts, primed }
    }

    /// `A + A'`, `B + B'`, `C + C'`, `D + D'`.
    pub fn hatted(&self) -> Consts {
        let (k, p) = (self.consts, self.primed);
        Consts::new(k.a + p.a, k.b + p.b, k.c + p.c, k.d + p.d)
    }

    /// `A phi^2 + B` for classes 2 and 3.
    pub(crate) fn radicand(&self, phi: f64) -> f64 {
        self.consts.a * phi * phi + self.consts.b
    }

    /// `A phi(x)^2 + B`, factored through the real roots when there are any.
    pub(crate) fn radicand_at(&self, x: f64) -> f64 {
        let (a, b) = (self.consts.a, self.consts.b);
        let t = -b / a;
        if a != 0.0 && t > 0.0 {
            let s = t.sqrt();
            a * self.phi.minus(x, s) * self.phi.minus(x, -s)
        } else {
            self.radicand(self.phi.value(x))
        }
    }

    /// Right side of the `phi'` relation, evaluated from `phi` alone.
    pub fn phi_prime_from_phi(&self, phi: f64) -> f64 {
        let k = self.consts;
        match self.class_id {
            ClassId::Class1 => k.a * phi * phi + k.b * phi + k.c,
            ClassId::Class2 => k.a * phi * phi + k.b,
            ClassId::Class3 => (k.c * phi + k.d) * self.radicand(phi).sqrt(),
        }
    }

    /// `g phi'` from the primed constants.
    fn g_phi_prime(&self, phi: f64) -> f64 {
        let p = self.primed;
        match self.class_id {
            ClassId::Class1 => p.a * phi * phi + p.b * phi + p.c,
            ClassId::Class2 => p.a * phi * phi + p.b,
            ClassId::Class3 => (p.c * phi + p.d) * self.radicand(phi).sqrt(),
        }
    }

    /// `g` implied by the primed constants.
    pub fn g_reconstructed(&self, x: f64) -> f64 {
        self.g_phi_prime(self.phi.value(x)) / self.phi.derivative(x)
    }

    fn phi_at(&self, x: f64) -> Result<f64> {
        let phi = self.phi.value(x);
        if !phi.is_finite() {
            return Err(Error::SingularPoint { x, what: "base function" });
        }
        match self.class_id {
            ClassId::Class2 if phi == 0.0 => Err(Error::SingularPoint { x, what: "phi = 0" }),
            ClassId::Class3 if self.radicand_at(x) <= 0.0 => {
                Err(Error::SingularPoint { x, what: "A phi^2 + B <= 0" })
            }
            _ => Ok(phi),
        }
    }

    /// Evaluates `W(lambda, mu; x)` and `W'`.
    pub fn w_eval(&self, lambda: f64, mu: f64, x: f64) -> Result<WSample> {
        let phi = self.phi_at(x)?;
        let dphi = self.phi.derivative(x);
        let s = match self.class_id {
            ClassId::Class1 => WSample { w: lambda * phi + mu, w_prime: lambda * dphi },
            ClassId::Class2 => WSample {
                w: lambda * phi + mu / phi,
                w_prime: (lambda - mu / (phi * phi)) * dphi,
            },
            ClassId::Class3 => {
                let r2 = self.radicand_at(x);
                let r = r2.sqrt();
                let (a, b) = (self.consts.a, self.consts.b);
                WSample {
                    w: (lambda * phi + mu) / r,
                    w_prime: (lambda * b - mu * a * phi) * dphi / (r2 * r),
                }
            }
        };
        if !(s.w.is_finite() && s.w_prime.is_finite()) {
            return Err(Error::SingularPoint { x, what: "superpotential" });
        }
        Ok(s)
    }

    /// `V_eff` from its three coefficients in the class basis:
    /// `{phi^2, phi, 1}`, `{phi^2, phi^-2, 1}`, or `{phi^2, phi, 1}` over
    /// `A phi^2 + B`.
    pub fn basis_potential(&self, v: [f64; 3], x: f64) -> Result<f64> {
        let phi = self.phi_at(x)?;
        Ok(match self.class_id {
            ClassId::Class1 => (v[0] * phi + v[1]) * phi + v[2],
            ClassId::Class2 => v[0] * phi * phi + v[1] / (phi * phi) + v[2],
            ClassId::Class3 => ((v[0] * phi + v[1]) * phi + v[2]) / self.radicand_at(x),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class1_tan() -> SuperpotentialClass {
        SuperpotentialClass::new(
            ClassId::Class1,
            BaseFunction::Tan,
            Consts::new(1.0, 0.0, 1.0, 0.0),
            Consts::new(0.5, 0.0, 0.0, 0.0),
        )
    }

    #[test]
    fn tan_at_origin() {
        let s = class1_tan().w_eval(1.5, 0.0, 0.0).unwrap();
        assert_eq!((s.w, s.w_prime), (0.0, 1.5));
    }

    #[test]
    fn three_dimensional_oscillator_form() {
        let sp = SuperpotentialClass::new(
            ClassId::Class2,
            BaseFunction::Reciprocal,
            Consts::new(-1.0, 0.0, 0.0, 0.0),
            Consts::new(0.0, -0.1, 0.0, 0.0),
        );
        let (l, mu, x) = (-2.0, 0.55, 1.7);
        let s = sp.w_eval(l, mu, x).unwrap();
        assert!((s.w - (l / x + mu * x)).abs() < 1e-14);
        assert!((s.w_prime - (-l / (x * x) + mu)).abs() < 1e-14);
    }

    #[test]
    fn scarf_form() {
        let sp = SuperpotentialClass::new(
            ClassId::Class3,
            BaseFunction::Sin,
            Consts::new(-1.0, 1.0, 0.0, 1.0),
            Consts::new(0.0, 0.0, 0.3, 0.0),
        );
        let (l, mu) = (3.2, -0.8);
        for x in [-1.2, -0.3, 0.0, 0.9] {
            let s = sp.w_eval(l, mu, x).unwrap();
            assert!((s.w - (l * x.tan() + mu / x.cos())).abs() < 1e-13);
            let wp = (l + mu * x.sin()) / x.cos().powi(2);
            assert!((s.w_prime - wp).abs() < 1e-12);
            assert!((sp.phi_prime_from_phi(x.sin()) - x.cos()).abs() < 1e-15);
            assert!((sp.g_reconstructed(x) - 0.3 * x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn singular_points() {
        let mut sp = class1_tan();
        sp.phi = BaseFunction::Cot;
        assert!(matches!(sp.w_eval(1.0, 0.0, 0.0), Err(Error::SingularPoint { .. })));
        let r = SuperpotentialClass::new(
            ClassId::Class2,
            BaseFunction::Reciprocal,
            Consts::new(-1.0, 0.0, 0.0, 0.0),
            Consts::default(),
        );
        assert!(matches!(r.w_eval(1.0, 1.0, 0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn base_derivatives_match_differences() {
        let h = 1e-6;
        for (b, x) in [
            (BaseFunction::Tan, 0.3),
            (BaseFunction::Tanh, -0.7),
            (BaseFunction::Cot, 1.1),
            (BaseFunction::Coth, 0.8),
            (BaseFunction::Identity, 2.0),
            (BaseFunction::Reciprocal, 1.4),
            (BaseFunction::ExpNeg, -0.5),
            (BaseFunction::Sin, 0.2),
        ] {
            let fd = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
            assert!((fd - b.derivative(x)).abs() < 1e-7 * b.derivative(x).abs().max(1.0), "{b:?}");
        }
    }
}
