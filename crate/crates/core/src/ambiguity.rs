//! von Roos ambiguity parameters.
//!
//! The kinetic term is written with exponents `(xi, eta, zeta)` of the
//! deforming function `f`, with `xi + eta + zeta = 2`. Only two combinations
//! survive once the ordering is pushed into the potential:
//!
//! ```text
//! rho   = (1 - xi - zeta) / 2
//! sigma = (1/2 - xi) (1/2 - zeta)
//! ```
//!
//! The mass-exponent form `M^xi' d/dx M^eta' d/dx M^zeta'` with `M = 1/f^2`
//! maps to these by `xi = -2 xi'` (and likewise for the others), so that
//! `xi' + eta' + zeta' = -1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four named orderings in common use for graded semiconductors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// BenDaniel-Duke.
    Bdd,
    Bastard,
    /// Zhu-Kroemer.
    Zk,
    /// Li-Kuhn.
    Lk,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Bdd, Preset::Bastard, Preset::Zk, Preset::Lk];

    pub fn params(self) -> AmbiguityParams {
        let (xi, zeta) = match self {
            Preset::Bdd => (0.0, 0.0),
            Preset::Bastard => (2.0, 0.0),
            Preset::Zk => (1.0, 1.0),
            Preset::Lk => (0.0, 1.0),
        };
        AmbiguityParams::reduce(xi, zeta)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Bdd => "bdd",
            Preset::Bastard => "bastard",
            Preset::Zk => "zk",
            Preset::Lk => "lk",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bdd" => Ok(Preset::Bdd),
            "bastard" => Ok(Preset::Bastard),
            "zk" => Ok(Preset::Zk),
            "lk" => Ok(Preset::Lk),
            other => Err(Error::Parameter(format!(
                "unknown ordering preset `{other}` (expected bdd, bastard, zk or lk)"
            ))),
        }
    }
}

/// Exponents `(xi, zeta)` together with the derived `(rho, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityParams {
    xi: f64,
    zeta: f64,
    rho: f64,
    sigma: f64,
}

impl AmbiguityParams {
    /// Reduces arbitrary exponents; `eta = 2 - xi - zeta` is implied.
    pub fn reduce(xi: f64, zeta: f64) -> Self {
        Self {
            xi,
            zeta,
            rho: 0.5 * (1.0 - xi - zeta),
            sigma: (0.5 - xi) * (0.5 - zeta),
        }
    }

    pub fn bdd() -> Self {
        Preset::Bdd.params()
    }

    pub fn bastard() -> Self {
        Preset::Bastard.params()
    }

    pub fn zk() -> Self {
        Preset::Zk.params()
    }

    pub fn lk() -> Self {
        Preset::Lk.params()
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        2.0 - self.xi - self.zeta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Mass exponents `(xi', eta', zeta')`, summing to -1.
    pub fn mass_exponents(&self) -> [f64; 3] {
        [-0.5 * self.xi, -0.5 * self.eta(), -0.5 * self.zeta]
    }

    /// Inverse of [`mass_exponents`](Self::mass_exponents).
    pub fn from_mass_exponents(primed: [f64; 3]) -> Result<Self> {
        let sum = primed.iter().sum::<f64>();
        if (sum + 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "mass exponents must sum to -1, got {sum}"
            )));
        }
        Ok(Self::reduce(-2.0 * primed[0], -2.0 * primed[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn presets_match_published_pairs() {
        let cases = [
            (Preset::Bdd, 0.5, 0.25),
            (Preset::Zk, -0.5, 0.25),
            (Preset::Lk, 0.0, -0.25),
            (Preset::Bastard, -0.5, -0.75),
        ];
        for (p, rho, sigma) in cases {
            let a = p.params();
            assert_eq!(a.rho(), rho, "{p}");
            assert_eq!(a.sigma(), sigma, "{p}");
        }
    }

    #[test]
    fn parse_presets() {
        assert_eq!("ZK".parse::<Preset>().unwrap(), Preset::Zk);
        assert!("foo".parse::<Preset>().is_err());
    }

    #[test]
    fn mass_exponents_sum_to_minus_one() {
        for p in Preset::ALL {
            let e = p.params().mass_exponents();
            assert!((e.iter().sum::<f64>() + 1.0).abs() < 1e-15);
            let back = AmbiguityParams::from_mass_exponents(e).unwrap();
            assert_eq!(back, p.params());
        }
        assert!(AmbiguityParams::from_mass_exponents([0.0, 0.0, 0.0]).is_err());
    }

    proptest! {
        #[test]
        fn reduction_formulas_hold(xi in -5.0f64..5.0, zeta in -5.0f64..5.0) {
            let a = AmbiguityParams::reduce(xi, zeta);
            prop_assert_eq!(a.rho(), (1.0 - xi - zeta) / 2.0);
            prop_assert_eq!(a.sigma(), (0.5 - xi) * (0.5 - zeta));
            prop_assert!((a.xi() + a.eta() + a.zeta() - 2.0).abs() < 1e-12);
        }
    }
}
