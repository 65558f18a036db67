//! Instantiated catalog potentials and their closed forms.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::ambiguity::AmbiguityParams;
use crate::catalog::registry::{CatalogEntry, ENTRIES};
use crate::deforming::{DeformingFunction, Family};
use crate::error::{Error, Result};
use crate::interval::{Grid, Interval};
use crate::oracle::quadrature;
use crate::si_engine::{
    BaseFunction, ChainProblem, ClassId, Consts, RootBranch, Sign, SuperpotentialClass,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "potential", rename_all = "snake_case")]
pub enum Potential {
    Box { alpha: f64 },
    TrigPoschlTeller { a: f64, alpha: f64 },
    HyperbolicPoschlTeller { a: f64, alpha: f64 },
    ShiftedOscillator { omega: f64, b: f64, alpha: f64, beta: f64 },
    Oscillator3d { omega: f64, l: f64, alpha: f64 },
    Coulomb { e2: f64, l: f64, alpha: f64 },
    Morse { a: f64, b: f64, alpha: f64 },
    Eckart { a: f64, b: f64, alpha: f64 },
    ScarfI { a: f64, b: f64, alpha: f64 },
    RosenMorseI { a: f64, b: f64, alpha: f64, beta: f64 },
}

/// Number of bound states implied by the counting rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Counting {
    Finite(usize),
    Infinite,
    Zero,
}

impl Counting {
    fn from_count(k: usize) -> Self {
        if k == 0 {
            Counting::Zero
        } else {
            Counting::Finite(k)
        }
    }

    pub fn admits(self, n: usize) -> bool {
        match self {
            Counting::Finite(k) => n < k,
            Counting::Infinite => true,
            Counting::Zero => false,
        }
    }

    /// Level count, with infinite spectra capped at `cap`.
    pub fn levels(self, cap: usize) -> usize {
        match self {
            Counting::Finite(k) => k.min(cap),
            Counting::Infinite => cap,
            Counting::Zero => 0,
        }
    }
}

impl std::fmt::Display for Counting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Counting::Finite(k) => write!(f, "finite({k})"),
            Counting::Infinite => f.write_str("infinite"),
            Counting::Zero => f.write_str("zero"),
        }
    }
}

impl std::str::FromStr for Counting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infinite" => Ok(Counting::Infinite),
            "zero" => Ok(Counting::Zero),
            _ => s
                .strip_prefix("finite(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|k| k.parse().ok())
                .map(Counting::Finite)
                .ok_or_else(|| Error::Parameter(format!("not a bound-state count: `{s}`"))),
        }
    }
}

impl From<Counting> for String {
    fn from(c: Counting) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Counting {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Left end of the oracle truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationKind {
    /// Grid spans the bounded domain; its end nodes are the Dirichlet nodes.
    Natural,
    /// `[eps, L]` on the half-line.
    HalfLine { eps: f64 },
    /// `[left, L]` on the real line; `left` is the first cut tried and moves
    /// outward by `|left| / 4` per step under the same tail rule as `L`.
    LeftFixed { left: f64 },
    /// `[-L, L]`.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecipe {
    pub kind: TruncationKind,
    pub n_points: usize,
    pub rel_tol: f64,
    /// Bound on the normalized `|psi_0|^2 max(f, 1)` at the cut.
    pub tail: f64,
    /// Levels the truncated grid resolves within `rel_tol`; all admitted
    /// levels when `None`.
    pub oracle_levels: Option<usize>,
}

impl TruncationRecipe {
    const fn new(kind: TruncationKind) -> Self {
        Self { kind, n_points: 4001, rel_tol: 1e-4, tail: 1e-12, oracle_levels: None }
    }
}

fn range(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Range(what.to_string()))
    }
}

fn is_nonneg_int(v: f64) -> bool {
    v >= 0.0 && v.fract() == 0.0
}

fn sq(v: f64) -> f64 {
    v * v
}

impl Potential {
    /// Builds an entry from named parameters; missing names take defaults.
    pub fn from_params(name: &str, given: &BTreeMap<String, f64>) -> Result<Self> {
        let entry = super::lookup(name)?;
        for key in given.keys() {
            if !entry.params.iter().any(|p| p.name == key) {
                let known: Vec<_> = entry.params.iter().map(|p| p.name).collect();
                return Err(Error::Parameter(format!(
                    "unknown parameter `{key}` for {name} (expected {})",
                    known.join(", ")
                )));
            }
        }
        let get = |k: &str| -> f64 {
            given.get(k).copied().unwrap_or_else(|| {
                entry.params.iter().find(|p| p.name == k).map(|p| p.default).unwrap_or(f64::NAN)
            })
        };
        let pot = match entry.name {
            "box" => Potential::Box { alpha: get("alpha") },
            "trig_poschl_teller" => Potential::TrigPoschlTeller { a: get("A"), alpha: get("alpha") },
            "hyperbolic_poschl_teller" => {
                Potential::HyperbolicPoschlTeller { a: get("A"), alpha: get("alpha") }
            }
            "shifted_oscillator" => Potential::ShiftedOscillator {
                omega: get("omega"),
                b: get("b"),
                alpha: get("alpha"),
                beta: get("beta"),
            },
            "oscillator_3d" => {
                Potential::Oscillator3d { omega: get("omega"), l: get("l"), alpha: get("alpha") }
            }
            "coulomb" => Potential::Coulomb { e2: get("e2"), l: get("l"), alpha: get("alpha") },
            "morse" => Potential::Morse { a: get("A"), b: get("B"), alpha: get("alpha") },
            "eckart" => Potential::Eckart { a: get("A"), b: get("B"), alpha: get("alpha") },
            "scarf_i" => Potential::ScarfI { a: get("A"), b: get("B"), alpha: get("alpha") },
            "rosen_morse_i" => Potential::RosenMorseI {
                a: get("A"),
                b: get("B"),
                alpha: get("alpha"),
                beta: get("beta"),
            },
            other => return Err(Error::NotFound { name: other.to_string(), note: None }),
        };
        pot.validate()?;
        Ok(pot)
    }

    pub fn default_for(name: &str) -> Result<Self> {
        Self::from_params(name, &BTreeMap::new())
    }

    /// Checks the validity ranges.
    pub fn validate(&self) -> Result<()> {
        let vals = self.all_params();
        if vals.values().any(|v| !v.is_finite()) {
            return Err(Error::Range("parameters must be finite".into()));
        }
        match *self {
            Potential::Box { alpha } => range(alpha > -1.0, "box requires -1 < alpha"),
            Potential::TrigPoschlTeller { a, alpha } => {
                range(a > 1.0, "trig_poschl_teller requires A > 1")?;
                range(alpha > -1.0, "trig_poschl_teller requires -1 < alpha")
            }
            Potential::HyperbolicPoschlTeller { a, alpha } => {
                range(a > 0.0, "hyperbolic_poschl_teller requires A > 0")?;
                range(alpha > 0.0 && alpha < 1.0, "hyperbolic_poschl_teller requires 0 < alpha < 1")
            }
            Potential::ShiftedOscillator { omega, alpha, beta, .. } => {
                range(omega > 0.0, "shifted_oscillator requires omega > 0")?;
                range(alpha > beta * beta, "shifted_oscillator requires alpha > beta^2")
            }
            Potential::Oscillator3d { omega, l, alpha } => {
                range(omega > 0.0, "oscillator_3d requires omega > 0")?;
                range(is_nonneg_int(l), "oscillator_3d requires l = 0, 1, 2, ...")?;
                range(alpha > 0.0, "oscillator_3d requires alpha > 0")
            }
            Potential::Coulomb { e2, l, alpha } => {
                range(e2 > 0.0, "coulomb requires e2 > 0")?;
                range(is_nonneg_int(l), "coulomb requires l = 0, 1, 2, ...")?;
                range(alpha > 0.0, "coulomb requires alpha > 0")
            }
            Potential::Morse { a, b, alpha } => {
                range(a > 0.0 && b > 0.0, "morse requires A > 0 and B > 0")?;
                range(alpha > 0.0, "morse requires alpha > 0")
            }
            Potential::Eckart { a, b, alpha } => {
                range(a >= 1.5, "eckart requires A >= 3/2")?;
                range(b > a * a, "eckart requires B > A^2")?;
                range(alpha >= -2.0, "eckart requires -2 <= alpha")
            }
            Potential::ScarfI { a, b, alpha } => {
                range(b > 0.0 && b < a - 1.0, "scarf_i requires 0 < B < A - 1")?;
                range(alpha.abs() < 1.0, "scarf_i requires |alpha| < 1")
            }
            Potential::RosenMorseI { a, alpha, beta, .. } => {
                range(a >= 1.5, "rosen_morse_i requires A >= 3/2")?;
                range(beta > -1.0, "rosen_morse_i requires beta > -1")?;
                range(
                    alpha.abs() / 2.0 < (1.0 + beta).sqrt(),
                    "rosen_morse_i requires |alpha|/2 < sqrt(1 + beta)",
                )
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::Box { .. } => "box",
            Potential::TrigPoschlTeller { .. } => "trig_poschl_teller",
            Potential::HyperbolicPoschlTeller { .. } => "hyperbolic_poschl_teller",
            Potential::ShiftedOscillator { .. } => "shifted_oscillator",
            Potential::Oscillator3d { .. } => "oscillator_3d",
            Potential::Coulomb { .. } => "coulomb",
            Potential::Morse { .. } => "morse",
            Potential::Eckart { .. } => "eckart",
            Potential::ScarfI { .. } => "scarf_i",
            Potential::RosenMorseI { .. } => "rosen_morse_i",
        }
    }

    pub fn entry(&self) -> &'static CatalogEntry {
        let name = self.name();
        ENTRIES.iter().find(|e| e.name == name).expect("every variant is registered")
    }

    fn all_params(&self) -> BTreeMap<String, f64> {
        let vals: Vec<f64> = match *self {
            Potential::Box { alpha } => vec![alpha],
            Potential::TrigPoschlTeller { a, alpha }
            | Potential::HyperbolicPoschlTeller { a, alpha } => vec![a, alpha],
            Potential::ShiftedOscillator { omega, b, alpha, beta } => vec![omega, b, alpha, beta],
            Potential::Oscillator3d { omega, l, alpha } => vec![omega, l, alpha],
            Potential::Coulomb { e2, l, alpha } => vec![e2, l, alpha],
            Potential::Morse { a, b, alpha }
            | Potential::Eckart { a, b, alpha }
            | Potential::ScarfI { a, b, alpha } => vec![a, b, alpha],
            Potential::RosenMorseI { a, b, alpha, beta } => vec![a, b, alpha, beta],
        };
        self.entry().params.iter().map(|p| p.name.to_string()).zip(vals).collect()
    }

    /// Potential parameters (the set `b`).
    pub fn params(&self) -> BTreeMap<String, f64> {
        let specs = self.entry().params;
        self.all_params()
            .into_iter()
            .filter(|(k, _)| specs.iter().any(|p| p.name == k && !p.deformation))
            .collect()
    }

    /// Deformation parameters.
    pub fn deformation(&self) -> BTreeMap<String, f64> {
        let specs = self.entry().params;
        self.all_params()
            .into_iter()
            .filter(|(k, _)| specs.iter().any(|p| p.name == k && p.deformation))
            .collect()
    }

    /// Copy with one parameter replaced, validated.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self> {
        let mut m = self.all_params();
        if !m.contains_key(key) {
            return Err(Error::Parameter(format!("unknown parameter `{key}` for {}", self.name())));
        }
        m.insert(key.to_string(), value);
        Self::from_params(self.name(), &m)
    }

    pub fn alpha(&self) -> f64 {
        self.all_params()["alpha"]
    }

    pub fn domain(&self) -> Interval {
        let sym = Interval::bounded(-FRAC_PI_2, FRAC_PI_2).expect("nonempty");
        match self {
            Potential::Box { .. } | Potential::TrigPoschlTeller { .. } | Potential::ScarfI { .. } => {
                sym
            }
            Potential::HyperbolicPoschlTeller { .. }
            | Potential::ShiftedOscillator { .. }
            | Potential::Morse { .. } => Interval::real_line(),
            Potential::Oscillator3d { .. } | Potential::Coulomb { .. } | Potential::Eckart { .. } => {
                Interval::half_line(0.0)
            }
            Potential::RosenMorseI { .. } => Interval::bounded(0.0, PI).expect("nonempty"),
        }
    }

    pub fn deforming(&self) -> DeformingFunction {
        let family = match *self {
            Potential::Box { alpha } | Potential::TrigPoschlTeller { alpha, .. } => {
                Family::TrigSin2 { alpha }
            }
            Potential::HyperbolicPoschlTeller { alpha, .. } => Family::HypSinh2 { alpha },
            Potential::ShiftedOscillator { alpha, beta, .. } => Family::Quadratic { alpha, beta },
            Potential::Oscillator3d { alpha, .. } => Family::Quadratic { alpha, beta: 0.0 },
            Potential::Coulomb { alpha, .. } => Family::Linear { alpha },
            Potential::Morse { alpha, .. } => Family::Exponential { alpha },
            Potential::Eckart { alpha, .. } => Family::EckartExp { alpha },
            Potential::ScarfI { alpha, .. } => Family::Sine { alpha },
            Potential::RosenMorseI { alpha, beta, .. } => Family::SinCos { alpha, beta },
        };
        DeformingFunction::new(family, self.domain())
    }

    /// `V_eff(x)`, unchecked.
    pub fn v_eff(&self, x: f64) -> f64 {
        match *self {
            Potential::Box { .. } => 0.0,
            Potential::TrigPoschlTeller { a, .. } => a * (a - 1.0) / sq(x.cos()),
            Potential::HyperbolicPoschlTeller { a, .. } => -a * (a + 1.0) / sq(x.cosh()),
            Potential::ShiftedOscillator { omega, b, .. } => {
                0.25 * sq(omega) * sq(x - 2.0 * b / omega)
            }
            Potential::Oscillator3d { omega, l, .. } => {
                0.25 * sq(omega * x) + l * (l + 1.0) / sq(x)
            }
            Potential::Coulomb { e2, l, .. } => -e2 / x + l * (l + 1.0) / sq(x),
            Potential::Morse { a, b, .. } => {
                let e = (-x).exp();
                sq(b) * e * e - b * (2.0 * a + 1.0) * e
            }
            Potential::Eckart { a, b, .. } => a * (a - 1.0) / sq(x.sinh()) - 2.0 * b / x.tanh(),
            Potential::ScarfI { a, b, .. } => {
                let c = x.cos();
                (sq(b) + sq(a) - a) / sq(c) - b * (2.0 * a - 1.0) * x.sin() / sq(c)
            }
            Potential::RosenMorseI { a, b, .. } => {
                a * (a - 1.0) / sq(x.sin()) + 2.0 * b / x.tan()
            }
        }
    }

    /// Superpotential class, `V_eff` basis coefficients and root branches.
    pub fn chain_problem(&self) -> ChainProblem {
        use BaseFunction as Bf;
        use ClassId::*;
        use Sign::{Minus, Plus};
        let k = Consts::new;
        let (class_id, phi, consts, primed, v, branch) = match *self {
            Potential::Box { alpha } => {
                (Class1, Bf::Tan, k(1.0, 0.0, 1.0, 0.0), k(alpha, 0.0, 0.0, 0.0), [0.0; 3], (Plus, Plus))
            }
            Potential::TrigPoschlTeller { a, alpha } => {
                let c = a * (a - 1.0);
                (Class1, Bf::Tan, k(1.0, 0.0, 1.0, 0.0), k(alpha, 0.0, 0.0, 0.0), [c, 0.0, c], (Plus, Plus))
            }
            Potential::HyperbolicPoschlTeller { a, alpha } => {
                let c = a * (a + 1.0);
                (Class1, Bf::Tanh, k(-1.0, 0.0, 1.0, 0.0), k(alpha, 0.0, 0.0, 0.0), [c, 0.0, -c], (Plus, Plus))
            }
            Potential::ShiftedOscillator { omega, b, alpha, beta } => (
                Class1,
                Bf::Identity,
                k(0.0, 0.0, 1.0, 0.0),
                k(alpha, 2.0 * beta, 0.0, 0.0),
                [0.25 * sq(omega), -b * omega, sq(b)],
                (Plus, Plus),
            ),
            Potential::Oscillator3d { omega, l, alpha } => (
                Class2,
                Bf::Reciprocal,
                k(-1.0, 0.0, 0.0, 0.0),
                k(0.0, -alpha, 0.0, 0.0),
                [l * (l + 1.0), 0.25 * sq(omega), 0.0],
                (Minus, Plus),
            ),
            Potential::Coulomb { e2, l, alpha } => (
                Class1,
                Bf::Reciprocal,
                k(-1.0, 0.0, 0.0, 0.0),
                k(0.0, -alpha, 0.0, 0.0),
                [l * (l + 1.0), -e2, 0.0],
                (Minus, Plus),
            ),
            Potential::Morse { a, b, alpha } => (
                Class1,
                Bf::ExpNeg,
                k(0.0, -1.0, 0.0, 0.0),
                k(-alpha, 0.0, 0.0, 0.0),
                [sq(b), -b * (2.0 * a + 1.0), 0.0],
                (Minus, Plus),
            ),
            Potential::Eckart { a, b, alpha } => {
                let c = a * (a - 1.0);
                (
                    Class1,
                    Bf::Coth,
                    k(-1.0, 0.0, 1.0, 0.0),
                    k(0.0, -alpha, alpha, 0.0),
                    [c, -2.0 * b, -c],
                    (Minus, Plus),
                )
            }
            Potential::ScarfI { a, b, alpha } => (
                Class3,
                Bf::Sin,
                k(-1.0, 1.0, 0.0, 1.0),
                k(0.0, 0.0, alpha, 0.0),
                [0.0, -b * (2.0 * a - 1.0), sq(b) + sq(a) - a],
                (Plus, Plus),
            ),
            Potential::RosenMorseI { a, b, alpha, beta } => {
                let c = a * (a - 1.0);
                (
                    Class1,
                    Bf::Cot,
                    k(-1.0, 0.0, -1.0, 0.0),
                    k(0.0, -alpha, -beta, 0.0),
                    [c, 2.0 * b, c],
                    (Minus, Plus),
                )
            }
        };
        ChainProblem {
            sp: SuperpotentialClass::new(class_id, phi, consts, primed),
            v,
            branch: RootBranch::new(branch.0, branch.1),
        }
    }

    /// Closed-form `(lambda_i, mu_i)` for `i = 0..=depth`, as far as they are
    /// given in closed form (trig and hyperbolic Poschl-Teller give `lambda_0`
    /// only).
    pub fn printed_chain(&self, depth: usize) -> Vec<(f64, f64)> {
        let idx = 0..=depth;
        match *self {
            Potential::Box { alpha } => {
                idx.map(|i| ((i as f64 + 1.0) * (1.0 + alpha), 0.0)).collect()
            }
            Potential::TrigPoschlTeller { a, alpha } => {
                let delta = (sq(1.0 + alpha) + 4.0 * a * (a - 1.0)).sqrt();
                vec![(0.5 * (1.0 + alpha + delta), 0.0)]
            }
            Potential::HyperbolicPoschlTeller { a, alpha } => {
                let delta = (sq(1.0 - alpha) + 4.0 * a * (a + 1.0)).sqrt();
                vec![(0.5 * (alpha - 1.0 + delta), 0.0)]
            }
            Potential::ShiftedOscillator { omega, b, alpha, beta } => {
                let delta = (sq(omega) + sq(alpha)).sqrt();
                let lambda = 0.5 * (alpha + delta);
                let mu = beta - b * omega / (2.0 * lambda);
                idx.map(|i| {
                    let i = i as f64;
                    let li = lambda + i * alpha;
                    (li, (lambda * mu + 2.0 * i * beta * lambda + i * i * alpha * beta) / li)
                })
                .collect()
            }
            Potential::Oscillator3d { omega, l, alpha } => {
                let delta = (sq(omega) + sq(alpha)).sqrt();
                let (lambda, mu) = (-l - 1.0, 0.5 * (alpha + delta));
                idx.map(|i| (lambda - i as f64, mu + i as f64 * alpha)).collect()
            }
            Potential::Coulomb { e2, l, alpha } => {
                let lambda = -l - 1.0;
                idx.map(|i| {
                    let i = i as f64;
                    let mu = -(e2 + alpha * lambda * (2.0 * i + 1.0) - alpha * i * i)
                        / (2.0 * (lambda - i));
                    (lambda - i, mu)
                })
                .collect()
            }
            Potential::Morse { a, b, alpha } => {
                let delta = (4.0 * sq(b) + sq(alpha)).sqrt();
                let lambda = -0.5 * (alpha + delta);
                let mu = -0.5 * (b * (2.0 * a + 1.0) / lambda + 1.0);
                idx.map(|i| {
                    let i = i as f64;
                    let li = lambda - i * alpha;
                    (li, (2.0 * lambda * (mu - i) + i * i * alpha) / (2.0 * li))
                })
                .collect()
            }
            Potential::Eckart { a, b, alpha } => {
                eckart_like_chain(-a, b / a - 0.5 * alpha, alpha, depth)
            }
            Potential::ScarfI { a, b, alpha } => {
                let (dp, dm) = scarf_deltas(a, b, alpha);
                let lambda = 0.5 * (1.0 + dp + dm);
                let mu = 0.5 * (alpha - dp + dm);
                idx.map(|i| (lambda + i as f64, mu + i as f64 * alpha)).collect()
            }
            Potential::RosenMorseI { a, b, alpha, .. } => {
                eckart_like_chain(-a, -b / a - 0.5 * alpha, alpha, depth)
            }
        }
    }

    /// Closed-form `E_n`, without checking the counting rule.
    pub fn printed_energy(&self, n: usize) -> f64 {
        let nf = n as f64;
        let e = match *self {
            Potential::Box { alpha } => (1.0 + alpha) * sq(nf + 1.0),
            Potential::TrigPoschlTeller { .. } | Potential::HyperbolicPoschlTeller { .. } => {
                let (lambda, _) = self.printed_chain(0)[0];
                match *self {
                    Potential::TrigPoschlTeller { alpha, .. } => {
                        sq(lambda + nf) - alpha * (lambda - nf * nf)
                    }
                    Potential::HyperbolicPoschlTeller { alpha, .. } => {
                        -sq(lambda - nf) + alpha * (lambda + nf * nf)
                    }
                    _ => unreachable!(),
                }
            }
            Potential::ShiftedOscillator { omega, b, alpha, beta } => {
                let delta = (sq(omega) + sq(alpha)).sqrt();
                let num = ((2.0 * nf + 1.0) * delta + (2.0 * nf * nf + 2.0 * nf + 1.0) * alpha)
                    * beta
                    - b * omega;
                (nf + 0.5) * delta + (nf * nf + nf + 0.5) * alpha + sq(b)
                    - sq(num / (delta + (2.0 * nf + 1.0) * alpha))
            }
            Potential::Oscillator3d { omega, l, alpha } => {
                let delta = (sq(omega) + sq(alpha)).sqrt();
                delta * (2.0 * nf + l + 1.5)
                    + alpha * (2.0 * (nf + l + 1.0) * (2.0 * nf + 1.0) + 0.5)
            }
            Potential::Coulomb { e2, l, alpha } => {
                let num = e2 - alpha * (nf * nf + (l + 1.0) * (2.0 * nf + 1.0));
                -sq(num / (2.0 * (nf + l + 1.0)))
            }
            Potential::Morse { a, b, alpha } => {
                let delta = (4.0 * sq(b) + sq(alpha)).sqrt();
                let num = 2.0 * b * (2.0 * a + 1.0)
                    - ((2.0 * nf + 1.0) * delta + (2.0 * nf * nf + 2.0 * nf + 1.0) * alpha);
                -0.25 * sq(num / (delta + (2.0 * nf + 1.0) * alpha))
            }
            Potential::Eckart { a, b, alpha } => {
                let t = (2.0 * nf + 1.0) * a + nf * nf;
                -sq(a + nf) - sq((b - 0.5 * alpha * t) / (a + nf)) - alpha * t
            }
            Potential::ScarfI { a, b, alpha } => {
                let (dp, dm) = scarf_deltas(a, b, alpha);
                -0.25 * sq(2.0 * nf + 1.0 + dp + dm) + alpha * (nf + 0.5) * (dp - dm)
                    - sq(alpha) * (nf * nf + nf + 0.5)
            }
            Potential::RosenMorseI { a, b, alpha, beta } => {
                let t = (2.0 * nf + 1.0) * a + nf * nf;
                sq(a + nf) - sq((b + 0.5 * alpha * t) / (a + nf)) + beta * t
            }
        };
        e
    }

    /// Closed-form `E_n` for an admitted level.
    pub fn closed_energy(&self, n: usize) -> Result<f64> {
        let count = self.bound_state_count();
        if !count.admits(n) {
            let c = match count {
                Counting::Finite(k) => k,
                _ => 0,
            };
            return Err(Error::Index { n, count: c });
        }
        Ok(self.printed_energy(n))
    }

    /// `alpha_max(n)` for Morse.
    pub fn morse_alpha_max(a: f64, b: f64, n: usize) -> f64 {
        if n == 0 {
            return 4.0 * a * (a + 1.0) * b / (2.0 * a + 1.0);
        }
        let nf = n as f64;
        let q = sq(nf * (nf + 1.0));
        (b * (2.0 * a + 1.0) * (2.0 * nf * nf + 2.0 * nf + 1.0)
            - b * (2.0 * nf + 1.0) * (sq(2.0 * a + 1.0) + 4.0 * q).sqrt())
            / (2.0 * q)
    }

    pub fn bound_state_count(&self) -> Counting {
        match *self {
            Potential::HyperbolicPoschlTeller { .. } => Counting::Zero,
            Potential::Coulomb { e2, l, alpha } => {
                let k = (0..)
                    .take_while(|&n| {
                        let nf = n as f64;
                        nf * nf + (l + 1.0) * (2.0 * nf + 1.0) < e2 / alpha
                    })
                    .count();
                Counting::from_count(k)
            }
            Potential::Morse { a, b, alpha } => {
                let k = (0..)
                    .take_while(|&n| (n as f64) < a && alpha < Self::morse_alpha_max(a, b, n))
                    .count();
                Counting::from_count(k)
            }
            Potential::Eckart { a, b, alpha } => {
                if alpha == -2.0 {
                    Counting::Infinite
                } else {
                    let bound = (2.0 * b + alpha * a * (a - 1.0)) / (2.0 + alpha);
                    Counting::from_count((0..).take_while(|&n| sq(a + n as f64) < bound).count())
                }
            }
            _ => Counting::Infinite,
        }
    }

    /// Closed-form unnormalized ground state.
    pub fn ground_state_closed(&self, x: f64) -> Result<f64> {
        self.domain().check(x)?;
        let f = self.deforming().f_raw(x);
        let v = match *self {
            Potential::Box { alpha } => x.cos() / (1.0 + alpha * sq(x.sin())),
            Potential::TrigPoschlTeller { alpha, .. } => {
                let (lambda, _) = self.printed_chain(0)[0];
                let p = lambda / (1.0 + alpha);
                x.cos().powf(p) * f.powf(-0.5 * (p + 1.0))
            }
            Potential::HyperbolicPoschlTeller { alpha, .. } => {
                let (lambda, _) = self.printed_chain(0)[0];
                let p = lambda / (1.0 - alpha);
                (1.0 / x.cosh()).powf(p) * f.powf(0.5 * (p - 1.0))
            }
            Potential::ShiftedOscillator { alpha, beta, .. } => {
                let (lambda, mu) = self.printed_chain(0)[0];
                let delta = (alpha - sq(beta)).sqrt();
                f.powf(-(lambda + alpha) / (2.0 * alpha))
                    * ((lambda * beta - mu * alpha) / (alpha * delta)
                        * ((alpha * x + beta) / delta).atan())
                    .exp()
            }
            Potential::Oscillator3d { l, alpha, .. } => {
                let (_, mu) = self.printed_chain(0)[0];
                x.powf(l + 1.0) * f.powf(-(mu + (l + 2.0) * alpha) / (2.0 * alpha))
            }
            Potential::Coulomb { l, alpha, .. } => {
                let (_, mu) = self.printed_chain(0)[0];
                x.powf(l + 1.0) * f.powf(-(mu / alpha + l + 1.5))
            }
            Potential::Morse { alpha, .. } => {
                let (lambda, mu) = self.printed_chain(0)[0];
                f.powf(lambda / alpha - mu - 0.5) * (-mu * x).exp()
            }
            Potential::Eckart { a, alpha, .. } => {
                let (_, mu) = self.printed_chain(0)[0];
                // coth x - 1 without cancellation
                let cm = 2.0 / (2.0 * x).exp_m1();
                if alpha == -2.0 {
                    cm.powf(-a - 1.0) / x.sinh() * (-(mu - a) / cm).exp()
                } else {
                    (cm + 2.0).sqrt()
                        * (cm + 2.0 + alpha).powf(-((1.0 + alpha) * a + mu) / (2.0 + alpha) - 0.5)
                        * cm.powf((mu - a) / (2.0 + alpha))
                }
            }
            Potential::ScarfI { alpha, .. } => {
                let (lambda, mu) = self.printed_chain(0)[0];
                // 1 -+ sin x as half-angle squares
                let one_minus = 2.0 * sq((FRAC_PI_4 - 0.5 * x).sin());
                let one_plus = 2.0 * sq((FRAC_PI_4 + 0.5 * x).sin());
                f.powf(-(lambda - alpha * mu) / (1.0 - sq(alpha)) - 0.5)
                    * one_minus.powf((lambda + mu) / (2.0 * (1.0 + alpha)))
                    * one_plus.powf((lambda - mu) / (2.0 * (1.0 - alpha)))
            }
            Potential::RosenMorseI { a, alpha, beta, .. } => {
                let (_, mu) = self.printed_chain(0)[0];
                let delta = (1.0 + beta - 0.25 * sq(alpha)).sqrt();
                f.powf(-(a + 1.0) / 2.0)
                    * x.sin().powf(a)
                    * ((mu + 0.5 * alpha * a) / delta * ((1.0 / x.tan() + 0.5 * alpha) / delta).atan())
                        .exp()
            }
        };
        Ok(v)
    }

    /// Closed-form `V~` for the given ambiguity parameters.
    pub fn v_tilde_closed(&self, amb: &AmbiguityParams, x: f64) -> Result<f64> {
        self.domain().check(x)?;
        let (rho, sigma) = (amb.rho(), amb.sigma());
        let v = match *self {
            Potential::Box { alpha } | Potential::TrigPoschlTeller { alpha, .. } => {
                let c = (2.0 * x).cos();
                -(rho + sigma) * sq(alpha * c) + rho * alpha * (2.0 + alpha) * c + sigma * sq(alpha)
            }
            Potential::HyperbolicPoschlTeller { alpha, .. } => {
                let c = (2.0 * x).cosh();
                (rho + sigma) * sq(alpha * c) + rho * alpha * (2.0 - alpha) * c - sigma * sq(alpha)
            }
            Potential::ShiftedOscillator { alpha, beta, .. } => {
                2.0 * (rho + 2.0 * sigma) * alpha * x * (alpha * x + 2.0 * beta)
                    + 2.0 * rho * alpha
                    + 4.0 * sigma * sq(beta)
            }
            Potential::Oscillator3d { alpha, .. } => {
                2.0 * (rho + 2.0 * sigma) * sq(alpha * x) + 2.0 * rho * alpha
            }
            Potential::Coulomb { alpha, .. } => sigma * sq(alpha),
            Potential::Morse { alpha, .. } => {
                let e = (-x).exp();
                (rho + sigma) * sq(alpha * e) + rho * alpha * e
            }
            Potential::Eckart { alpha, .. } => {
                let e = (-2.0 * x).exp();
                (rho + sigma) * sq(alpha * e) - rho * alpha * (2.0 + alpha) * e
            }
            Potential::ScarfI { alpha, .. } => {
                let s = x.sin();
                -(rho + sigma) * sq(alpha * s) - rho * alpha * s + sigma * sq(alpha)
            }
            Potential::RosenMorseI { alpha, beta, .. } => {
                (rho + sigma)
                    * (0.5 * (sq(alpha) - sq(beta)) * (4.0 * x).cos()
                        + alpha * beta * (4.0 * x).sin())
                    + rho * (2.0 + beta) * (-alpha * (2.0 * x).sin() + beta * (2.0 * x).cos())
                    + (sigma - rho) * 0.5 * (sq(alpha) + sq(beta))
            }
        };
        Ok(v)
    }

    /// Morse only: `(A*, B*)` of the reshaped initial potential
    /// `B*^2 e^{-2x} - B*(2A*+1) e^{-x}`.
    pub fn morse_reshaped(&self, amb: &AmbiguityParams) -> Option<(f64, f64)> {
        match *self {
            Potential::Morse { a, b, alpha } => {
                let bs = (sq(b) - (amb.rho() + amb.sigma()) * sq(alpha)).sqrt();
                let as_ = 0.5 * ((b * (2.0 * a + 1.0) + amb.rho() * alpha) / bs - 1.0);
                Some((as_, bs))
            }
            _ => None,
        }
    }

    pub fn truncation(&self) -> TruncationRecipe {
        use TruncationKind::*;
        match *self {
            Potential::Box { .. }
            | Potential::TrigPoschlTeller { .. }
            | Potential::ScarfI { .. }
            | Potential::RosenMorseI { .. } => TruncationRecipe::new(Natural),
            Potential::HyperbolicPoschlTeller { .. } => TruncationRecipe::new(Symmetric),
            Potential::ShiftedOscillator { .. } => {
                TruncationRecipe { n_points: 8001, ..TruncationRecipe::new(Symmetric) }
            }
            Potential::Oscillator3d { .. } => {
                TruncationRecipe { n_points: 8001, ..TruncationRecipe::new(HalfLine { eps: 1e-4 }) }
            }
            Potential::Coulomb { .. } => TruncationRecipe {
                kind: HalfLine { eps: 1e-3 },
                n_points: 8001,
                rel_tol: 5e-3,
                tail: 1e-14,
                oracle_levels: Some(2),
            },
            Potential::Morse { .. } => {
                TruncationRecipe { n_points: 8001, ..TruncationRecipe::new(LeftFixed { left: -4.0 }) }
            }
            Potential::Eckart { .. } => {
                TruncationRecipe { rel_tol: 1e-3, ..TruncationRecipe::new(HalfLine { eps: 1e-4 }) }
            }
        }
    }

    /// Dirichlet grid for the finite-difference oracle. `n_points` falls
    /// back to `PDEM_GRID_N`, then to the recipe size.
    pub fn oracle_grid(&self, n_points: Option<usize>) -> Result<Grid> {
        let recipe = self.truncation();
        let n = match n_points {
            Some(n) => n,
            None => match std::env::var("PDEM_GRID_N") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parameter(format!("PDEM_GRID_N = `{v}` is not a grid size")))?,
                Err(_) => recipe.n_points,
            },
        };
        let dom = self.domain();
        let (l0, r0, left_moves) = match recipe.kind {
            TruncationKind::Natural => {
                return match (dom.left().finite(), dom.right().finite()) {
                    (Some(a), Some(b)) => Grid::new(a, b, n),
                    _ => Err(Error::Domain { x: f64::NAN, domain: dom.to_string() }),
                };
            }
            TruncationKind::HalfLine { eps } => (eps, START, false),
            TruncationKind::LeftFixed { left } => (left, START, true),
            TruncationKind::Symmetric => (-START, START, true),
        };
        let df = self.deforming();
        let (mut lo, mut hi) = (l0, r0);
        for _ in 0..MAX_DOUBLINGS {
            let grid = Grid::new(lo, hi, n)?;
            let (left_ok, right_ok) = self.tails_negligible(&grid, &df, recipe.tail);
            let next_lo =
                if recipe.kind == TruncationKind::Symmetric { 2.0 * lo } else { lo - 0.25 * l0.abs() };
            let grow_left = left_moves && !left_ok && df.f_raw(next_lo) < F_CEILING;
            let grow_right = !right_ok && df.f_raw(2.0 * hi) < F_CEILING;
            if !grow_left && !grow_right {
                return Ok(grid);
            }
            if recipe.kind == TruncationKind::Symmetric {
                lo *= 2.0;
                hi *= 2.0;
            } else {
                if grow_left {
                    lo = next_lo;
                }
                if grow_right {
                    hi *= 2.0;
                }
            }
        }
        Grid::new(lo, hi, n)
    }

    /// Whether the normalized `|psi_0|^2 max(f, 1)` is below `tail` at each
    /// end. Samples where the closed form over- or underflows count as zero,
    /// and the outermost representable node stands in for the edge.
    fn tails_negligible(&self, grid: &Grid, df: &DeformingFunction, tail: f64) -> (bool, bool) {
        let nodes = grid.nodes();
        let sq: Vec<Option<f64>> = nodes
            .iter()
            .map(|&x| self.ground_state_closed(x).ok().filter(|v| v.is_finite()).map(|v| v * v))
            .collect();
        let finite = sq.iter().filter(|v| v.is_some()).count();
        if 2 * finite < sq.len() {
            return (false, false);
        }
        let dense: Vec<f64> = sq.iter().map(|v| v.unwrap_or(0.0)).collect();
        let norm = quadrature(&dense, grid);
        if !(norm > 0.0) {
            return (false, false);
        }
        let edge = |i: usize| dense[i] / norm * df.f_raw(nodes[i]).max(1.0) < tail;
        let first = sq.iter().position(|v| v.is_some()).unwrap_or(0);
        let last = sq.iter().rposition(|v| v.is_some()).unwrap_or(0);
        (edge(first), edge(last))
    }

    /// Known disagreement between the closed-form `E_n` and the
    /// coefficient-matched chain.
    pub fn energy_flag(&self) -> Option<&'static str> {
        match self {
            Potential::ScarfI { .. } => Some(
                "closed-form E_n carries -1/4 (2n+1+D+ + D-)^2 where coefficient matching gives +1/4 (2n+1+D+ + D-)^2; chain energies are used for oracle comparison",
            ),
            _ => None,
        }
    }
}

const START: f64 = 20.0;
const MAX_DOUBLINGS: usize = 6;
const F_CEILING: f64 = 1e100;

fn scarf_deltas(a: f64, b: f64, alpha: f64) -> (f64, f64) {
    let dp = (0.25 * sq(1.0 - alpha) + (a + b) * (a + b - 1.0)).sqrt();
    let dm = (0.25 * sq(1.0 + alpha) + (a - b) * (a - b - 1.0)).sqrt();
    (dp, dm)
}

fn eckart_like_chain(lambda: f64, mu: f64, alpha: f64, depth: usize) -> Vec<(f64, f64)> {
    (0..=depth)
        .map(|i| {
            let i = i as f64;
            let li = lambda - i;
            (li, (lambda * mu - 0.5 * alpha * i * (2.0 * lambda - i)) / li)
        })
        .collect()
}
