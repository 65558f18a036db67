//! Static metadata for the catalog entries and the documented exclusions.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    /// Deformation parameter (part of `g`) rather than a potential parameter.
    pub deformation: bool,
}

const fn p(name: &'static str, default: f64) -> ParamSpec {
    ParamSpec { name, default, deformation: false }
}

const fn d(name: &'static str, default: f64) -> ParamSpec {
    ParamSpec { name, default, deformation: true }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub title: &'static str,
    pub domain: &'static str,
    pub v_eff: &'static str,
    pub superpotential: &'static str,
    pub deforming: &'static str,
    pub ranges: &'static str,
    pub counting: &'static str,
    pub params: &'static [ParamSpec],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exclusion {
    pub name: &'static str,
    pub title: &'static str,
    pub reason: &'static str,
}

pub static ENTRIES: [CatalogEntry; 10] = [
    CatalogEntry {
        name: "box",
        title: "Particle in a box",
        domain: "(-pi/2, pi/2)",
        v_eff: "0",
        superpotential: "class 1, phi = tan x, W = lambda tan x",
        deforming: "g = alpha sin^2 x",
        ranges: "-1 < alpha (alpha = 0 is the undeformed reference)",
        counting: "infinite",
        params: &[d("alpha", 0.5)],
    },
    CatalogEntry {
        name: "trig_poschl_teller",
        title: "Trigonometric Poschl-Teller",
        domain: "(-pi/2, pi/2)",
        v_eff: "A(A-1) sec^2 x",
        superpotential: "class 1, phi = tan x, W = lambda tan x",
        deforming: "g = alpha sin^2 x",
        ranges: "A > 1, -1 < alpha (alpha = 0 is the undeformed reference)",
        counting: "infinite",
        params: &[p("A", 2.0), d("alpha", 0.3)],
    },
    CatalogEntry {
        name: "hyperbolic_poschl_teller",
        title: "Hyperbolic Poschl-Teller",
        domain: "(-inf, inf)",
        v_eff: "-A(A+1) sech^2 x",
        superpotential: "class 1, phi = tanh x, W = lambda tanh x",
        deforming: "g = alpha sinh^2 x",
        ranges: "A > 0, 0 < alpha < 1",
        counting: "zero: |psi|^2 f tends to a nonzero constant at both ends",
        params: &[p("A", 1.0), d("alpha", 0.5)],
    },
    CatalogEntry {
        name: "shifted_oscillator",
        title: "Shifted oscillator",
        domain: "(-inf, inf)",
        v_eff: "omega^2/4 (x - 2b/omega)^2",
        superpotential: "class 1, phi = x, W = lambda x + mu",
        deforming: "g = alpha x^2 + 2 beta x",
        ranges: "omega > 0, alpha > beta^2",
        counting: "infinite",
        params: &[p("omega", 1.0), p("b", 0.5), d("alpha", 0.1), d("beta", 0.1)],
    },
    CatalogEntry {
        name: "oscillator_3d",
        title: "Three-dimensional oscillator",
        domain: "(0, inf)",
        v_eff: "omega^2 x^2/4 + l(l+1)/x^2",
        superpotential: "class 2, phi = 1/x, W = lambda/x + mu x",
        deforming: "g = alpha x^2",
        ranges: "omega > 0, l = 0, 1, 2, ..., alpha > 0",
        counting: "infinite",
        params: &[p("omega", 1.0), p("l", 1.0), d("alpha", 0.1)],
    },
    CatalogEntry {
        name: "coulomb",
        title: "Coulomb",
        domain: "(0, inf)",
        v_eff: "-e2/x + l(l+1)/x^2",
        superpotential: "class 1, phi = 1/x, W = lambda/x + mu",
        deforming: "g = alpha x",
        ranges: "e2 > 0, l = 0, 1, 2, ..., alpha > 0",
        counting: "finite: n^2 + (l+1)(2n+1) < e2/alpha",
        params: &[p("e2", 1.0), p("l", 0.0), d("alpha", 0.1)],
    },
    CatalogEntry {
        name: "morse",
        title: "Morse",
        domain: "(-inf, inf)",
        v_eff: "B^2 e^{-2x} - B(2A+1) e^{-x}",
        superpotential: "class 1, phi = e^{-x}, W = lambda e^{-x} + mu",
        deforming: "g = alpha e^{-x}",
        ranges: "A > 0, B > 0, alpha > 0",
        counting: "finite: n < A and alpha < alpha_max(n)",
        params: &[p("A", 1.0), p("B", 1.0), d("alpha", 0.5)],
    },
    CatalogEntry {
        name: "eckart",
        title: "Eckart",
        domain: "(0, inf)",
        v_eff: "A(A-1) csch^2 x - 2B coth x",
        superpotential: "class 1, phi = coth x, W = lambda coth x + mu",
        deforming: "g = alpha e^{-x} sinh x",
        ranges: "A >= 3/2, B > A^2, -2 <= alpha (alpha = 0 is the undeformed reference)",
        counting: "infinite if alpha = -2, else finite: (A+n)^2 < (2B + alpha A(A-1))/(2+alpha)",
        params: &[p("A", 1.5), p("B", 2.5), d("alpha", -1.0)],
    },
    CatalogEntry {
        name: "scarf_i",
        title: "Scarf I",
        domain: "(-pi/2, pi/2)",
        v_eff: "(B^2 + A^2 - A) sec^2 x - B(2A-1) tan x sec x",
        superpotential: "class 3, phi = sin x, W = lambda tan x + mu sec x",
        deforming: "g = alpha sin x",
        ranges: "0 < B < A - 1, |alpha| < 1 (alpha = 0 is the undeformed reference)",
        counting: "infinite",
        params: &[p("A", 3.0), p("B", 1.0), d("alpha", 0.3)],
    },
    CatalogEntry {
        name: "rosen_morse_i",
        title: "Rosen-Morse I",
        domain: "(0, pi)",
        v_eff: "A(A-1) csc^2 x + 2B cot x",
        superpotential: "class 1, phi = cot x, W = lambda cot x + mu",
        deforming: "g = sin x (alpha cos x + beta sin x)",
        ranges: "A >= 3/2, beta > -1, |alpha|/2 < sqrt(1 + beta)",
        counting: "infinite",
        params: &[p("A", 2.0), p("B", 1.0), d("alpha", 0.3), d("beta", 0.2)],
    },
];

pub static EXCLUSIONS: [Exclusion; 3] = [
    Exclusion {
        name: "scarf_ii",
        title: "Scarf II",
        reason: "no nontrivial values of the parameters may ensure positive definiteness of f on the whole real line",
    },
    Exclusion {
        name: "rosen_morse_ii",
        title: "Rosen-Morse II",
        reason: "the square-integrable wavefunctions fail the Hermiticity condition |psi|^2 f -> 0, so the deformed potential does not support any bound state",
    },
    Exclusion {
        name: "generalized_poschl_teller",
        title: "Generalized Poschl-Teller",
        reason: "the square-integrable wavefunctions fail the Hermiticity condition |psi|^2 f -> 0, so the deformed potential does not support any bound state",
    },
];
