//! Bound-state wavefunctions, normalization and admissibility.

mod admissibility;
mod antideriv;
mod poly;
mod state;

pub use admissibility::{
    admissibility_check, admissibility_of, gram_matrix, AdmissibilityVerdict, EndEvidence, IntegrabilityEvidence,
};
pub use poly::{build_polynomial, DeformedPolynomial};
pub use state::{
    excited_state_eval, ground_state_numeric, polynomial_chain, LogValue, StateModel,
};

use crate::error::{Error, Result};
use crate::interval::Grid;
use crate::oracle::quadrature;

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    /// Factor applied to the input samples.
    pub norm_constant: f64,
    pub samples: Vec<f64>,
}

/// Scales `samples` to unit Simpson norm.
pub fn normalize(samples: &[f64], grid: &Grid) -> Result<Normalized> {
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("non-finite wavefunction sample".into()));
    }
    let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
    let integral = quadrature(&sq, grid);
    if !(integral >= 1e-300) {
        return Err(Error::ZeroNorm);
    }
    let c = 1.0 / integral.sqrt();
    Ok(Normalized { norm_constant: c, samples: samples.iter().map(|v| v * c).collect() })
}

/// Normalized samples of level `n` on every grid node.
pub fn sample_normalized(model: &StateModel, grid: &Grid) -> Result<Vec<f64>> {
    Ok(normalize(&model.sample_scaled(grid)?, grid)?.samples)
}
