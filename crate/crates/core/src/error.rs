use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the open domain {domain}")]
    Domain { x: f64, domain: String },

    #[error("deforming function is not positive at x = {x} (f = {f})")]
    NonPositive { x: f64, f: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("level n = {n} is beyond the bound-state count {count}")]
    Index { n: usize, count: usize },

    #[error("singular point at x = {x}: {what}")]
    SingularPoint { x: f64, what: &'static str },

    #[error("potential is singular at x = {x} (|V| = {value})")]
    SingularPotential { x: f64, value: f64 },

    #[error("no real root in the admissible branch: {0}")]
    NoRealRoot(String),

    #[error("degenerate superpotential class: {0}")]
    DegenerateClass(String),

    #[error("parameter chain undefined: {0}")]
    Chain(String),

    #[error("inverse iteration did not converge: {0}")]
    Convergence(String),

    #[error("wavefunction has zero norm")]
    ZeroNorm,

    #[error("unknown potential `{name}`{}", note.map(|n| format!(" ({n})")).unwrap_or_default())]
    NotFound { name: String, note: Option<&'static str> },
}

pub type Result<T> = std::result::Result<T, Error>;
