//! Deformed shape invariance: superpotential classes and parameter chains.

pub mod chain;
pub mod class;

pub use chain::{
    partner_potential, si_residual, solve_chain, ChainProblem, ParameterChain, Residual,
    RootBranch, Sign,
};
pub use class::{BaseFunction, ClassId, Consts, SuperpotentialClass, WSample};
