pub mod ambiguity;
pub mod catalog;
pub mod deforming;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod ordering;
pub mod report;
pub mod si_engine;
pub mod verify;
pub mod wavefunctions;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ordering.md")]
    mod ordering {}
    #[doc = include_str!("../../../book/src/deforming.md")]
    mod deforming {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/wavefunctions.md")]
    mod wavefunctions {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
