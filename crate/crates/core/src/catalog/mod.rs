//! Registry of deformed potentials with their closed-form data.

mod potential;
mod registry;

pub use potential::{Counting, Potential, TruncationKind, TruncationRecipe};
pub use registry::{CatalogEntry, Exclusion, ParamSpec, ENTRIES, EXCLUSIONS};

use serde::Serialize;

use crate::error::{Error, Result};

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    if let Some(e) = ENTRIES.iter().find(|e| e.name == name) {
        return Ok(e);
    }
    let note = EXCLUSIONS.iter().find(|x| x.name == name).map(|x| x.reason);
    Err(Error::NotFound { name: name.to_string(), note })
}

#[derive(Debug, Clone, Serialize)]
pub struct Listing {
    pub entries: &'static [CatalogEntry],
    pub exclusions: &'static [Exclusion],
}

pub fn list() -> Listing {
    Listing { entries: &ENTRIES, exclusions: &EXCLUSIONS }
}

/// Every entry at its default parameters.
pub fn defaults() -> Vec<Potential> {
    ENTRIES
        .iter()
        .map(|e| Potential::default_for(e.name).expect("defaults lie inside the ranges"))
        .collect()
}
