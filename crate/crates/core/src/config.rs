//! Flat `key = value` solver configuration files (TOML syntax).
//!
//! Keys are the field names of [`SolverConfig`]; anything omitted keeps its
//! default. Unknown keys are rejected.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

pub fn parse_config(text: &str) -> Result<SolverConfig> {
    let cfg: SolverConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SolverConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn to_toml(cfg: &SolverConfig) -> String {
    toml::to_string(cfg).expect("flat config always serializes")
}

/// SHA-256 of the canonical JSON form, hex encoded.
pub fn config_hash(cfg: &SolverConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(&json))
}
