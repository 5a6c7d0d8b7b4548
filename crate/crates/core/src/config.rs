use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const DEFAULT_SEED: u64 = 20_210_915;

/// Everything a batch run depends on. Two runs with equal configs produce identical files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    /// Node budget handed to each exhaustive search.
    pub node_budget: u64,
    /// Attempts for randomized samplers.
    pub tries: usize,
    /// Per-check wall-clock limit in seconds; a slower check is reported as failed.
    pub time_limit_secs: Option<u64>,
    pub vertex_cap: usize,
    pub out_dir: PathBuf,
    pub jobs: usize,
    /// Allowed gap between the optimizer and the exact Fano Lagrangian.
    pub optimizer_tolerance: f64,
    /// Largest vertex count of the isomorphism catalogue in the hom-freeness check.
    pub catalogue_n: usize,
    pub symmetrization_samples: usize,
    /// Extra .hg3 files, each parsed as its own check.
    pub fixtures: Vec<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            node_budget: 50_000_000,
            tries: 64,
            time_limit_secs: None,
            vertex_cap: 5000,
            out_dir: PathBuf::from("mtgraph-out"),
            jobs: 1,
            optimizer_tolerance: 1e-9,
            catalogue_n: 6,
            symmetrization_samples: 100,
            fixtures: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"seed": 5, "jobs": 3}"#).unwrap();
        assert_eq!((c.seed, c.jobs, c.catalogue_n), (5, 3, 6));
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
