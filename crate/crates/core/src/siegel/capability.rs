//! Limits on the order `j_max` of brute-forced Siegel series coefficients.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{capability, usage, Result};

/// Environment variable naming a JSON file that replaces the default table.
pub const CAPABILITY_ENV: &str = "MAASS_CAPABILITY";

/// Largest `j_max` per form size and prime; primes missing from a map use its default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityTable {
    pub size2: BTreeMap<u64, u32>,
    pub size2_default: u32,
    pub size4: BTreeMap<u64, u32>,
    pub size4_default: u32,
}

impl Default for CapabilityTable {
    fn default() -> Self {
        CapabilityTable {
            size2: BTreeMap::from([(2, 8), (3, 6), (5, 4), (7, 3)]),
            size2_default: 2,
            size4: BTreeMap::from([(2, 4), (3, 3), (5, 2), (7, 1)]),
            size4_default: 1,
        }
    }
}

impl CapabilityTable {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| usage!("cannot read capability table {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| usage!("bad capability table {}: {e}", path.display()))
    }

    /// The table named by [`CAPABILITY_ENV`], or the default one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CAPABILITY_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::default()),
        }
    }

    pub fn j_max(&self, size: usize, p: u64) -> Option<u32> {
        match size {
            2 => Some(self.size2.get(&p).copied().unwrap_or(self.size2_default)),
            4 => Some(self.size4.get(&p).copied().unwrap_or(self.size4_default)),
            _ => None,
        }
    }

    pub fn check(&self, size: usize, p: u64, j: u32) -> Result<()> {
        match self.j_max(size, p) {
            None => Err(capability!("Siegel series are implemented for sizes 2 and 4, got {size}")),
            Some(limit) if j > limit => Err(capability!("j_max = {j} exceeds the capability limit {limit} for size {size} at p = {p}")),
            Some(_) => Ok(()),
        }
    }
}
