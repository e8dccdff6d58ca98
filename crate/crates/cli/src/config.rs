//! Simulation config files: flat TOML key/value pairs.
//!
//! ```toml
//! n = 1000
//! m = 1000
//! target_family = "gpd"
//! target_index = 1.25
//! censor_family = "frechet"
//! censor_indices = [0.05, 0.1, 0.5, 1.0]
//! k_min = 10
//! k_max = 150
//! level = 0.95
//! methods = ["EL", "BCL", "B", "ML"]
//! seed = 20240501
//! ```
//!
//! Leaving out `censor_family` gives the complete-data study.

use serde::Deserialize;
use sha2::{Digest, Sha256};
use tailindex::{Family, Method, ModelSpec, SimConfig};

use crate::error::{CliError, CliResult};

fn default_level() -> f64 {
    0.95
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    pub n: usize,
    pub m: usize,
    pub target_family: String,
    pub target_index: f64,
    #[serde(default)]
    pub censor_family: Option<String>,
    #[serde(default)]
    pub censor_indices: Vec<f64>,
    pub k_min: usize,
    pub k_max: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default)]
    pub methods: Option<Vec<String>>,
    #[serde(default)]
    pub seed: u64,
}

/// A parsed config together with the SHA-256 of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub file: SimFile,
    pub sha256: String,
}

pub fn parse_config(text: &str) -> CliResult<LoadedConfig> {
    let file: SimFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_owned()))?;
    let digest = Sha256::digest(text.as_bytes());
    let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(LoadedConfig { file, sha256 })
}

pub fn parse_methods<S: AsRef<str>>(names: &[S]) -> CliResult<Vec<Method>> {
    names
        .iter()
        .map(|s| s.as_ref().parse::<Method>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn field<T>(name: &str, r: tailindex::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Config(format!("{name}: {e}")))
}

impl SimFile {
    /// One study per censoring index (a single complete-data study if none).
    pub fn studies(&self, seed: u64, methods_override: Option<&[Method]>) -> CliResult<Vec<SimConfig>> {
        let target = ModelSpec::new(field("target_family", self.target_family.parse::<Family>())?, self.target_index);
        let target = field("target_index", target)?;
        let censoring = match (&self.censor_family, self.censor_indices.is_empty()) {
            (None, true) => vec![None],
            (Some(fam), false) => {
                let family = field("censor_family", fam.parse::<Family>())?;
                self.censor_indices
                    .iter()
                    .map(|&b| field("censor_indices", ModelSpec::new(family, b)).map(Some))
                    .collect::<CliResult<_>>()?
            }
            (Some(_), true) => return Err(CliError::Config("censor_indices: required with censor_family".into())),
            (None, false) => return Err(CliError::Config("censor_family: required with censor_indices".into())),
        };
        let methods = match (methods_override, &self.methods) {
            (Some(m), _) => m.to_vec(),
            (None, Some(names)) => parse_methods(names).map_err(|e| CliError::Config(format!("methods: {e}")))?,
            (None, None) if censoring[0].is_some() => Method::ALL.iter().copied().filter(|m| m.supports_censoring()).collect(),
            (None, None) => Method::ALL.to_vec(),
        };
        censoring
            .into_iter()
            .map(|censor| {
                let cfg = SimConfig {
                    n: self.n,
                    m: self.m,
                    target,
                    censor,
                    k_min: self.k_min,
                    k_max: self.k_max,
                    level: self.level,
                    methods: methods.clone(),
                    master_seed: seed,
                };
                cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
                Ok(cfg)
            })
            .collect()
    }
}
