use horw::epidemic::EpidemicParams;
use horw::Method;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Everything that determines an experiment's output. The hash of this
/// struct goes into every artifact header, so it holds the input digest
/// rather than the path and not the output directory.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: &'static str,
    pub input_sha256: String,
    pub separator: &'static str,
    pub skip_header: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<Method>,
    pub tol: f64,
    pub max_iter: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epidemic: Option<EpidemicConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<String>,
    pub rng_seed: u64,
    pub format: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpidemicConfig {
    /// Fixed beta, or `None` to use `beta_mult` times the threshold.
    pub beta: Option<f64>,
    pub beta_mult: f64,
    pub beta2_ratio: f64,
    pub params: EpidemicParams,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        for m in &self.methods {
            m.validate()?;
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return usage("tol must be positive".into());
        }
        if self.max_iter == 0 {
            return usage("max-iter must be positive".into());
        }
        if let Some(e) = &self.epidemic {
            e.params.validate()?;
            if let Some(b) = e.beta {
                if !(0.0..=1.0).contains(&b) {
                    return usage("beta out of range [0,1]".into());
                }
            }
            if !(e.beta_mult >= 0.0 && e.beta_mult.is_finite()) {
                return usage("beta-mult must be a nonnegative number".into());
            }
            if !(0.0..=1.0).contains(&e.beta2_ratio) {
                return usage("beta2-ratio out of range [0,1]".into());
            }
        }
        if let Some(t) = self.target {
            if !(t > 0.0 && t < 1.0) {
                return usage("target out of range (0,1)".into());
            }
        }
        if self.window.is_some_and(|w| w < 2) {
            return usage("window must be at least 2".into());
        }
        Ok(())
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
