use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use opgraph::spectral::{ClassSignature, SearchBudget};
use opgraph::starfield::{GaussianRationals, GfSquare, StarField};
use serde::{Deserialize, Serialize};

/// Which star-field to compute over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BackendConfig {
    Qi,
    Gf {
        p: u32,
        exponent: u32,
        /// Monic modulus of GF(q²) over GF(p), lowest degree first. The
        /// first irreducible in lexicographic order when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig::Gf { p: 3, exponent: 1, modulus: None }
    }
}

pub enum Backend {
    Qi(GaussianRationals),
    Gf(GfSquare),
}

impl BackendConfig {
    pub fn build(&self) -> anyhow::Result<Backend> {
        Ok(match self {
            BackendConfig::Qi => Backend::Qi(GaussianRationals),
            BackendConfig::Gf { p, exponent, modulus: None } => Backend::Gf(GfSquare::new(*p, *exponent)?),
            BackendConfig::Gf { p, exponent, modulus: Some(m) } => {
                Backend::Gf(GfSquare::with_modulus(*p, *exponent, m.clone())?)
            }
        })
    }

    /// Pin the modulus actually used so the echoed config is explicit.
    pub fn resolved(&self) -> anyhow::Result<Self> {
        Ok(match self.build()? {
            Backend::Qi(_) => BackendConfig::Qi,
            Backend::Gf(gf) => BackendConfig::Gf {
                p: gf.characteristic(),
                exponent: gf.exponent(),
                modulus: Some(gf.modulus().to_vec()),
            },
        })
    }
}

/// Eigenvalues (tokens parsed by the backend) and eigenspace dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureConfig {
    pub sigma: Vec<String>,
    pub dims: Vec<usize>,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        SignatureConfig { sigma: vec!["0".into(), "1".into(), "2".into()], dims: vec![1, 1, 1] }
    }
}

impl SignatureConfig {
    pub fn build<F: StarField>(&self, f: &F) -> anyhow::Result<ClassSignature<F::Elem>> {
        let sigma = self.sigma.iter().map(|s| f.parse_fixed(s)).collect::<opgraph::Result<Vec<_>>>()?;
        Ok(ClassSignature::new(f, sigma, self.dims.clone())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetConfig {
    pub max_attempts: u64,
    pub max_seconds: f64,
    pub height: u32,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetConfig { max_attempts: b.max_attempts, max_seconds: b.max_seconds, height: b.height }
    }
}

impl From<BudgetConfig> for SearchBudget {
    fn from(b: BudgetConfig) -> Self {
        SearchBudget { max_attempts: b.max_attempts, max_seconds: b.max_seconds, height: b.height }
    }
}

/// Command-specific settings. Index positions are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub dump: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub compare_induced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub backend: BackendConfig,
    #[serde(default)]
    pub signature: SignatureConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub options: Options,
    /// Directory that relative paths in the config are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_seed() -> u64 {
    2024
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: None,
            backend: BackendConfig::default(),
            signature: SignatureConfig::default(),
            seed: default_seed(),
            budget: BudgetConfig::default(),
            options: Options::default(),
            base_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// A path from the config, relative to the config file when it was
    /// loaded from one.
    pub fn resolve(&self, path: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) if Path::new(path).is_relative() => dir.join(path),
            _ => PathBuf::from(path),
        }
    }

    /// Convert 1-based positions to 0-based ones, checking the range.
    pub fn positions(values: &[usize], len: usize) -> anyhow::Result<Vec<usize>> {
        values
            .iter()
            .map(|&k| {
                if k == 0 || k > len {
                    bail!("position {k} is outside 1..={len}");
                }
                Ok(k - 1)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_roundtrip_and_defaults() {
        let cfg: ExperimentConfig = serde_json::from_str(r#"{"backend":{"kind":"qi"}}"#).unwrap();
        assert_eq!(cfg.backend, BackendConfig::Qi);
        assert_eq!(cfg.seed, 2024);
        assert_eq!(cfg.signature.dims, vec![1, 1, 1]);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn resolved_backend_pins_modulus() {
        let r = BackendConfig::default().resolved().unwrap();
        assert_eq!(r, BackendConfig::Gf { p: 3, exponent: 1, modulus: Some(vec![1, 0, 1]) });
    }

    #[test]
    fn positions_are_one_based() {
        assert_eq!(ExperimentConfig::positions(&[1, 3], 3).unwrap(), vec![0, 2]);
        assert!(ExperimentConfig::positions(&[0], 3).is_err());
        assert!(ExperimentConfig::positions(&[4], 3).is_err());
    }
}
