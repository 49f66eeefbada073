//! Run configuration: one JSON document, every section optional.

use std::fs;
use std::path::{Path, PathBuf};

use lrt_core::classify::{ClassifierMode, DEFAULT_SPARSITY};
use lrt_core::cluster::{ClustererSpec, LrscConfig};
use lrt_core::data::SyntheticSpec;
use lrt_core::decomp::RpcaConfig;
use lrt_core::learn::LearnConfig;
use lrt_core::rng::derive_seed;
use lrt_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;

/// Fixed offsets under which the root seed is split per component.
#[derive(Clone, Copy, Debug)]
pub enum Component {
    Synth = 1,
    Learn = 2,
    Cluster = 3,
    Split = 4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSection {
    pub mode: ClassifierMode,
    pub sparsity: usize,
    pub rpca: RpcaConfig,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        Self {
            mode: ClassifierMode::Omp,
            sparsity: DEFAULT_SPARSITY,
            rpca: RpcaConfig::default(),
        }
    }
}

/// Input and output locations. Command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoPaths {
    pub data: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub test_data: Option<PathBuf>,
    pub test_labels: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub truth: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub learn: LearnConfig,
    pub clusterer: ClustererSpec,
    pub lrsc: LrscConfig,
    pub classifier: ClassifierSection,
    pub synth: Option<SyntheticSpec>,
    pub io: IoPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            learn: LearnConfig::default(),
            clusterer: ClustererSpec::default(),
            lrsc: LrscConfig::default(),
            classifier: ClassifierSection::default(),
            synth: None,
            io: IoPaths::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text, path)
    }

    pub fn seed_for(&self, component: Component) -> u64 {
        derive_seed(self.seed, &[component as u64])
    }

    /// Learning settings with the seed taken from the root seed.
    pub fn learn_config(&self) -> LearnConfig {
        LearnConfig {
            seed: self.seed_for(Component::Learn),
            ..self.learn.clone()
        }
    }
}

/// `value` if given, otherwise the config entry, otherwise a usage error.
pub fn required(value: Option<PathBuf>, fallback: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    value
        .or_else(|| fallback.clone())
        .ok_or_else(|| Error::Parameter(format!("{flag} is required (flag or config io section)")))
}
