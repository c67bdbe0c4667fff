//! Run configuration and the JSON manifest written next to every run's outputs.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{Augmentation, FrameRenderer, GlyphAtlas, RandomOcclusion};
use crate::error::{CtnnError, Result};
use crate::nn::{validate_topology, AdamConfig, TrainConfig};
use crate::DEFAULT_TOPOLOGY;

pub const RUN_MANIFEST_NAME: &str = "run_manifest.json";

/// Stream ids for seeds derived from the master seed.
pub mod streams {
    pub const INIT: u64 = 1;
    pub const SHUFFLE: u64 = 2;
    pub const SEQUENCE: u64 = 3;
    /// Efficiency sweep row `i` uses `SWEEP + i`.
    pub const SWEEP: u64 = 1000;
}

/// Deterministic sub-seed: first word of the ChaCha stream `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub per_class: u32,
    /// Held-out frames per class.
    pub test_per_class: u32,
    pub augmentation: Augmentation,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            per_class: 30,
            test_per_class: 10,
            augmentation: Augmentation::default(),
        }
    }
}

impl DatasetConfig {
    pub fn renderer(&self) -> FrameRenderer {
        FrameRenderer::new(GlyphAtlas::embedded(), self.augmentation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub topology: Vec<usize>,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: AdamConfig,
    /// Denoising occlusion applied to training inputs.
    pub occlusion_augmentation: RandomOcclusion,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let train = TrainConfig::default();
        ModelConfig {
            topology: DEFAULT_TOPOLOGY.to_vec(),
            epochs: train.epochs,
            batch_size: train.batch_size,
            optimizer: train.adam,
            occlusion_augmentation: RandomOcclusion::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SequenceConfig {
    pub length: usize,
    pub similar_fraction: f64,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        SequenceConfig {
            length: 100,
            similar_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub thresholds: Vec<f64>,
    pub similar_fractions: Vec<f64>,
    pub length: usize,
    pub occlusion_fractions: Vec<f64>,
}

const TENTHS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            thresholds: vec![20.0, 50.0, 100.0, 200.0],
            similar_fractions: TENTHS.to_vec(),
            length: 100,
            occlusion_fractions: TENTHS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub dataset: DatasetConfig,
    pub model: ModelConfig,
    pub threshold: f64,
    pub sequence: SequenceConfig,
    pub sweep: SweepConfig,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            dataset: DatasetConfig::default(),
            model: ModelConfig::default(),
            threshold: 100.0,
            sequence: SequenceConfig::default(),
            sweep: SweepConfig::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Parses a JSON config; missing fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CtnnError::io(path, e))?;
        let config: RunConfig =
            serde_json::from_str(&text).map_err(|e| CtnnError::format(path, e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        validate_topology(&self.model.topology)?;
        if self.model.batch_size == 0 {
            return Err(CtnnError::InvalidArgument(
                "batch_size must be positive".into(),
            ));
        }
        if self.dataset.per_class == 0 {
            return Err(CtnnError::InvalidArgument(
                "per_class must be positive".into(),
            ));
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(CtnnError::InvalidArgument(format!(
                "threshold must be a finite value >= 0, got {}",
                self.threshold
            )));
        }
        if self
            .sweep
            .thresholds
            .iter()
            .any(|t| !(*t >= 0.0 && t.is_finite()))
        {
            return Err(CtnnError::InvalidArgument(
                "sweep thresholds must be finite and >= 0".into(),
            ));
        }
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        if !in_unit(&self.sequence.similar_fraction)
            || !self.sweep.similar_fractions.iter().all(in_unit)
            || !self.sweep.occlusion_fractions.iter().all(in_unit)
        {
            return Err(CtnnError::InvalidArgument(
                "fractions must lie in [0, 1]".into(),
            ));
        }
        if self.sequence.length < 2 || self.sweep.length < 2 {
            return Err(CtnnError::InvalidArgument(
                "sequence length must be at least 2".into(),
            ));
        }
        Ok(())
    }

    /// Training settings with shuffling seeded from the master seed.
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.model.epochs,
            batch_size: self.model.batch_size,
            adam: self.model.optimizer,
            seed: self.shuffle_seed(),
        }
    }

    pub fn init_seed(&self) -> u64 {
        derive_seed(self.seed, streams::INIT)
    }

    pub fn shuffle_seed(&self) -> u64 {
        derive_seed(self.seed, streams::SHUFFLE)
    }

    pub fn sequence_seed(&self) -> u64 {
        derive_seed(self.seed, streams::SEQUENCE)
    }
}

/// Everything needed to reproduce a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: RunConfig,
    pub seeds: BTreeMap<String, u64>,
    /// SHA-256 of the weight file the run read or wrote.
    pub weights_sha256: Option<String>,
    /// SHA-256 of each output, keyed by path relative to the output directory.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        let mut seeds = BTreeMap::new();
        seeds.insert("master".to_string(), config.seed);
        RunManifest {
            command: command.to_string(),
            config: config.clone(),
            seeds,
            weights_sha256: None,
            outputs: BTreeMap::new(),
        }
    }

    pub fn with_seed(mut self, name: &str, seed: u64) -> Self {
        self.seeds.insert(name.to_string(), seed);
        self
    }

    /// Records the checksum of `path`, keyed relative to `root`.
    pub fn record_output(&mut self, root: &Path, path: &Path) -> Result<()> {
        let key = path
            .strip_prefix(root)
            .unwrap_or(path)
            .to_string_lossy()
            .replace('\\', "/");
        self.outputs.insert(key, sha256_file(path)?);
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| CtnnError::io(dir, e))?;
        let path = dir.join(RUN_MANIFEST_NAME);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CtnnError::io(&path, e))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CtnnError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CtnnError::format(path, e.to_string()))
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path).map_err(|e| CtnnError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| CtnnError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
