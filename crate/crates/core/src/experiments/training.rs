use std::path::{Path, PathBuf};

use super::write_text;
use crate::config::RunConfig;
use crate::dataset::make_entries;
use crate::error::Result;
use crate::nn::{
    build_autoencoder, save_weights, train_with_corruption, AutoEncoder, NormalizedVector,
    TrainHistory,
};
use crate::thalamus::SensoryFrame;

pub const LOSSES_CSV: &str = "losses.csv";
pub const WEIGHTS_FILE: &str = "weights.ctnn";

#[derive(Debug, Clone)]
pub struct TrainingData {
    pub train: Vec<SensoryFrame>,
    /// Held-out variants, disjoint seeds from `train`.
    pub test: Vec<SensoryFrame>,
}

/// `per_class` training frames and `test_per_class` held-out frames per digit.
pub fn training_data(config: &RunConfig) -> Result<TrainingData> {
    let renderer = config.dataset.renderer();
    let per_class = config.dataset.per_class;
    let frames = |range| -> Result<Vec<SensoryFrame>> {
        Ok(make_entries(&renderer, range, config.seed)?
            .into_iter()
            .map(|e| e.frame)
            .collect())
    };
    Ok(TrainingData {
        train: frames(0..per_class)?,
        test: frames(per_class..per_class + config.dataset.test_per_class)?,
    })
}

/// Builds the auto-encoder from the config's topology and trains it on `data`.
pub fn train_model(config: &RunConfig, data: &TrainingData) -> Result<(AutoEncoder, TrainHistory)> {
    let mut model = build_autoencoder(&config.model.topology, config.init_seed())?;
    let normalize = |frames: &[SensoryFrame]| -> Vec<NormalizedVector> {
        frames.iter().map(SensoryFrame::normalized).collect()
    };
    let history = train_with_corruption(
        &mut model,
        &normalize(&data.train),
        &normalize(&data.test),
        &config.train_config(),
        &config.model.occlusion_augmentation,
    )?;
    Ok((model, history))
}

#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub model: AutoEncoder,
    pub history: TrainHistory,
    pub losses_path: PathBuf,
    pub weights_path: PathBuf,
}

/// Writes `losses.csv` and `weights.ctnn` into `out_dir`.
pub fn write_training_outputs(
    model: &AutoEncoder,
    history: &TrainHistory,
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let losses_path = out_dir.join(LOSSES_CSV);
    write_text(&losses_path, &history.to_csv())?;
    let weights_path = out_dir.join(WEIGHTS_FILE);
    save_weights(model, &weights_path)?;
    Ok((losses_path, weights_path))
}

/// Generates the data set, trains, and writes the loss curve and weights.
pub fn run_training_experiment(config: &RunConfig, out_dir: &Path) -> Result<TrainingRun> {
    let data = training_data(config)?;
    let (model, history) = train_model(config, &data)?;
    let (losses_path, weights_path) = write_training_outputs(&model, &history, out_dir)?;
    Ok(TrainingRun {
        model,
        history,
        losses_path,
        weights_path,
    })
}
