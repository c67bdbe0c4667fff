//! Result tables behind the three experiments: the training curve, the
//! efficiency sweep over threshold and stream similarity, and occlusion
//! robustness. Each produces a CSV; weights and images are written alongside.

mod efficiency;
mod occlusion;
mod training;

pub use efficiency::{
    run_efficiency_sweep, sweep_sequence_seed, EfficiencyRow, EfficiencySweepResult, EFFICIENCY_CSV,
};
pub use occlusion::{
    accuracy_baseline, baseline_from_reconstructions, demo_recovery_rate, reconstruct_frames,
    reconstruction_accuracy, run_occlusion_demo, run_occlusion_sweep, AccuracyBaseline,
    ClassPrototypes, OcclusionDemo, OcclusionHeatmap, OCCLUSION_CSV,
};
pub use training::{
    run_training_experiment, train_model, training_data, write_training_outputs, TrainingData,
    TrainingRun, LOSSES_CSV, WEIGHTS_FILE,
};

use std::fs;
use std::path::Path;

use crate::error::{CtnnError, Result};

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CtnnError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CtnnError::io(path, e))
}
