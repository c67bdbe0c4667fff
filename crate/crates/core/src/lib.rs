//! Corticothalamic neural network (CTNN).
//!
//! An auto-encoder plays the role of the cortex. A thalamic stage compares
//! every incoming multi-modal frame against the cortex's last reconstruction
//! and only forwards the frame (one "network call") when the mean squared
//! difference reaches a threshold.
//!
//! - [`nn`]: dense network engine, manual backpropagation, Adam, weight files.
//! - [`thalamus`]: reconstruction engine, difference score, gate, stream runner.
//! - [`dataset`]: typeset digit glyphs, tone images, sequences, occlusion.
//! - [`experiments`]: training curves, efficiency sweeps, occlusion heatmaps.
//! - [`config`]: serializable run configuration and run manifests.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod nn;
pub mod pgm;
pub mod thalamus;

pub use error::{CtnnError, Result};
pub use nn::{build_autoencoder, mse, AutoEncoder, LatentCode, NormalizedVector, TrainHistory};
pub use thalamus::{
    difference_score, gate, reconstruction_engine, run_sequence, Cortex, CtnnState, Reconstruction,
    SensoryFrame, StepRecord,
};

/// Side length of one modality grid.
pub const GRID_SIDE: usize = 28;
/// Pixels in one modality grid.
pub const MODALITY_LEN: usize = GRID_SIDE * GRID_SIDE;
/// Width of a combined visual + audio frame and of the auto-encoder ends.
pub const FRAME_LEN: usize = 2 * MODALITY_LEN;
/// Width of the auto-encoder bottleneck.
pub const LATENT_LEN: usize = 100;
/// Upper end of the raw intensity scale.
pub const MAX_INTENSITY: f32 = 255.0;
/// Default hidden-layer topology: 1568 -> 512 -> 256 -> 100 -> 256 -> 512 -> 1568.
pub const DEFAULT_TOPOLOGY: [usize; 7] = [FRAME_LEN, 512, 256, LATENT_LEN, 256, 512, FRAME_LEN];
