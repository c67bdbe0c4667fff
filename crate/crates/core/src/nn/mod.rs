//! Dense feed-forward engine and the auto-encoder cortex built on it.

mod adam;
mod autoencoder;
mod gradcheck;
mod layer;
mod loss;
mod network;
mod scalar;
mod train;
mod weights;

pub use adam::{Adam, AdamConfig};
pub use autoencoder::{
    build_autoencoder, validate_topology, AutoEncoder, LatentCode, NormalizedVector,
};
pub use gradcheck::{gradient_check, max_relative_error, numerical_gradients, relative_error};
pub use layer::{Activation, DenseLayer};
pub use loss::mse;
pub use network::{ForwardTrace, Gradients, Mlp};
pub use scalar::Real;
pub use train::{
    train, train_with_corruption, EpochRecord, InputCorruption, TrainConfig, TrainHistory,
};
pub use weights::{
    load_weights, load_weights_expecting, read_weights, save_weights, write_weights,
};
