use ndarray::{s, Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Adam, AdamConfig, AutoEncoder, Mlp, NormalizedVector};
use crate::error::{CtnnError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Seeds batch shuffling and any input corruption.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200,
            batch_size: 30,
            adam: AdamConfig::default(),
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    pub train_loss: f64,
    /// `None` when no test set was supplied.
    pub test_loss: Option<f64>,
}

/// Per-epoch losses; both are MSE on the normalized `[0, 1]` scale,
/// measured on clean inputs after the epoch's updates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub records: Vec<EpochRecord>,
}

impl TrainHistory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// `epoch,train_loss,test_loss` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,test_loss\n");
        for r in &self.records {
            let test = r.test_loss.map(|v| format!("{v:.8}")).unwrap_or_default();
            out.push_str(&format!("{},{:.8},{}\n", r.epoch, r.train_loss, test));
        }
        out
    }
}

/// Perturbs a training input in place before it is fed forward. The
/// reconstruction target stays the clean sample.
pub trait InputCorruption {
    fn corrupt(&self, input: &mut [f32], rng: &mut ChaCha8Rng);
}

/// Trains the auto-encoder to reproduce its inputs.
pub fn train(
    model: &mut AutoEncoder,
    train_set: &[NormalizedVector],
    test_set: &[NormalizedVector],
    config: &TrainConfig,
) -> Result<TrainHistory> {
    train_network(model.network_mut(), train_set, test_set, config, None)
}

/// Denoising variant of [`train`]: each batch input passes through
/// `corruption` while targets remain the clean samples.
pub fn train_with_corruption(
    model: &mut AutoEncoder,
    train_set: &[NormalizedVector],
    test_set: &[NormalizedVector],
    config: &TrainConfig,
    corruption: &dyn InputCorruption,
) -> Result<TrainHistory> {
    train_network(
        model.network_mut(),
        train_set,
        test_set,
        config,
        Some(corruption),
    )
}

pub(crate) fn train_network(
    net: &mut Mlp<f32>,
    train_set: &[NormalizedVector],
    test_set: &[NormalizedVector],
    config: &TrainConfig,
    corruption: Option<&dyn InputCorruption>,
) -> Result<TrainHistory> {
    if train_set.is_empty() {
        return Err(CtnnError::InvalidArgument("training set is empty".into()));
    }
    if config.batch_size == 0 {
        return Err(CtnnError::InvalidArgument(
            "batch size must be positive".into(),
        ));
    }
    let width = net.input_width();
    let train = stack(train_set, width)?;
    let test = if test_set.is_empty() {
        None
    } else {
        Some(stack(test_set, width)?)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut adam = Adam::new(config.adam, net);
    let mut order: Vec<usize> = (0..train.nrows()).collect();
    let mut history = TrainHistory::default();

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.batch_size) {
            let target = gather(&train, chunk);
            let mut input = target.clone();
            if let Some(c) = corruption {
                for mut row in input.rows_mut() {
                    c.corrupt(row.as_slice_mut().expect("standard layout"), &mut rng);
                }
            }
            let trace = net.forward_trace(input.view())?;
            let (loss, grads) = net.backward(&trace, target.view())?;
            if !loss.is_finite() {
                return Err(CtnnError::NonFiniteLoss { epoch });
            }
            adam.step(net, &grads);
        }
        if !net.is_finite() {
            return Err(CtnnError::NonFiniteLoss { epoch });
        }
        let train_loss = dataset_loss(net, train.view())?;
        let test_loss = test
            .as_ref()
            .map(|t| dataset_loss(net, t.view()))
            .transpose()?;
        if !train_loss.is_finite() || test_loss.is_some_and(|v| !v.is_finite()) {
            return Err(CtnnError::NonFiniteLoss { epoch });
        }
        history.records.push(EpochRecord {
            epoch,
            train_loss,
            test_loss,
        });
    }
    Ok(history)
}

/// Mean reconstruction MSE over a dataset (one sample per row), evaluated in chunks.
pub(crate) fn dataset_loss(net: &Mlp<f32>, data: ArrayView2<'_, f32>) -> Result<f64> {
    const CHUNK: usize = 100;
    let mut sum = 0.0;
    let mut start = 0;
    while start < data.nrows() {
        let end = (start + CHUNK).min(data.nrows());
        let part = data.slice(s![start..end, ..]);
        let loss = net.batch_loss(part, part)? as f64;
        sum += loss * (end - start) as f64;
        start = end;
    }
    Ok(sum / data.nrows() as f64)
}

fn stack(samples: &[NormalizedVector], width: usize) -> Result<Array2<f32>> {
    let mut flat = Vec::with_capacity(samples.len() * width);
    for s in samples {
        CtnnError::check_len(width, s.len())?;
        flat.extend_from_slice(s.as_slice());
    }
    Ok(Array2::from_shape_vec((samples.len(), width), flat).expect("shape checked"))
}

fn gather(data: &Array2<f32>, rows: &[usize]) -> Array2<f32> {
    let mut out = Array2::zeros((rows.len(), data.ncols()));
    for (dst, &src) in rows.iter().enumerate() {
        out.row_mut(dst).assign(&data.row(src));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    const SMALL: [usize; 7] = [16, 8, 4, 2, 4, 8, 16];

    fn samples(n: usize, seed: u64) -> Vec<NormalizedVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| NormalizedVector::new((0..16).map(|_| rng.random::<f32>()).collect()).unwrap())
            .collect()
    }

    fn config(epochs: usize) -> TrainConfig {
        TrainConfig {
            epochs,
            batch_size: 4,
            adam: AdamConfig {
                learning_rate: 1e-2,
                ..AdamConfig::default()
            },
            seed: 5,
        }
    }

    #[test]
    fn loss_goes_down() {
        let mut net = Mlp::<f32>::seeded(&SMALL, 1).unwrap();
        let data = samples(12, 2);
        let arr = stack(&data, 16).unwrap();
        let before = dataset_loss(&net, arr.view()).unwrap();
        let history = train_network(&mut net, &data, &data[..4], &config(50), None).unwrap();
        assert_eq!(history.len(), 50);
        assert!(history.last().unwrap().train_loss < before);
        let epochs: Vec<usize> = history.records.iter().map(|r| r.epoch).collect();
        assert_eq!(epochs, (1..=50).collect::<Vec<_>>());
        assert!(history
            .records
            .iter()
            .all(|r| r.train_loss >= 0.0 && r.test_loss.unwrap() >= 0.0));
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let mut net = Mlp::<f32>::seeded(&SMALL, 1).unwrap();
        let before = net.clone();
        let history = train_network(&mut net, &samples(4, 2), &[], &config(0), None).unwrap();
        assert!(history.is_empty());
        assert_eq!(net, before);
        assert_eq!(history.to_csv(), "epoch,train_loss,test_loss\n");
    }

    #[test]
    fn seeded_runs_are_identical() {
        let data = samples(10, 3);
        let run = || {
            let mut net = Mlp::<f32>::seeded(&SMALL, 7).unwrap();
            let h = train_network(&mut net, &data, &data, &config(10), None).unwrap();
            (net, h)
        };
        let (a, ha) = run();
        let (b, hb) = run();
        assert_eq!(ha, hb);
        assert_eq!(a, b);
    }

    #[test]
    fn nan_weights_abort_with_epoch() {
        let mut net = Mlp::<f32>::seeded(&SMALL, 1).unwrap();
        net.layers_mut()[5].biases[0] = f32::NAN;
        let err = train_network(&mut net, &samples(4, 2), &[], &config(3), None).unwrap_err();
        assert!(
            matches!(err, CtnnError::NonFiniteLoss { epoch: 1 }),
            "{err}"
        );
        assert!(err.to_string().contains("epoch 1"));
    }

    #[test]
    fn empty_training_set_is_rejected() {
        let mut net = Mlp::<f32>::seeded(&SMALL, 1).unwrap();
        assert!(train_network(&mut net, &[], &[], &config(1), None).is_err());
    }

    struct ZeroFirst;
    impl InputCorruption for ZeroFirst {
        fn corrupt(&self, input: &mut [f32], _rng: &mut ChaCha8Rng) {
            input[0] = 0.0;
        }
    }

    #[test]
    fn corruption_changes_the_trajectory() {
        let data = samples(8, 4);
        let mut a = Mlp::<f32>::seeded(&SMALL, 7).unwrap();
        let mut b = a.clone();
        train_network(&mut a, &data, &[], &config(5), None).unwrap();
        train_network(&mut b, &data, &[], &config(5), Some(&ZeroFirst)).unwrap();
        assert_ne!(a, b);
    }
}
