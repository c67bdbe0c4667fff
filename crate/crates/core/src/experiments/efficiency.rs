use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::write_text;
use crate::config::{derive_seed, streams};
use crate::dataset::{generate_sequence, FrameRenderer, SequenceSpec};
use crate::error::Result;
use crate::thalamus::{run_sequence, Cortex};

pub const EFFICIENCY_CSV: &str = "efficiency.csv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub threshold: f64,
    pub similar_fraction: f64,
    pub length: usize,
    pub network_calls: usize,
}

/// One row per `(threshold, similar_fraction)`, threshold-major.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EfficiencySweepResult {
    pub rows: Vec<EfficiencyRow>,
}

impl EfficiencySweepResult {
    pub fn calls(&self, threshold: f64, similar_fraction: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.threshold == threshold && r.similar_fraction == similar_fraction)
            .map(|r| r.network_calls)
    }

    /// `threshold,similar_fraction,length,network_calls`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,similar_fraction,length,network_calls\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.threshold, r.similar_fraction, r.length, r.network_calls
            );
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

/// Seed of the stream used for the `index`-th similar fraction. Every
/// threshold sees the same stream, so thresholds are compared like for like.
pub fn sweep_sequence_seed(master: u64, index: usize) -> u64 {
    derive_seed(master, streams::SWEEP + index as u64)
}

/// Runs the gate over a generated stream for every `(threshold, fraction)`
/// pair and counts cortex calls. Streams are built in parallel, one per
/// fraction, from seeds that depend only on the fraction's index.
pub fn run_efficiency_sweep<C: Cortex + Sync + ?Sized>(
    model: &C,
    renderer: &FrameRenderer,
    thresholds: &[f64],
    similar_fractions: &[f64],
    length: usize,
    seed: u64,
) -> Result<EfficiencySweepResult> {
    let per_fraction: Vec<Vec<usize>> = similar_fractions
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let spec = SequenceSpec {
                length,
                similar_fraction: s,
                seed: sweep_sequence_seed(seed, i),
            };
            let frames = generate_sequence(renderer, &spec)?.frames;
            thresholds
                .iter()
                .map(|&th| Ok(run_sequence(model, th, &frames)?.network_calls))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(thresholds.len() * similar_fractions.len());
    for (t, &threshold) in thresholds.iter().enumerate() {
        for (i, &similar_fraction) in similar_fractions.iter().enumerate() {
            rows.push(EfficiencyRow {
                threshold,
                similar_fraction,
                length,
                network_calls: per_fraction[i][t],
            });
        }
    }
    Ok(EfficiencySweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;

    struct Mirror;
    impl Cortex for Mirror {
        fn width(&self) -> usize {
            crate::FRAME_LEN
        }
        fn reconstruct(&self, incoming: &[f32]) -> Result<Vec<f32>> {
            Ok(incoming.to_vec())
        }
    }

    #[test]
    fn grid_shape_and_zero_threshold() {
        let r = run_efficiency_sweep(
            &Mirror,
            &FrameRenderer::default(),
            &[0.0, 100.0],
            &[0.0, 0.5, 1.0],
            20,
            3,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 6);
        for s in [0.0, 0.5, 1.0] {
            assert_eq!(r.calls(0.0, s), Some(20));
        }
        // A perfect cortex fires once per class run.
        assert_eq!(r.calls(100.0, 0.0), Some(20));
        assert_eq!(r.calls(100.0, 1.0), Some(1));
        assert_eq!(r.calls(100.0, 0.5), Some(20 - 10));
        let csv = r.to_csv();
        assert_eq!(
            csv.lines().next(),
            Some("threshold,similar_fraction,length,network_calls")
        );
        assert!(csv.contains("\n100,0.5,20,10\n"));
    }

    #[test]
    fn sweep_is_reproducible() {
        let run = || {
            run_efficiency_sweep(
                &Mirror,
                &FrameRenderer::default(),
                &[50.0],
                &[0.2, 0.7],
                30,
                9,
            )
            .unwrap()
            .to_csv()
        };
        assert_eq!(run(), run());
    }
}
