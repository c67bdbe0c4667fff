use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::write_text;
use crate::dataset::{occlude, Modality, OcclusionSpec};
use crate::error::{CtnnError, Result};
use crate::nn::{mse, AutoEncoder};
use crate::thalamus::{Reconstruction, SensoryFrame};
use crate::{FRAME_LEN, MAX_INTENSITY};

pub const OCCLUSION_CSV: &str = "occlusion.csv";

/// Raw-scale reconstructions of `frames`, computed as one batch.
pub fn reconstruct_frames(
    model: &AutoEncoder,
    frames: &[SensoryFrame],
) -> Result<Vec<Reconstruction>> {
    if frames.is_empty() {
        return Ok(Vec::new());
    }
    let mut input = Array2::<f32>::zeros((frames.len(), FRAME_LEN));
    for (mut row, f) in input.rows_mut().into_iter().zip(frames) {
        for (dst, &v) in row.iter_mut().zip(f.pixels()) {
            *dst = v / MAX_INTENSITY;
        }
    }
    let out = model.reconstruct_batch(input.view())?;
    Ok(out
        .rows()
        .into_iter()
        .map(|r| Reconstruction::from_raw(r.iter().map(|v| v * MAX_INTENSITY).collect()))
        .collect())
}

fn labels(frames: &[SensoryFrame]) -> Result<Vec<u8>> {
    frames
        .iter()
        .map(|f| {
            f.label()
                .ok_or_else(|| CtnnError::InvalidArgument("test frames must carry labels".into()))
        })
        .collect()
}

/// Mean difference score between reconstructions of frames of different
/// classes: the distance at which accuracy reaches zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBaseline {
    pub value: f64,
    pub pairs: usize,
}

pub fn baseline_from_reconstructions(
    recons: &[Reconstruction],
    labels: &[u8],
) -> Result<AccuracyBaseline> {
    CtnnError::check_len(recons.len(), labels.len())?;
    let mut sum = 0.0;
    let mut pairs = 0;
    for i in 0..recons.len() {
        for j in i + 1..recons.len() {
            if labels[i] != labels[j] {
                sum += mse(recons[i].pixels(), recons[j].pixels())?;
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        return Err(CtnnError::InvalidArgument(
            "baseline needs frames from at least two classes".into(),
        ));
    }
    let value = sum / pairs as f64;
    if value <= 0.0 {
        return Err(CtnnError::InvalidArgument(
            "reconstructions of different classes coincide; baseline is zero".into(),
        ));
    }
    Ok(AccuracyBaseline { value, pairs })
}

pub fn accuracy_baseline(
    model: &AutoEncoder,
    test_set: &[SensoryFrame],
) -> Result<AccuracyBaseline> {
    baseline_from_reconstructions(&reconstruct_frames(model, test_set)?, &labels(test_set)?)
}

/// `clamp(1 - D(correct, occluded) / B, 0, 1)`.
pub fn reconstruction_accuracy(
    correct: &Reconstruction,
    occluded: &Reconstruction,
    baseline: f64,
) -> Result<f64> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(CtnnError::InvalidArgument(format!(
            "accuracy baseline must be positive, got {baseline}"
        )));
    }
    let d = mse(correct.pixels(), occluded.pixels())?;
    Ok((1.0 - d / baseline).clamp(0.0, 1.0))
}

/// Mean accuracy over `(visual_fraction, audio_fraction)`; `cells[v][a]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcclusionHeatmap {
    pub fractions: Vec<f64>,
    pub baseline: AccuracyBaseline,
    pub cells: Vec<Vec<f64>>,
}

impl OcclusionHeatmap {
    pub fn get(&self, visual_fraction: f64, audio_fraction: f64) -> Option<f64> {
        let v = self.fractions.iter().position(|&f| f == visual_fraction)?;
        let a = self.fractions.iter().position(|&f| f == audio_fraction)?;
        Some(self.cells[v][a])
    }

    /// `visual_fraction,audio_fraction,mean_accuracy`, visual-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("visual_fraction,audio_fraction,mean_accuracy\n");
        for (v, row) in self.fractions.iter().zip(&self.cells) {
            for (a, acc) in self.fractions.iter().zip(row) {
                let _ = writeln!(out, "{v},{a},{acc:.6}");
            }
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

/// For every cell, occludes each test frame, reconstructs it and scores it
/// against the clean frame's reconstruction. Cells run in parallel.
pub fn run_occlusion_sweep(
    model: &AutoEncoder,
    fractions: &[f64],
    test_set: &[SensoryFrame],
) -> Result<OcclusionHeatmap> {
    let clean = reconstruct_frames(model, test_set)?;
    let baseline = baseline_from_reconstructions(&clean, &labels(test_set)?)?;
    let coords: Vec<(f64, f64)> = fractions
        .iter()
        .flat_map(|&v| fractions.iter().map(move |&a| (v, a)))
        .collect();
    let flat: Vec<f64> = coords
        .par_iter()
        .map(|&(v, a)| {
            let spec = OcclusionSpec::new(v, a)?;
            let occluded = test_set
                .iter()
                .map(|f| occlude(f, &spec))
                .collect::<Result<Vec<_>>>()?;
            let recons = reconstruct_frames(model, &occluded)?;
            let mut total = 0.0;
            for (c, o) in clean.iter().zip(&recons) {
                total += reconstruction_accuracy(c, o, baseline.value)?;
            }
            Ok(total / test_set.len() as f64)
        })
        .collect::<Result<_>>()?;
    let n = fractions.len();
    Ok(OcclusionHeatmap {
        fractions: fractions.to_vec(),
        baseline,
        cells: flat.chunks(n.max(1)).map(<[f64]>::to_vec).collect(),
    })
}

/// Per-class mean of clean-frame reconstructions.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPrototypes {
    pub means: Vec<Option<Reconstruction>>,
}

impl ClassPrototypes {
    pub fn from_model(model: &AutoEncoder, frames: &[SensoryFrame]) -> Result<Self> {
        let recons = reconstruct_frames(model, frames)?;
        let labels = labels(frames)?;
        let mut sums = vec![vec![0.0f64; FRAME_LEN]; 10];
        let mut counts = [0usize; 10];
        for (r, &l) in recons.iter().zip(&labels) {
            let l = l as usize;
            counts[l] += 1;
            for (s, &v) in sums[l].iter_mut().zip(r.pixels()) {
                *s += v as f64;
            }
        }
        let means = sums
            .into_iter()
            .zip(counts)
            .map(|(s, n)| {
                (n > 0).then(|| {
                    Reconstruction::from_raw(s.iter().map(|v| (v / n as f64) as f32).collect())
                })
            })
            .collect();
        Ok(ClassPrototypes { means })
    }

    /// Class whose prototype is closest under the difference score.
    pub fn nearest(&self, recon: &Reconstruction) -> Result<u8> {
        let mut best: Option<(u8, f64)> = None;
        for (digit, proto) in self.means.iter().enumerate() {
            if let Some(p) = proto {
                let d = mse(p.pixels(), recon.pixels())?;
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((digit as u8, d));
                }
            }
        }
        best.map(|(d, _)| d)
            .ok_or_else(|| CtnnError::InvalidArgument("no class prototypes".into()))
    }
}

/// One occluded frame, its reconstruction and the class it was recognised as.
#[derive(Debug, Clone, PartialEq)]
pub struct OcclusionDemo {
    pub digit: u8,
    pub modality: Modality,
    pub fraction: f64,
    pub clean: SensoryFrame,
    pub occluded: SensoryFrame,
    pub clean_reconstruction: Reconstruction,
    pub reconstruction: Reconstruction,
    pub predicted: u8,
}

impl OcclusionDemo {
    pub fn recovered(&self) -> bool {
        self.predicted == self.digit
    }

    /// Writes `<stem>_clean.pgm`, `<stem>_occluded.pgm` and `<stem>_recon.pgm`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let images = [
            ("clean", self.clean.to_image()),
            ("occluded", self.occluded.to_image()),
            ("recon", self.reconstruction.to_image()),
        ];
        let mut paths = Vec::new();
        for (name, img) in images {
            let path = dir.join(format!("{stem}_{name}.pgm"));
            img.save(&path)?;
            paths.push(path);
        }
        Ok(paths)
    }
}

pub fn run_occlusion_demo(
    model: &AutoEncoder,
    prototypes: &ClassPrototypes,
    frame: &SensoryFrame,
    modality: Modality,
    fraction: f64,
) -> Result<OcclusionDemo> {
    let digit = labels(std::slice::from_ref(frame))?[0];
    let occluded = occlude(frame, &OcclusionSpec::single(modality, fraction)?)?;
    let mut recons = reconstruct_frames(model, &[frame.clone(), occluded.clone()])?.into_iter();
    let clean_reconstruction = recons.next().expect("two reconstructions");
    let reconstruction = recons.next().expect("two reconstructions");
    let predicted = prototypes.nearest(&reconstruction)?;
    Ok(OcclusionDemo {
        digit,
        modality,
        fraction,
        clean: frame.clone(),
        occluded,
        clean_reconstruction,
        reconstruction,
        predicted,
    })
}

/// Share of `frames` whose occluded reconstruction lands on the right prototype.
pub fn demo_recovery_rate(
    model: &AutoEncoder,
    prototypes: &ClassPrototypes,
    frames: &[SensoryFrame],
    modality: Modality,
    fraction: f64,
) -> Result<f64> {
    if frames.is_empty() {
        return Err(CtnnError::InvalidArgument("no frames to occlude".into()));
    }
    let spec = OcclusionSpec::single(modality, fraction)?;
    let truth = labels(frames)?;
    let occluded = frames
        .iter()
        .map(|f| occlude(f, &spec))
        .collect::<Result<Vec<_>>>()?;
    let mut hits = 0;
    for (r, &t) in reconstruct_frames(model, &occluded)?.iter().zip(&truth) {
        if prototypes.nearest(r)? == t {
            hits += 1;
        }
    }
    Ok(hits as f64 / frames.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::make_test_set;
    use crate::nn::build_autoencoder;
    use crate::DEFAULT_TOPOLOGY;

    fn recon(v: f32) -> Reconstruction {
        Reconstruction::from_raw(vec![v; FRAME_LEN])
    }

    #[test]
    fn accuracy_formula() {
        // D(10, 20) = 100.
        assert_eq!(
            reconstruction_accuracy(&recon(10.0), &recon(10.0), 50.0).unwrap(),
            1.0
        );
        assert_eq!(
            reconstruction_accuracy(&recon(10.0), &recon(20.0), 100.0).unwrap(),
            0.0
        );
        assert_eq!(
            reconstruction_accuracy(&recon(10.0), &recon(20.0), 200.0).unwrap(),
            0.5
        );
        assert_eq!(
            reconstruction_accuracy(&recon(10.0), &recon(20.0), 40.0).unwrap(),
            0.0
        );
        assert!(reconstruction_accuracy(&recon(1.0), &recon(1.0), 0.0).is_err());
        assert!(reconstruction_accuracy(&recon(1.0), &recon(1.0), f64::NAN).is_err());
    }

    #[test]
    fn baseline_uses_only_cross_class_pairs() {
        let recons = [recon(0.0), recon(0.0), recon(10.0)];
        let b = baseline_from_reconstructions(&recons, &[1, 1, 2]).unwrap();
        assert_eq!(b.pairs, 2);
        assert_eq!(b.value, 100.0);
        assert!(baseline_from_reconstructions(&recons, &[1, 1, 1]).is_err());
        assert!(baseline_from_reconstructions(&[recon(3.0), recon(3.0)], &[1, 2]).is_err());
    }

    #[test]
    fn untrained_heatmap_shape_and_corner() {
        let model = build_autoencoder(&DEFAULT_TOPOLOGY, 1).unwrap();
        let test = make_test_set(0, 1, 5).unwrap();
        let h = run_occlusion_sweep(&model, &[0.0, 0.5, 1.0], &test).unwrap();
        assert_eq!(h.cells.len(), 3);
        assert!(h.cells.iter().all(|r| r.len() == 3));
        assert_eq!(h.get(0.0, 0.0), Some(1.0));
        assert!(h.cells.iter().flatten().all(|c| (0.0..=1.0).contains(c)));
        let csv = h.to_csv();
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.starts_with("visual_fraction,audio_fraction,mean_accuracy\n0,0,1.000000\n"));
    }

    #[test]
    fn zero_fraction_demo_matches_clean_reconstruction() {
        let model = build_autoencoder(&DEFAULT_TOPOLOGY, 2).unwrap();
        let test = make_test_set(0, 1, 5).unwrap();
        let protos = ClassPrototypes::from_model(&model, &test).unwrap();
        let demo = run_occlusion_demo(&model, &protos, &test[4], Modality::Visual, 0.0).unwrap();
        assert_eq!(demo.reconstruction, demo.clean_reconstruction);
        assert_eq!(demo.occluded, demo.clean);
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(demo.save(dir.path(), "d4").unwrap().len(), 3);
    }

    #[test]
    fn prototypes_pick_the_closest_mean() {
        let mut means = vec![None; 10];
        means[2] = Some(recon(0.0));
        means[7] = Some(recon(100.0));
        let p = ClassPrototypes { means };
        assert_eq!(p.nearest(&recon(40.0)).unwrap(), 2);
        assert_eq!(p.nearest(&recon(60.0)).unwrap(), 7);
        assert!(ClassPrototypes {
            means: vec![None; 10]
        }
        .nearest(&recon(1.0))
        .is_err());
    }
}
