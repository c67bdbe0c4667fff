use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CtnnError, Result};
use crate::nn::InputCorruption;
use crate::thalamus::SensoryFrame;
use crate::{GRID_SIDE, MODALITY_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Visual,
    Audio,
}

impl Modality {
    fn offset(self) -> usize {
        match self {
            Modality::Visual => 0,
            Modality::Audio => MODALITY_LEN,
        }
    }
}

impl std::str::FromStr for Modality {
    type Err = CtnnError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "visual" => Ok(Modality::Visual),
            "audio" => Ok(Modality::Audio),
            other => Err(CtnnError::InvalidArgument(format!(
                "unknown modality {other:?}, expected visual or audio"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OcclusionSpec {
    pub visual_fraction: f64,
    pub audio_fraction: f64,
}

impl OcclusionSpec {
    pub fn new(visual_fraction: f64, audio_fraction: f64) -> Result<Self> {
        for f in [visual_fraction, audio_fraction] {
            if !(0.0..=1.0).contains(&f) {
                return Err(CtnnError::InvalidArgument(format!(
                    "occlusion fraction {f} outside [0, 1]"
                )));
            }
        }
        Ok(OcclusionSpec {
            visual_fraction,
            audio_fraction,
        })
    }

    pub fn single(modality: Modality, fraction: f64) -> Result<Self> {
        match modality {
            Modality::Visual => Self::new(fraction, 0.0),
            Modality::Audio => Self::new(0.0, fraction),
        }
    }
}

/// `floor(fraction * 28)`. The tiny bias keeps products such as `0.3 * 28`
/// that land a rounding error below an integer on the intended row.
pub fn occluded_rows(fraction: f64) -> usize {
    ((fraction * GRID_SIDE as f64 + 1e-9).floor() as usize).min(GRID_SIDE)
}

fn zero_bottom_rows(pixels: &mut [f32], modality: Modality, rows: usize) {
    let start = modality.offset() + (GRID_SIDE - rows) * GRID_SIDE;
    pixels[start..modality.offset() + MODALITY_LEN].fill(0.0);
}

/// Zeroes the bottom `floor(fraction * 28)` rows of each modality; every
/// other pixel and the label are kept.
pub fn occlude(frame: &SensoryFrame, spec: &OcclusionSpec) -> Result<SensoryFrame> {
    let spec = OcclusionSpec::new(spec.visual_fraction, spec.audio_fraction)?;
    let mut out = frame.clone();
    zero_bottom_rows(
        out.pixels_mut(),
        Modality::Visual,
        occluded_rows(spec.visual_fraction),
    );
    zero_bottom_rows(
        out.pixels_mut(),
        Modality::Audio,
        occluded_rows(spec.audio_fraction),
    );
    Ok(out)
}

/// Training-time corruption: with `probability`, occludes each modality by an
/// independent fraction drawn uniformly from `[0, max_fraction)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomOcclusion {
    pub probability: f64,
    pub max_fraction: f64,
}

impl Default for RandomOcclusion {
    fn default() -> Self {
        RandomOcclusion {
            probability: 0.5,
            max_fraction: 0.8,
        }
    }
}

impl RandomOcclusion {
    pub fn is_active(&self) -> bool {
        self.probability > 0.0 && self.max_fraction > 0.0
    }
}

impl InputCorruption for RandomOcclusion {
    fn corrupt(&self, input: &mut [f32], rng: &mut ChaCha8Rng) {
        debug_assert_eq!(input.len(), 2 * MODALITY_LEN);
        if rng.random::<f64>() >= self.probability {
            return;
        }
        let max = self.max_fraction.clamp(0.0, 1.0);
        for modality in [Modality::Visual, Modality::Audio] {
            let fraction = rng.random::<f64>() * max;
            zero_bottom_rows(input, modality, occluded_rows(fraction));
        }
    }
}
