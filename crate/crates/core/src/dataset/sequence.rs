use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FrameId, FrameRenderer};
use crate::error::{CtnnError, Result};
use crate::thalamus::SensoryFrame;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub length: usize,
    /// Fraction of adjacent transitions that keep the digit class.
    pub similar_fraction: f64,
    pub seed: u64,
}

impl SequenceSpec {
    /// `round(s * (length - 1))`.
    pub fn same_class_transitions(&self) -> usize {
        (self.similar_fraction * (self.length.saturating_sub(1)) as f64).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(CtnnError::InvalidArgument(format!(
                "sequence length must be at least 2, got {}",
                self.length
            )));
        }
        if !(0.0..=1.0).contains(&self.similar_fraction) {
            return Err(CtnnError::InvalidArgument(format!(
                "similar fraction {} outside [0, 1]",
                self.similar_fraction
            )));
        }
        Ok(())
    }
}

/// A generated sequence: the frames and the `(digit, seed)` that made each.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    pub ids: Vec<FrameId>,
    pub frames: Vec<SensoryFrame>,
}

impl Sequence {
    /// `index,digit,seed`.
    pub fn manifest_csv(&self) -> String {
        let mut out = String::from("index,digit,seed\n");
        for (i, id) in self.ids.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", id.digit, id.seed));
        }
        out
    }
}

/// Builds a stream with exactly `round(s * (length - 1))` same-class
/// adjacent transitions at seeded positions. Class changes pick uniformly
/// among the nine other digits; repeated classes use fresh augmentation
/// seeds so no two neighbours are byte-identical.
pub fn generate_sequence(renderer: &FrameRenderer, spec: &SequenceSpec) -> Result<Sequence> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let transitions = spec.length - 1;
    let mut same = vec![false; transitions];
    for flag in same.iter_mut().take(spec.same_class_transitions()) {
        *flag = true;
    }
    same.shuffle(&mut rng);

    let mut ids = Vec::with_capacity(spec.length);
    let mut frames: Vec<SensoryFrame> = Vec::with_capacity(spec.length);
    let mut digit: u8 = rng.random_range(0..10);
    for i in 0..spec.length {
        if i > 0 && !same[i - 1] {
            let step: u8 = rng.random_range(1..10);
            digit = (digit + step) % 10;
        }
        let (seed, frame) = loop {
            let seed: u64 = rng.random();
            let frame = renderer.make_frame(digit, seed)?;
            if frames
                .last()
                .is_none_or(|prev| prev.pixels() != frame.pixels())
            {
                break (seed, frame);
            }
        };
        ids.push(FrameId {
            digit,
            variant: i as u32,
            seed,
        });
        frames.push(frame);
    }
    Ok(Sequence { ids, frames })
}

/// Frames of [`generate_sequence`] with the default renderer.
pub fn make_sequence(spec: &SequenceSpec) -> Result<Vec<SensoryFrame>> {
    Ok(generate_sequence(&FrameRenderer::default(), spec)?.frames)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(frames: &[SensoryFrame]) -> Vec<u8> {
        frames.iter().map(|f| f.label().unwrap()).collect()
    }

    fn repeats(labels: &[u8]) -> usize {
        labels.windows(2).filter(|w| w[0] == w[1]).count()
    }

    #[test]
    fn no_repeats_at_zero() {
        let frames = make_sequence(&SequenceSpec {
            length: 11,
            similar_fraction: 0.0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(frames.len(), 11);
        assert_eq!(repeats(&labels(&frames)), 0);
    }

    #[test]
    fn all_repeats_at_one() {
        let frames = make_sequence(&SequenceSpec {
            length: 11,
            similar_fraction: 1.0,
            seed: 1,
        })
        .unwrap();
        let l = labels(&frames);
        assert!(l.iter().all(|&d| d == l[0]));
        assert!(frames.windows(2).all(|w| w[0].pixels() != w[1].pixels()));
    }

    #[test]
    fn exact_transition_count() {
        for seed in 0..10 {
            let spec = SequenceSpec {
                length: 101,
                similar_fraction: 0.5,
                seed,
            };
            assert_eq!(repeats(&labels(&make_sequence(&spec).unwrap())), 50);
        }
        let spec = SequenceSpec {
            length: 100,
            similar_fraction: 0.3,
            seed: 4,
        };
        assert_eq!(repeats(&labels(&make_sequence(&spec).unwrap())), 30);
    }

    #[test]
    fn deterministic_and_validated() {
        let spec = SequenceSpec {
            length: 20,
            similar_fraction: 0.4,
            seed: 9,
        };
        assert_eq!(make_sequence(&spec).unwrap(), make_sequence(&spec).unwrap());
        assert!(make_sequence(&SequenceSpec {
            length: 1,
            similar_fraction: 0.0,
            seed: 0
        })
        .is_err());
        assert!(make_sequence(&SequenceSpec {
            length: 5,
            similar_fraction: 1.5,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn manifest_lists_every_frame() {
        let seq = generate_sequence(
            &FrameRenderer::default(),
            &SequenceSpec {
                length: 3,
                similar_fraction: 0.0,
                seed: 2,
            },
        )
        .unwrap();
        let csv = seq.manifest_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("index,digit,seed\n0,"));
    }
}
