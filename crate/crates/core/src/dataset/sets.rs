use serde::{Deserialize, Serialize};

use super::FrameRenderer;
use crate::error::Result;
use crate::thalamus::SensoryFrame;

/// One generated frame together with how it was made.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub digit: u8,
    pub variant: u32,
    pub seed: u64,
    pub frame: SensoryFrame,
}

/// Identity of a frame in a manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameId {
    pub digit: u8,
    pub variant: u32,
    pub seed: u64,
}

/// `seed * 1000 + digit * 100 + variant`, wrapping.
pub fn variant_seed(seed: u64, digit: u8, variant: u32) -> u64 {
    seed.wrapping_mul(1000)
        .wrapping_add(digit as u64 * 100)
        .wrapping_add(variant as u64)
}

/// Frames for every digit and every variant in `variants`, digit-major.
pub fn make_entries(
    renderer: &FrameRenderer,
    variants: std::ops::Range<u32>,
    seed: u64,
) -> Result<Vec<DatasetEntry>> {
    let mut out = Vec::with_capacity(10 * variants.len());
    for digit in 0..10u8 {
        for variant in variants.clone() {
            let s = variant_seed(seed, digit, variant);
            out.push(DatasetEntry {
                digit,
                variant,
                seed: s,
                frame: renderer.make_frame(digit, s)?,
            });
        }
    }
    Ok(out)
}

/// `per_class` frames for each digit, ordered digit-major.
pub fn make_training_set(per_class: u32, seed: u64) -> Result<Vec<SensoryFrame>> {
    Ok(make_entries(&FrameRenderer::default(), 0..per_class, seed)?
        .into_iter()
        .map(|e| e.frame)
        .collect())
}

/// Held-out frames: `count` further variants per digit after the
/// `per_class` training variants, so no seed is shared with the training set.
pub fn make_test_set(per_class: u32, count: u32, seed: u64) -> Result<Vec<SensoryFrame>> {
    Ok(make_entries(
        &FrameRenderer::default(),
        per_class..per_class + count,
        seed,
    )?
    .into_iter()
    .map(|e| e.frame)
    .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thalamus::frame_bytes;

    #[test]
    fn sizes_and_ordering() {
        let set = make_training_set(30, 7).unwrap();
        assert_eq!(set.len(), 300);
        assert_eq!(set[0].label(), Some(0));
        assert_eq!(set[29].label(), Some(0));
        assert_eq!(set[30].label(), Some(1));
        assert_eq!(set[299].label(), Some(9));
        assert_eq!(make_training_set(1, 7).unwrap().len(), 10);
    }

    #[test]
    fn deterministic_bytes() {
        let a: Vec<u8> = make_training_set(2, 3)
            .unwrap()
            .iter()
            .flat_map(frame_bytes)
            .collect();
        let b: Vec<u8> = make_training_set(2, 3)
            .unwrap()
            .iter()
            .flat_map(frame_bytes)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn seed_formula_and_disjoint_test_set() {
        assert_eq!(variant_seed(7, 3, 12), 7312);
        let train = make_entries(&FrameRenderer::default(), 0..30, 7).unwrap();
        let test = make_entries(&FrameRenderer::default(), 30..40, 7).unwrap();
        assert!(test.iter().all(|t| train.iter().all(|r| r.seed != t.seed)));
        assert_eq!(make_test_set(30, 10, 7).unwrap().len(), 100);
    }
}
