//! Synthetic multi-modal digit dataset.
//!
//! Each frame pairs a typeset digit glyph (visual half) with an image of the
//! digit's tone (audio half): a horizontal band whose row encodes frequency.
//! Variants of a class differ only by small seeded perturbations, so frames
//! of one class stay close under the difference score while frames of
//! different classes are far apart.

mod glyph_data;
mod glyphs;
mod io;
mod occlusion;
mod render;
mod sequence;
mod sets;

pub use glyphs::GlyphAtlas;
pub use io::{export_dataset, frame_filename, import_dataset, ManifestRow, MANIFEST_NAME};
pub use occlusion::{occlude, occluded_rows, Modality, OcclusionSpec, RandomOcclusion};
pub use render::{make_frame, render_digit, render_tone, Augmentation, FrameRenderer, ToneSpec};
pub use sequence::{generate_sequence, make_sequence, Sequence, SequenceSpec};
pub use sets::{
    make_entries, make_test_set, make_training_set, variant_seed, DatasetEntry, FrameId,
};
