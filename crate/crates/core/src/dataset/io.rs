//! Dataset directories: one `d<digit>_v<variant>.pgm` per frame (28x56,
//! visual left, audio right) plus `manifest.csv` with
//! `filename,digit,variant,seed`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DatasetEntry;
use crate::error::{CtnnError, Result};
use crate::pgm::GrayImage;
use crate::thalamus::SensoryFrame;

pub const MANIFEST_NAME: &str = "manifest.csv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub filename: String,
    pub digit: u8,
    pub variant: u32,
    pub seed: u64,
}

pub fn frame_filename(digit: u8, variant: u32) -> String {
    format!("d{digit}_v{variant}.pgm")
}

/// Writes every entry as a PGM and the manifest; returns the manifest rows.
pub fn export_dataset(dir: &Path, entries: &[DatasetEntry]) -> Result<Vec<ManifestRow>> {
    fs::create_dir_all(dir).map_err(|e| CtnnError::io(dir, e))?;
    let mut rows = Vec::with_capacity(entries.len());
    for e in entries {
        let filename = frame_filename(e.digit, e.variant);
        e.frame.to_image().save(dir.join(&filename))?;
        rows.push(ManifestRow {
            filename,
            digit: e.digit,
            variant: e.variant,
            seed: e.seed,
        });
    }
    let manifest = dir.join(MANIFEST_NAME);
    let mut writer = csv::Writer::from_path(&manifest)?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| CtnnError::io(&manifest, e))?;
    Ok(rows)
}

/// Reads a dataset directory back in manifest order.
pub fn import_dataset(dir: &Path) -> Result<Vec<DatasetEntry>> {
    let manifest = dir.join(MANIFEST_NAME);
    if !manifest.is_file() {
        return Err(CtnnError::io(
            &manifest,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset manifest not found"),
        ));
    }
    let mut reader = csv::Reader::from_path(&manifest)?;
    let mut entries = Vec::new();
    for row in reader.deserialize::<ManifestRow>() {
        let row = row?;
        if row.digit > 9 {
            return Err(CtnnError::InvalidDigit(row.digit));
        }
        let path = dir.join(&row.filename);
        let image = GrayImage::load(&path)?;
        entries.push(DatasetEntry {
            digit: row.digit,
            variant: row.variant,
            seed: row.seed,
            frame: SensoryFrame::from_image(&image, Some(row.digit), &path)?,
        });
    }
    Ok(entries)
}
