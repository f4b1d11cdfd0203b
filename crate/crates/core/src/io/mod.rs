//! File formats: PFM float maps, 16-bit PNG (KITTI disparity, confidence) and
//! CSV/JSON emission.

mod pfm;
mod png16;
mod text;

use std::path::Path;

pub use pfm::{read_pfm, read_pfm_file, write_pfm, Endian, PfmImage, MAX_VALID_DISPARITY};
pub use png16::{
    decode_gray16, encode_confidence_png, encode_gray16, encode_kitti_disparity, quantize_confidence,
    read_confidence_png, read_kitti_disparity, write_confidence_png, write_kitti_disparity, Gray16, KITTI_SCALE,
};
pub use text::{csv_from_rows, format_sig, loss_scan_csv, sparsification_csv, to_json, write_json};

use crate::error::{Error, Result};
use crate::map::{ConfidenceMap, DisparityMap};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFormat {
    Pfm,
    Png16,
}

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Detects the format from the magic bytes, falling back to the file extension.
pub fn detect_format(path: &Path, bytes: &[u8]) -> Result<MapFormat> {
    if bytes.starts_with(PNG_SIGNATURE) {
        return Ok(MapFormat::Png16);
    }
    if bytes.starts_with(b"Pf") || bytes.starts_with(b"PF") {
        return Ok(MapFormat::Pfm);
    }
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("pfm") => Ok(MapFormat::Pfm),
        Some("png") => Ok(MapFormat::Png16),
        _ => Err(Error::format(format!("unrecognized map format: {}", path.display()))),
    }
}

/// Loads a disparity map from a PFM or KITTI-style 16-bit PNG file.
pub fn load_disparity<T: Scalar>(path: impl AsRef<Path>) -> Result<DisparityMap<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    match detect_format(path, &bytes)? {
        MapFormat::Pfm => Ok(read_pfm(&bytes)?.to_disparity()),
        MapFormat::Png16 => read_kitti_disparity(&bytes),
    }
}

/// Loads a confidence map from a PFM (values in `[0, 1]`) or 16-bit PNG (`raw / 65535`).
pub fn load_confidence<T: Scalar>(path: impl AsRef<Path>) -> Result<ConfidenceMap<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    match detect_format(path, &bytes)? {
        MapFormat::Pfm => read_pfm(&bytes)?.to_confidence(),
        MapFormat::Png16 => read_confidence_png(&bytes),
    }
}

/// Saves a disparity map; the format follows the extension (`.png` KITTI, anything else PFM).
pub fn save_disparity<T: Scalar>(map: &DisparityMap<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if is_png(path) {
        write_kitti_disparity(map, path)
    } else {
        write_pfm(map, path)
    }
}

/// Saves a confidence map; `.png` gives a 16-bit visualization, anything else PFM.
pub fn save_confidence<T: Scalar>(conf: &ConfidenceMap<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if is_png(path) {
        write_confidence_png(conf, path)
    } else {
        std::fs::write(path, PfmImage::from_confidence(conf)?.encode())?;
        Ok(())
    }
}

fn is_png(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("png"))
}
