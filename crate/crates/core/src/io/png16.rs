//! 16-bit grayscale PNG: KITTI disparity maps and confidence visualizations.
//!
//! KITTI stores `disparity * 256` with 0 marking pixels without ground truth.
//! Confidence maps are stored as `round(c * 65535)`.

use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};
use crate::map::{ConfidenceMap, DisparityMap};
use crate::scalar::Scalar;

pub const KITTI_SCALE: f64 = 256.0;

/// Decoded 16-bit single-channel raster, top-down row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gray16 {
    pub width: usize,
    pub height: usize,
    pub raw: Vec<u16>,
}

fn png_err(e: impl std::fmt::Display) -> Error {
    Error::format(format!("png: {e}"))
}

pub fn decode_gray16(bytes: &[u8]) -> Result<Gray16> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let size = reader.output_buffer_size().ok_or_else(|| Error::format("png too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(png_err)?;
    if info.color_type != png::ColorType::Grayscale {
        return Err(Error::format(format!("expected single-channel PNG, got {:?}", info.color_type)));
    }
    if info.bit_depth != png::BitDepth::Sixteen {
        return Err(Error::format(format!("expected 16-bit PNG, got {:?}", info.bit_depth)));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let mut raw = Vec::with_capacity(width * height);
    for row in buf.chunks_exact(info.line_size).take(height) {
        raw.extend(row[..width * 2].chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])));
    }
    Ok(Gray16 { width, height, raw })
}

pub fn encode_gray16(img: &Gray16) -> Result<Vec<u8>> {
    if img.width == 0 || img.height == 0 || img.raw.len() != img.width * img.height {
        return Err(Error::invalid("16-bit PNG needs a non-empty, consistently sized raster"));
    }
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Sixteen);
        let mut writer = enc.write_header().map_err(png_err)?;
        let data: Vec<u8> = img.raw.iter().flat_map(|v| v.to_be_bytes()).collect();
        writer.write_image_data(&data).map_err(png_err)?;
        writer.finish().map_err(png_err)?;
    }
    Ok(out)
}

/// KITTI disparity: `raw / 256`, raw 0 is invalid.
pub fn read_kitti_disparity<T: Scalar>(bytes: &[u8]) -> Result<DisparityMap<T>> {
    let img = decode_gray16(bytes)?;
    let values = img.raw.iter().map(|&r| T::lit(f64::from(r) / KITTI_SCALE)).collect();
    let valid = img.raw.iter().map(|&r| r != 0).collect();
    DisparityMap::new(img.width, img.height, values, valid)
}

/// Quantizes valid disparities to `round(d * 256)`, at least 1 so they stay valid.
pub fn encode_kitti_disparity<T: Scalar>(map: &DisparityMap<T>) -> Result<Vec<u8>> {
    let max = f64::from(u16::MAX) / KITTI_SCALE;
    let mut raw = Vec::with_capacity(map.len());
    for i in 0..map.len() {
        if !map.is_valid(i) {
            raw.push(0);
            continue;
        }
        let d = map.value(i).to_f64_lossy();
        if !(0.0..=max).contains(&d) {
            return Err(Error::domain(format!("disparity {d} not representable in KITTI format")));
        }
        raw.push(((d * KITTI_SCALE + 0.5).floor() as u16).max(1));
    }
    encode_gray16(&Gray16 { width: map.width(), height: map.height(), raw })
}

pub fn write_kitti_disparity<T: Scalar>(map: &DisparityMap<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_kitti_disparity(map)?)?;
    Ok(())
}

/// `round(c * 65535)` with halves rounded up.
pub fn quantize_confidence<T: Scalar>(c: T) -> u16 {
    let c = c.to_f64_lossy().clamp(0.0, 1.0);
    (c * 65535.0 + 0.5).floor() as u16
}

pub fn encode_confidence_png<T: Scalar>(conf: &ConfidenceMap<T>) -> Result<Vec<u8>> {
    let raw = conf.values().iter().map(|&c| quantize_confidence(c)).collect();
    encode_gray16(&Gray16 { width: conf.width(), height: conf.height(), raw })
}

pub fn write_confidence_png<T: Scalar>(conf: &ConfidenceMap<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_confidence_png(conf)?)?;
    Ok(())
}

pub fn read_confidence_png<T: Scalar>(bytes: &[u8]) -> Result<ConfidenceMap<T>> {
    let img = decode_gray16(bytes)?;
    let values = img.raw.iter().map(|&r| T::lit(f64::from(r) / 65535.0)).collect();
    ConfidenceMap::new(img.width, img.height, values)
}
