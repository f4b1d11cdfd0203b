//! Portable Float Map (PFM) images.
//!
//! Layout: a magic line (`Pf` one channel, `PF` three channels), a
//! `width height` line, a scale line whose sign encodes the sample byte order
//! (negative little-endian, positive big-endian), then raw `f32` samples with
//! rows stored bottom-to-top.

use std::path::Path;

use crate::error::{Error, Result};
use crate::map::{ConfidenceMap, DisparityMap};
use crate::scalar::Scalar;

/// Disparities with a magnitude above this are treated as invalid on read.
pub const MAX_VALID_DISPARITY: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endian {
    Little,
    Big,
}

/// Decoded PFM raster; `samples` are top-down, row-major, channel-interleaved.
#[derive(Debug, Clone, PartialEq)]
pub struct PfmImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub scale: f32,
    pub samples: Vec<f32>,
}

impl PfmImage {
    /// Single-channel image from top-down samples, little-endian (`scale = -1`).
    pub fn gray(width: usize, height: usize, samples: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("PFM image must not be empty"));
        }
        if samples.len() != width * height {
            return Err(Error::invalid(format!(
                "{width}x{height} PFM needs {} samples, got {}",
                width * height,
                samples.len()
            )));
        }
        Ok(Self { width, height, channels: 1, scale: -1.0, samples })
    }

    pub fn endian(&self) -> Endian {
        if self.scale < 0.0 {
            Endian::Little
        } else {
            Endian::Big
        }
    }

    /// Encodes with unit scale in the requested byte order.
    pub fn encode_with(&self, endian: Endian) -> Vec<u8> {
        let magic = if self.channels == 3 { "PF" } else { "Pf" };
        let scale = match endian {
            Endian::Little => "-1.0",
            Endian::Big => "1.0",
        };
        let mut out = format!("{magic}\n{} {}\n{scale}\n", self.width, self.height).into_bytes();
        let row_len = self.width * self.channels;
        out.reserve(self.samples.len() * 4);
        for row in self.samples.chunks_exact(row_len).rev() {
            for s in row {
                let bytes = match endian {
                    Endian::Little => s.to_le_bytes(),
                    Endian::Big => s.to_be_bytes(),
                };
                out.extend_from_slice(&bytes);
            }
        }
        out
    }

    /// Encodes little-endian with scale `-1.0`.
    pub fn encode(&self) -> Vec<u8> {
        self.encode_with(Endian::Little)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let mut next_token = || -> Result<&[u8]> {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::format("truncated PFM header"));
            }
            Ok(&bytes[start..pos])
        };

        let channels = match next_token()? {
            b"Pf" => 1,
            b"PF" => 3,
            other => {
                return Err(Error::format(format!("bad PFM magic {:?}", String::from_utf8_lossy(other))));
            }
        };
        let width = parse_token::<usize>(next_token()?, "width")?;
        let height = parse_token::<usize>(next_token()?, "height")?;
        let scale = parse_token::<f32>(next_token()?, "scale")?;
        // exactly one whitespace byte separates the header from the payload
        if pos >= bytes.len() {
            return Err(Error::format("truncated PFM header"));
        }
        pos += 1;

        if width == 0 || height == 0 {
            return Err(Error::format("PFM image has zero size"));
        }
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::format(format!("invalid PFM scale {scale}")));
        }
        let n = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::format("PFM dimensions overflow"))?;
        let payload = &bytes[pos..];
        if payload.len() < n * 4 {
            return Err(Error::format(format!("truncated PFM payload: need {} bytes, got {}", n * 4, payload.len())));
        }
        let little = scale < 0.0;
        let row_len = width * channels;
        let mut samples = vec![0.0f32; n];
        for (file_row, chunk) in payload[..n * 4].chunks_exact(row_len * 4).enumerate() {
            let dst_row = height - 1 - file_row;
            let dst = &mut samples[dst_row * row_len..(dst_row + 1) * row_len];
            for (d, b) in dst.iter_mut().zip(chunk.chunks_exact(4)) {
                let b = [b[0], b[1], b[2], b[3]];
                *d = if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
            }
        }
        Ok(Self { width, height, channels, scale, samples })
    }

    /// Disparity map from the first channel. Non-finite samples and samples with
    /// magnitude above [`MAX_VALID_DISPARITY`] become invalid pixels.
    pub fn to_disparity<T: Scalar>(&self) -> DisparityMap<T> {
        let n = self.width * self.height;
        let mut values = Vec::with_capacity(n);
        let mut valid = Vec::with_capacity(n);
        for px in self.samples.chunks_exact(self.channels) {
            let v = px[0];
            let ok = v.is_finite() && f64::from(v.abs()) <= MAX_VALID_DISPARITY;
            valid.push(ok);
            values.push(if ok { T::lit(f64::from(v)) } else { T::zero() });
        }
        DisparityMap::new(self.width, self.height, values, valid).expect("PFM dimensions are consistent")
    }

    /// Confidence map from the first channel; every sample must lie in `[0, 1]`.
    pub fn to_confidence<T: Scalar>(&self) -> Result<ConfidenceMap<T>> {
        let values = self.samples.chunks_exact(self.channels).map(|px| T::lit(f64::from(px[0]))).collect();
        ConfidenceMap::new(self.width, self.height, values)
    }

    /// Single-channel image of a disparity map; invalid pixels are stored as `+inf`.
    pub fn from_disparity<T: Scalar>(map: &DisparityMap<T>) -> Result<Self> {
        let samples = (0..map.len())
            .map(|i| if map.is_valid(i) { map.value(i).to_f32().unwrap_or(f32::INFINITY) } else { f32::INFINITY })
            .collect();
        Self::gray(map.width(), map.height(), samples)
    }

    pub fn from_confidence<T: Scalar>(conf: &ConfidenceMap<T>) -> Result<Self> {
        let samples = conf.values().iter().map(|c| c.to_f32().unwrap_or(f32::NAN)).collect();
        Self::gray(conf.width(), conf.height(), samples)
    }
}

fn parse_token<F: std::str::FromStr>(tok: &[u8], what: &str) -> Result<F> {
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::format(format!("bad PFM {what} {:?}", String::from_utf8_lossy(tok))))
}

pub fn read_pfm(bytes: &[u8]) -> Result<PfmImage> {
    PfmImage::decode(bytes)
}

pub fn read_pfm_file(path: impl AsRef<Path>) -> Result<PfmImage> {
    PfmImage::decode(&std::fs::read(path)?)
}

/// Writes a disparity map as a one-channel little-endian PFM.
pub fn write_pfm<T: Scalar>(map: &DisparityMap<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, PfmImage::from_disparity(map)?.encode())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_built_one_by_one() {
        let mut bytes = b"Pf\n1 1\n-1.0\n".to_vec();
        bytes.extend_from_slice(&2.5f32.to_le_bytes());
        let img = read_pfm(&bytes).unwrap();
        assert_eq!((img.width, img.height, img.channels), (1, 1, 1));
        assert_eq!(img.samples, vec![2.5]);
        assert_eq!(img.encode(), bytes);
    }

    #[test]
    fn big_endian_and_row_flip() {
        // 2x2, file rows bottom-to-top: bottom row (3, 4), top row (1, 2)
        let mut bytes = b"Pf\n2 2\n1.0\n".to_vec();
        for v in [3.0f32, 4.0, 1.0, 2.0] {
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        let img = read_pfm(&bytes).unwrap();
        assert_eq!(img.samples, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(img.endian(), Endian::Big);
        assert_eq!(img.encode_with(Endian::Big), bytes);
    }

    #[test]
    fn three_channel_takes_first() {
        let img =
            PfmImage { width: 2, height: 1, channels: 3, scale: -1.0, samples: vec![1.0, 9.0, 9.0, 2.0, 9.0, 9.0] };
        let back = read_pfm(&img.encode()).unwrap();
        assert_eq!(back, img);
        let d: DisparityMap<f64> = back.to_disparity();
        assert_eq!(d.values(), &[1.0, 2.0]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(read_pfm(b"P5\n1 1\n-1.0\n\0\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(read_pfm(b"Pf\n1 1\n0.0\n\0\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(read_pfm(b"Pf\n2 1\n-1.0\n\0\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(read_pfm(b"Pf\n1 1\n"), Err(Error::Format(_))));
        assert!(matches!(read_pfm(b"Pf\n0 1\n-1.0\n"), Err(Error::Format(_))));
        assert!(PfmImage::gray(0, 0, vec![]).is_err());
    }

    #[test]
    fn invalid_pixels_round_trip_as_infinity() {
        let m = DisparityMap::new(3, 1, vec![1.5f32, 0.0, 2e4], vec![true, false, true]).unwrap();
        let img = PfmImage::from_disparity(&m).unwrap();
        assert_eq!(img.samples[1], f32::INFINITY);
        let back: DisparityMap<f32> = read_pfm(&img.encode()).unwrap().to_disparity();
        assert_eq!(back.valid(), &[true, false, false]);
        assert_eq!(back.value(0), 1.5);
    }
}
