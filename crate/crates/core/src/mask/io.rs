//! Mask and probability-map files.
//!
//! Masks are 8-bit grayscale PNGs (0 background, 255 foreground; any
//! non-zero value reads as foreground). Probability maps are either 8-bit
//! grayscale PNGs (`p = v / 255`) or the raw `PVPM` layout: magic `PVPM`,
//! little-endian `u32` width and height, then `width * height`
//! little-endian `f32` values row-major.

use std::fs;
use std::path::Path;

use image::{GrayImage, Luma};

use super::{BinaryMask, ProbabilityMap};
use crate::error::{Error, Result};

pub const PVPM_MAGIC: &[u8; 4] = b"PVPM";

fn read_gray(path: &Path) -> Result<GrayImage> {
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(img.into_luma8())
}

pub fn read_mask_png(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let img = read_gray(path.as_ref())?;
    let (w, h) = img.dimensions();
    BinaryMask::from_bits(w, h, img.as_raw().iter().map(|&v| v != 0).collect())
}

pub fn write_mask_png(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let img = GrayImage::from_fn(mask.width(), mask.height(), |x, y| {
        Luma([if mask.get(x, y) { 255 } else { 0 }])
    });
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

pub fn encode_pvpm(map: &ProbabilityMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + map.values().len() * 4);
    out.extend_from_slice(PVPM_MAGIC);
    out.extend_from_slice(&map.width().to_le_bytes());
    out.extend_from_slice(&map.height().to_le_bytes());
    for &v in map.values() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

pub fn decode_pvpm(bytes: &[u8]) -> Result<ProbabilityMap> {
    if bytes.len() < 12 || &bytes[..4] != PVPM_MAGIC {
        return Err(Error::Malformed("missing PVPM header".into()));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    let n = width as u64 * height as u64;
    let body = &bytes[12..];
    if body.len() as u64 != n * 4 {
        return Err(Error::Malformed(format!(
            "PVPM body has {} bytes, expected {} for {width}x{height}",
            body.len(),
            n * 4
        )));
    }
    let values = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    ProbabilityMap::new(width, height, values)
}

pub fn write_pvpm(map: &ProbabilityMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pvpm(map)).map_err(|e| Error::io(path, e))
}

/// Reads a probability map, choosing the format from the file contents.
pub fn read_probability_map(path: impl AsRef<Path>) -> Result<ProbabilityMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(PVPM_MAGIC) {
        return decode_pvpm(&bytes);
    }
    let img = image::load_from_memory(&bytes)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?
        .into_luma8();
    let (w, h) = img.dimensions();
    ProbabilityMap::new(w, h, img.as_raw().iter().map(|&v| v as f64 / 255.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pvpm_layout() {
        let map = ProbabilityMap::new(2, 1, vec![0.25, 1.0]).unwrap();
        let bytes = encode_pvpm(&map);
        assert_eq!(&bytes[..4], b"PVPM");
        assert_eq!(&bytes[4..8], &[2, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &[1, 0, 0, 0]);
        assert_eq!(&bytes[12..16], &0.25f32.to_le_bytes());
        assert_eq!(decode_pvpm(&bytes).unwrap(), map);
    }

    #[test]
    fn pvpm_truncated_body() {
        let map = ProbabilityMap::constant(3, 3, 0.5).unwrap();
        let bytes = encode_pvpm(&map);
        assert!(decode_pvpm(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode_pvpm(b"PVP").is_err());
    }

    #[test]
    fn png_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let m = BinaryMask::from_fn(9, 5, |x, y| x > y).unwrap();
        let p = dir.path().join("m.png");
        write_mask_png(&m, &p).unwrap();
        assert_eq!(read_mask_png(&p).unwrap(), m);

        let prob = read_probability_map(&p).unwrap();
        assert_eq!(prob.get(3, 1), 1.0);
        assert_eq!(prob.get(1, 3), 0.0);

        let raw = dir.path().join("p.pvpm");
        let map = ProbabilityMap::from_fn(4, 3, |x, y| (x + y) as f64 / 5.0).unwrap();
        write_pvpm(&map, &raw).unwrap();
        let back = read_probability_map(&raw).unwrap();
        for (a, b) in back.values().iter().zip(map.values()) {
            assert!((a - b).abs() < 1e-7);
        }
    }
}
