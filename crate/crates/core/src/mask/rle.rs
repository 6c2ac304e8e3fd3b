//! Uncompressed COCO-style run-length codec.
//!
//! Runs walk the grid column-major (`(0,0), (0,1), ...`) and alternate
//! background / foreground, starting with background. A mask whose first
//! pixel is foreground therefore starts with a zero-length run.

use serde::{Deserialize, Serialize};

use super::BinaryMask;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rle {
    pub width: u32,
    pub height: u32,
    pub counts: Vec<u32>,
}

impl Rle {
    /// Foreground pixel count without decoding.
    pub fn area(&self) -> u64 {
        self.counts.iter().skip(1).step_by(2).map(|&c| c as u64).sum()
    }

    /// Checks the run invariants: total equals the grid size and only the
    /// first run may be empty.
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Malformed(format!(
                "RLE dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        let total: u64 = self.counts.iter().map(|&c| c as u64).sum();
        let expected = self.width as u64 * self.height as u64;
        if total != expected {
            return Err(Error::Malformed(format!(
                "RLE counts sum to {total}, expected {expected} for {}x{}",
                self.width, self.height
            )));
        }
        if let Some(i) = self.counts.iter().skip(1).position(|&c| c == 0) {
            return Err(Error::Malformed(format!("zero-length run at index {}", i + 1)));
        }
        Ok(())
    }
}

pub fn rle_encode(mask: &BinaryMask) -> Rle {
    let (w, h) = (mask.width(), mask.height());
    let mut counts = Vec::new();
    let mut current = false;
    let mut run = 0u32;
    for x in 0..w {
        for y in 0..h {
            let v = mask.get(x, y);
            if v != current {
                counts.push(run);
                run = 0;
                current = v;
            }
            run += 1;
        }
    }
    counts.push(run);
    Rle {
        width: w,
        height: h,
        counts,
    }
}

pub fn rle_decode(rle: &Rle) -> Result<BinaryMask> {
    rle.validate()?;
    let (w, h) = (rle.width, rle.height);
    let mut mask = BinaryMask::new(w, h)?;
    let mut pos = 0u64;
    for (i, &c) in rle.counts.iter().enumerate() {
        if i % 2 == 1 {
            for p in pos..pos + c as u64 {
                let x = (p / h as u64) as u32;
                let y = (p % h as u64) as u32;
                mask.set(x, y, true);
            }
        }
        pos += c as u64;
    }
    Ok(mask)
}
