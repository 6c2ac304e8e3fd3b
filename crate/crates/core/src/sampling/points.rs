use rand::Rng;

use super::Pixel;
use crate::error::{Error, Result};
use crate::mask::{distance_transform, BinaryMask};
use crate::rng::{rng_from_seed, SampleRng};

/// Draws per requested point before giving up.
const DRAWS_PER_POINT: usize = 100;

#[inline]
fn clears(p: Pixel, others: &[Pixel], d2: f64) -> bool {
    others.iter().all(|&o| o != p && o.dist2(p) as f64 >= d2)
}

/// Rejection-samples up to `n` region pixels that are pairwise at least `d`
/// apart and never coincide.
///
/// Makes at most `100 * n` uniform draws; whatever was accepted by then is
/// returned. An empty region yields no points.
pub fn sample_random_min_dist(region: &BinaryMask, n: usize, d: f64, seed: u64) -> Vec<Pixel> {
    let mut rng = rng_from_seed(seed);
    sample_random_min_dist_with(region, n, d, &[], &mut rng)
}

/// Like [`sample_random_min_dist`], additionally keeping every accepted
/// point at least `d` away from `existing`.
pub fn sample_random_min_dist_with(
    region: &BinaryMask,
    n: usize,
    d: f64,
    existing: &[Pixel],
    rng: &mut SampleRng,
) -> Vec<Pixel> {
    let pool: Vec<Pixel> = region.foreground().map(|(x, y)| Pixel::new(x, y)).collect();
    if pool.is_empty() || n == 0 {
        return Vec::new();
    }
    let d2 = d.max(0.0).powi(2);
    let mut taken: Vec<Pixel> = existing.to_vec();
    let base = taken.len();
    for _ in 0..DRAWS_PER_POINT * n {
        let p = pool[rng.random_range(0..pool.len())];
        if clears(p, &taken, d2) {
            taken.push(p);
            if taken.len() - base == n {
                break;
            }
        }
    }
    taken.split_off(base)
}

/// Pixel with the largest distance-transform value, first in row-major
/// order on ties.
pub fn mask_center(mask: &BinaryMask) -> Result<Pixel> {
    distance_transform(mask)
        .argmax()
        .map(|(x, y)| Pixel::new(x, y))
        .ok_or(Error::Empty("mask"))
}

/// Farthest point sampling seeded at [`mask_center`].
pub fn sample_fps(region: &BinaryMask, n: usize) -> Result<Vec<Pixel>> {
    let seed = mask_center(region)?;
    sample_fps_from(region, seed, n)
}

/// Farthest point sampling from an explicit first point.
///
/// Each step takes the region pixel maximizing the minimum squared
/// distance to the points chosen so far (first in row-major order on
/// ties). Returns `min(n, area)` distinct pixels.
pub fn sample_fps_from(region: &BinaryMask, seed: Pixel, n: usize) -> Result<Vec<Pixel>> {
    if seed.x >= region.width() || seed.y >= region.height() || !region.get(seed.x, seed.y) {
        return Err(Error::Malformed(format!(
            "FPS seed ({}, {}) is not a region pixel",
            seed.x, seed.y
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let pool: Vec<Pixel> = region.foreground().map(|(x, y)| Pixel::new(x, y)).collect();
    let mut nearest: Vec<u64> = pool.iter().map(|p| p.dist2(seed)).collect();
    let mut out = vec![seed];
    while out.len() < n.min(pool.len()) {
        let (i, _) = nearest
            .iter()
            .enumerate()
            .fold((0, 0u64), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
        let next = pool[i];
        for (slot, p) in nearest.iter_mut().zip(&pool) {
            *slot = (*slot).min(p.dist2(next));
        }
        out.push(next);
    }
    Ok(out)
}
