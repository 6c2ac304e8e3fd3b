use rand::seq::index;

use crate::rng::rng_from_seed;

/// Evenly spaced frame indices including both endpoints.
///
/// Index `i` of `k` is `round(i * (t - 1) / (k - 1))` with halves rounded
/// up. Returns every frame when `k >= t`, and `[0]` when `k == 1`.
pub fn subsample_frames_even(t_total: usize, k: usize) -> Vec<usize> {
    if t_total == 0 || k == 0 {
        return Vec::new();
    }
    if k >= t_total {
        return (0..t_total).collect();
    }
    if k == 1 {
        return vec![0];
    }
    let span = (t_total - 1) as u64;
    let steps = (k - 1) as u64;
    (0..k as u64)
        .map(|i| ((2 * i * span + steps) / (2 * steps)) as usize)
        .collect()
}

/// `min(k, t)` distinct frame indices drawn uniformly without replacement,
/// ascending.
pub fn subsample_frames_random(t_total: usize, k: usize, seed: u64) -> Vec<usize> {
    if k >= t_total {
        return (0..t_total).collect();
    }
    let mut rng = rng_from_seed(seed);
    let mut picked = index::sample(&mut rng, t_total, k).into_vec();
    picked.sort_unstable();
    picked
}
