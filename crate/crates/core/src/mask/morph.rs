use super::{squared_distance_to_set, BinaryMask};
use crate::exec::Execution;

/// Foreground pixels with a 4-neighbour that is background or outside the
/// grid.
pub fn boundary(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_fn(w, h, |x, y| {
        if !mask.get(x, y) {
            return false;
        }
        let (xi, yi) = (x as i64, y as i64);
        [(-1, 0), (1, 0), (0, -1), (0, 1)]
            .iter()
            .any(|&(dx, dy)| !mask.get_signed(xi + dx, yi + dy))
    })
    .expect("dimensions come from a valid mask")
}

/// Sets every pixel within Euclidean distance `radius` of a foreground
/// pixel. Negative or NaN radii behave like 0.
pub fn dilate(mask: &BinaryMask, radius: f64) -> BinaryMask {
    if mask.is_empty() || radius.is_nan() || radius <= 0.0 {
        return mask.clone();
    }
    let r2 = radius * radius;
    let d2 = squared_distance_to_set(mask, Execution::Sequential);
    BinaryMask::from_bits(
        mask.width(),
        mask.height(),
        d2.into_iter().map(|d| d <= r2).collect(),
    )
    .expect("dimensions come from a valid mask")
}
