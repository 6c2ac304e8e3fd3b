//! Exact Euclidean distance transform.
//!
//! Separable lower-envelope-of-parabolas algorithm: one 1-D squared
//! transform along every row, then along every column. Both passes are
//! linear in the pixel count and produce exact squared integer distances.

use super::BinaryMask;
use crate::exec::Execution;

/// Euclidean distance of every pixel to the nearest background pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl DistanceField {
    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    /// Largest value, first in row-major order on ties. `None` when every
    /// value is zero.
    pub fn argmax(&self) -> Option<(u32, u32)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in self.values.iter().enumerate() {
            if v > 0.0 && best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let w = self.width as usize;
        best.map(|(i, _)| ((i % w) as u32, (i / w) as u32))
    }
}

/// 1-D squared distance transform of `f` into `out`. `f` holds 0 at sites
/// and `INFINITY` elsewhere; sites may be absent.
fn edt_1d(f: &[f64], out: &mut [f64], sites: &mut Vec<usize>, bounds: &mut Vec<f64>) {
    let n = f.len();
    sites.clear();
    bounds.clear();
    for q in 0..n {
        if !f[q].is_finite() {
            continue;
        }
        let fq = f[q] + (q * q) as f64;
        while let Some(&v) = sites.last() {
            let fv = f[v] + (v * v) as f64;
            let s = (fq - fv) / (2.0 * (q as f64 - v as f64));
            if s <= *bounds.last().unwrap() {
                sites.pop();
                bounds.pop();
            } else {
                sites.push(q);
                bounds.push(s);
                break;
            }
        }
        if sites.is_empty() {
            sites.push(q);
            bounds.push(f64::NEG_INFINITY);
        }
    }
    if sites.is_empty() {
        out.fill(f64::INFINITY);
        return;
    }
    let mut k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while k + 1 < sites.len() && bounds[k + 1] < q as f64 {
            k += 1;
        }
        let v = sites[k];
        let d = q as f64 - v as f64;
        *o = d * d + f[v];
    }
}

/// Squared Euclidean distance from each pixel to the nearest pixel of
/// `set`, row-major. Every entry is `INFINITY` when `set` is empty.
pub fn squared_distance_to_set(set: &BinaryMask, exec: Execution) -> Vec<f64> {
    let w = set.width() as usize;
    let h = set.height() as usize;

    let mut rows: Vec<f64> = set
        .bits()
        .iter()
        .map(|&b| if b { 0.0 } else { f64::INFINITY })
        .collect();
    exec.for_each_row(&mut rows, w, |_, row| {
        let f = row.to_vec();
        let (mut sites, mut bounds) = (Vec::with_capacity(w), Vec::with_capacity(w));
        edt_1d(&f, row, &mut sites, &mut bounds);
    });

    let mut cols = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            cols[x * h + y] = rows[y * w + x];
        }
    }
    exec.for_each_row(&mut cols, h, |_, col| {
        let f = col.to_vec();
        let (mut sites, mut bounds) = (Vec::with_capacity(h), Vec::with_capacity(h));
        edt_1d(&f, col, &mut sites, &mut bounds);
    });

    for y in 0..h {
        for x in 0..w {
            rows[y * w + x] = cols[x * h + y];
        }
    }
    rows
}

pub fn distance_transform(mask: &BinaryMask) -> DistanceField {
    distance_transform_with(mask, Execution::Sequential)
}

/// Distance transform with the row/column passes fanned out per `exec`.
///
/// A mask without background measures to the nearest pixel outside the
/// grid instead.
pub fn distance_transform_with(mask: &BinaryMask, exec: Execution) -> DistanceField {
    let (w, h) = (mask.width(), mask.height());
    let values = if mask.is_full() {
        (0..h)
            .flat_map(|y| (0..w).map(move |x| (x, y)))
            .map(|(x, y)| (x + 1).min(y + 1).min(w - x).min(h - y) as f64)
            .collect()
    } else {
        squared_distance_to_set(&mask.complement(), exec)
            .into_iter()
            .map(f64::sqrt)
            .collect()
    };
    DistanceField {
        width: w,
        height: h,
        values,
    }
}
