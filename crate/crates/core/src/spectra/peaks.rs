use serde::Serialize;

use super::spectrum::Spectrum;
use crate::error::{Error, Result};

/// Default prominence threshold, as a fraction of the global maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Position refined by a parabola through the top three samples.
    pub omega: f64,
    pub height: f64,
    pub prominence: f64,
    /// Half of the full width at half prominence.
    pub halfwidth: f64,
}

/// Local maxima whose prominence exceeds `prominence_frac` of the global
/// maximum, ascending in frequency.
///
/// Prominence is the height above the higher of the two minima separating the
/// peak from taller samples (or the grid edge) on either side. Widths are
/// measured where the line crosses half that prominence, with linear
/// interpolation between samples.
pub fn find_peaks(s: &Spectrum, prominence_frac: f64) -> Vec<Peak> {
    let x = s.omega();
    let y = s.intensity();
    let n = y.len();
    let max = s.max();
    if max <= 0.0 || n < 3 {
        return Vec::new();
    }
    let threshold = prominence_frac * max;
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if !(y[i] > y[i - 1]) {
            i += 1;
            continue;
        }
        // Plateau: extend over equal samples and use its centre.
        let mut end = i;
        while end + 1 < n && y[end + 1] == y[i] {
            end += 1;
        }
        if end + 1 >= n || y[end + 1] > y[i] {
            i = end + 1;
            continue;
        }
        let top = (i + end) / 2;
        if let Some(p) = measure(x, y, top, threshold) {
            peaks.push(p);
        }
        i = end + 1;
    }
    peaks
}

fn measure(x: &[f64], y: &[f64], top: usize, threshold: f64) -> Option<Peak> {
    let n = y.len();
    let h = y[top];
    let mut left = top;
    let mut left_min = h;
    while left > 0 && y[left - 1] <= h {
        left -= 1;
        left_min = left_min.min(y[left]);
    }
    let mut right = top;
    let mut right_min = h;
    while right + 1 < n && y[right + 1] <= h {
        right += 1;
        right_min = right_min.min(y[right]);
    }
    let prominence = h - left_min.max(right_min);
    if prominence < threshold || prominence <= 0.0 {
        return None;
    }
    let level = h - 0.5 * prominence;
    let mut a = top;
    while a > left && y[a] > level {
        a -= 1;
    }
    let left_cross = if y[a] <= level && a < top {
        x[a] + (level - y[a]) * (x[a + 1] - x[a]) / (y[a + 1] - y[a])
    } else {
        x[a]
    };
    let mut b = top;
    while b < right && y[b] > level {
        b += 1;
    }
    let right_cross = if y[b] <= level && b > top {
        x[b] - (level - y[b]) * (x[b] - x[b - 1]) / (y[b - 1] - y[b])
    } else {
        x[b]
    };
    Some(Peak {
        omega: refine(x, y, top),
        height: h,
        prominence,
        halfwidth: 0.5 * (right_cross - left_cross),
    })
}

fn refine(x: &[f64], y: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= y.len() {
        return x[i];
    }
    let (x0, x1, x2) = (x[i - 1], x[i], x[i + 1]);
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature >= 0.0 {
        return x1;
    }
    // Vertex of the interpolating parabola.
    let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    vertex.clamp(x0, x2)
}

/// Distance between two lineshapes on the same grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    /// `max |a − b|` of the unit-maximum intensities.
    pub linf: f64,
    /// Largest position difference between matched peaks; infinite when
    /// one side has peaks and the other none.
    pub peak_shift_max: f64,
    pub peak_count_a: usize,
    pub peak_count_b: usize,
}

impl Comparison {
    pub fn same_peak_count(&self) -> bool {
        self.peak_count_a == self.peak_count_b
    }
}

pub fn compare_spectra(a: &Spectrum, b: &Spectrum) -> Result<Comparison> {
    compare_spectra_with(a, b, DEFAULT_PROMINENCE)
}

/// Compares unit-maximum copies of `a` and `b`.
///
/// Peaks are matched nearest-first from the side with fewer peaks.
pub fn compare_spectra_with(a: &Spectrum, b: &Spectrum, prominence_frac: f64) -> Result<Comparison> {
    if a.omega() != b.omega() {
        return Err(Error::GridMismatch);
    }
    let (a, b) = (a.normalized(), b.normalized());
    let linf = a
        .intensity()
        .iter()
        .zip(b.intensity())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    let pa = find_peaks(&a, prominence_frac);
    let pb = find_peaks(&b, prominence_frac);
    let (few, many) = if pa.len() <= pb.len() { (&pa, &pb) } else { (&pb, &pa) };
    let peak_shift_max = if few.is_empty() {
        if many.is_empty() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        few.iter()
            .map(|p| many.iter().map(|q| (p.omega - q.omega).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(Comparison {
        linf,
        peak_shift_max,
        peak_count_a: pa.len(),
        peak_count_b: pb.len(),
    })
}
