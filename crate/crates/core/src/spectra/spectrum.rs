use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Default frequency window in units of the bare dipole frequency.
pub const DEFAULT_GRID: (f64, f64, usize) = (0.02, 2.6, 2000);

/// Strictly ascending frequency samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn linspace(start: f64, stop: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid("grid.points", format!("need at least 2, got {points}")));
        }
        if !(start.is_finite() && stop.is_finite() && start >= 0.0 && stop > start) {
            return Err(Error::invalid(
                "grid",
                format!("need 0 <= start < stop, got [{start}, {stop}]"),
            ));
        }
        let step = (stop - start) / (points - 1) as f64;
        let mut v: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
        v[points - 1] = stop;
        Ok(Self(v))
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("grid", "need at least 2 points"));
        }
        if points.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("grid", "points must be finite and >= 0"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid", "points must be strictly ascending"));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest gap between neighbouring samples.
    pub fn max_spacing(&self) -> f64 {
        self.0.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Same window with spacing halved.
    pub fn refined(&self) -> Grid {
        let mut v = Vec::with_capacity(2 * self.0.len() - 1);
        for w in self.0.windows(2) {
            v.push(w[0]);
            v.push(0.5 * (w[0] + w[1]));
        }
        v.push(*self.0.last().expect("grid has >= 2 points"));
        Grid(v)
    }
}

impl Default for Grid {
    fn default() -> Self {
        let (a, b, n) = DEFAULT_GRID;
        Self::linspace(a, b, n).expect("default grid is valid")
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::from_points(v)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(g: Grid) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Scaled so that the maximum sample is 1.
    UnitMax,
}

/// The parameters a spectrum was computed from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub label: String,
    pub parameters: serde_json::Value,
}

impl Provenance {
    pub fn new(label: impl Into<String>, parameters: impl Serialize) -> Result<Self> {
        let parameters = serde_json::to_value(parameters)
            .map_err(|e| Error::Precondition(format!("unserialisable provenance: {e}")))?;
        Ok(Self {
            label: label.into(),
            parameters,
        })
    }

    /// SHA-256 of the canonical (key-sorted) JSON encoding.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("JSON values always serialise");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Non-negative intensity samples on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    grid: Grid,
    intensity: Vec<f64>,
    normalization: Normalization,
    pub provenance: Provenance,
}

impl Spectrum {
    /// Raw spectrum. Negative samples are rejected.
    pub fn new(grid: Grid, intensity: Vec<f64>) -> Result<Self> {
        if intensity.len() != grid.len() {
            return Err(Error::Dimension {
                context: "Spectrum: intensity vs grid",
                expected: grid.len(),
                found: intensity.len(),
            });
        }
        if let Some(bad) = intensity.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Precondition(format!("spectrum sample {bad} is negative or not finite")));
        }
        Ok(Self {
            grid,
            intensity,
            normalization: Normalization::Raw,
            provenance: Provenance::default(),
        })
    }

    /// Clamps small negative excursions to zero.
    ///
    /// A minimum below `-tolerance * max` is an error; it signals a broken
    /// resolvent or a non-positive steady state rather than round-off.
    pub fn from_samples(grid: Grid, mut intensity: Vec<f64>, tolerance: f64) -> Result<Self> {
        let max = intensity.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = intensity.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -tolerance * max.max(0.0) {
            return Err(Error::NegativeSpectrum { min, max });
        }
        let clamped = intensity.iter().filter(|x| **x < 0.0).count();
        if clamped > 0 {
            log::debug!("clamped {clamped} negative spectrum samples (min {min:e}, max {max:e})");
            intensity.iter_mut().for_each(|x| *x = x.max(0.0));
        }
        Self::new(grid, intensity)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn omega(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().cloned().fold(0.0, f64::max)
    }

    /// Copy scaled to unit maximum. An identically zero spectrum stays zero.
    pub fn normalized(&self) -> Spectrum {
        let max = self.max();
        let mut out = self.clone();
        if max > 0.0 {
            out.intensity.iter_mut().for_each(|x| *x /= max);
        }
        out.normalization = Normalization::UnitMax;
        out
    }
}
