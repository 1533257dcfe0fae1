use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square sampling window shared by fields and phase screens.
///
/// Sample `i` along either axis sits at `(i - n/2) * spacing`, so the optical
/// axis falls on sample `n/2`. Arrays are stored row-major with `y` as the
/// slow index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    window: f64,
}

impl GridSpec {
    pub const MIN_SAMPLES: usize = 64;

    pub fn new(n: usize, window: f64) -> Result<Self> {
        if n < Self::MIN_SAMPLES || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two >= {}",
                Self::MIN_SAMPLES
            )));
        }
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidGrid(format!("window = {window} must be positive")));
        }
        Ok(Self { n, window })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn spacing(&self) -> f64 {
        self.window / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Physical coordinate of sample `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing()
    }

    /// Spatial-frequency grid spacing (rad/m).
    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / self.window
    }

    /// Angular spatial frequency of FFT bin `i` (unshifted ordering).
    pub fn frequency(&self, i: usize) -> f64 {
        let signed = if i < self.n / 2 {
            i as f64
        } else {
            i as f64 - self.n as f64
        };
        signed * self.frequency_spacing()
    }

    /// `(x, y)` of the flat index `idx`.
    pub fn position(&self, idx: usize) -> (f64, f64) {
        (self.coord(idx % self.n), self.coord(idx / self.n))
    }
}
