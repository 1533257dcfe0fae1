use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Fft2, GridSpec, SampledField};
use crate::error::{Error, Result};

/// Paraxial angular-spectrum propagator for one grid, wavelength and step.
///
/// Applies `exp(−i (kx² + ky²) dz / 2k)` in the Fourier domain.
pub struct FreeSpacePropagator {
    fft: Fft2,
    grid: GridSpec,
    wavelength: f64,
    dz: f64,
    transfer: Vec<Complex64>,
}

impl FreeSpacePropagator {
    pub fn new(grid: GridSpec, wavelength: f64, dz: f64) -> Result<Self> {
        if !(dz.is_finite() && dz >= 0.0) {
            return Err(Error::InvalidParameter(format!("step {dz} must be non-negative")));
        }
        let n = grid.n();
        let k = 2.0 * std::f64::consts::PI / wavelength;
        // fold the 1/n² of the inverse transform into the transfer function
        let scale = 1.0 / (n * n) as f64;
        let transfer = (0..n * n)
            .map(|i| {
                let kx = grid.frequency(i % n);
                let ky = grid.frequency(i / n);
                Complex64::from_polar(scale, -(kx * kx + ky * ky) * dz / (2.0 * k))
            })
            .collect();
        Ok(Self {
            fft: Fft2::new(n),
            grid,
            wavelength,
            dz,
            transfer,
        })
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    /// Propagates in place. The field must match the planned grid and wavelength.
    pub fn apply(&self, field: &mut SampledField) -> Result<()> {
        if *field.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if field.wavelength() != self.wavelength {
            return Err(Error::InvalidParameter(format!(
                "propagator planned for {} m, field has {} m",
                self.wavelength,
                field.wavelength()
            )));
        }
        if self.dz == 0.0 {
            return Ok(());
        }
        let data = field.amplitude_mut();
        self.fft.forward(data);
        data.iter_mut().zip(&self.transfer).for_each(|(a, h)| *a *= h);
        self.fft.inverse(data);
        let z = field.z() + self.dz;
        field.set_z(z);
        Ok(())
    }
}

/// Free-space paraxial step over `dz` metres.
pub fn free_space_step(field: &SampledField, dz: f64) -> Result<SampledField> {
    let prop = FreeSpacePropagator::new(*field.grid(), field.wavelength(), dz)?;
    let mut out = field.clone();
    prop.apply(&mut out)?;
    Ok(out)
}

/// Super-Gaussian edge absorber `exp(−(r/R)^(2·order))` with `R = radius_fraction · window`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Absorber {
    pub order: u32,
    pub radius_fraction: f64,
}

impl Default for Absorber {
    fn default() -> Self {
        Self {
            order: 8,
            radius_fraction: 0.45,
        }
    }
}

impl Absorber {
    pub fn mask(&self, grid: &GridSpec) -> Vec<f64> {
        let radius = self.radius_fraction * grid.window();
        (0..grid.len())
            .map(|i| {
                let (x, y) = grid.position(i);
                let rho2 = (x * x + y * y) / (radius * radius);
                (-rho2.powi(self.order as i32)).exp()
            })
            .collect()
    }
}
