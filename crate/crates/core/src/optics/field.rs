use std::f64::consts::PI;

use num_complex::Complex64;

use super::GridSpec;
use crate::error::{Error, Result};

/// Complex scalar field sampled on a [`GridSpec`] at propagation distance `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: GridSpec,
    wavelength: f64,
    z: f64,
    amplitude: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridSpec, wavelength: f64, z: f64, amplitude: Vec<Complex64>) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidParameter(format!("wavelength {wavelength} must be positive")));
        }
        if amplitude.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: amplitude.len(),
            });
        }
        Ok(Self {
            grid,
            wavelength,
            z,
            amplitude,
        })
    }

    pub fn zeros(grid: GridSpec, wavelength: f64, z: f64) -> Result<Self> {
        Self::new(grid, wavelength, z, vec![Complex64::default(); grid.len()])
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn amplitude_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitude
    }

    pub fn into_amplitude(self) -> Vec<Complex64> {
        self.amplitude
    }

    pub(crate) fn set_z(&mut self, z: f64) {
        self.z = z;
    }

    /// Sample at row `iy`, column `ix`.
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.amplitude[iy * self.grid.n() + ix]
    }

    /// Discrete power `Σ|a|²·spacing²`.
    pub fn norm_sqr(&self) -> f64 {
        let da = self.grid.spacing().powi(2);
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * da
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amplitude.iter_mut().for_each(|a| *a *= factor);
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.scale(factor);
        self
    }

    /// Rescales to unit discrete norm. A zero field is left untouched.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.scale(Complex64::new(1.0 / norm, 0.0));
        }
    }

    /// Adds `other` sample-wise. Grids must match.
    pub fn add(&mut self, other: &SampledField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        self.amplitude
            .iter_mut()
            .zip(&other.amplitude)
            .for_each(|(a, b)| *a += b);
        Ok(())
    }
}

/// Discrete overlap `⟨a|b⟩ = Σ conj(a)·b·spacing²`.
pub fn inner_product(a: &SampledField, b: &SampledField) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let da = a.grid.spacing().powi(2);
    let sum: Complex64 = a
        .amplitude
        .iter()
        .zip(&b.amplitude)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * da)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(grid: GridSpec, shift: f64) -> SampledField {
        let amp = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.position(i);
                let r2 = (x - shift).powi(2) + y * y;
                Complex64::from_polar((-r2).exp(), x)
            })
            .collect();
        let mut f = SampledField::new(grid, 1e-6, 0.0, amp).unwrap();
        f.normalize();
        f
    }

    #[test]
    fn self_overlap_is_one() {
        let g = GridSpec::new(64, 8.0).unwrap();
        let f = bump(g, 0.0);
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn linear_in_second_argument() {
        let g = GridSpec::new(64, 8.0).unwrap();
        let f = bump(g, 0.3);
        let fi = f.clone().scaled(Complex64::i());
        let ip = inner_product(&f, &fi).unwrap();
        assert!((ip - Complex64::i()).norm() < 1e-10);
    }

    #[test]
    fn conjugate_symmetric() {
        let g = GridSpec::new(64, 8.0).unwrap();
        let a = bump(g, 0.3);
        let b = bump(g, -0.5);
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = bump(GridSpec::new(64, 8.0).unwrap(), 0.0);
        let b = bump(GridSpec::new(64, 9.0).unwrap(), 0.0);
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn rejects_bad_wavelength() {
        let g = GridSpec::new(64, 8.0).unwrap();
        assert!(SampledField::zeros(g, 0.0, 0.0).is_err());
        assert!(SampledField::new(g, 1e-6, 0.0, vec![]).is_err());
    }
}
