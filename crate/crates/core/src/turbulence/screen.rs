use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::spectrum::{phase_psd, plan_slabs};
use crate::error::{Error, Result};
use crate::optics::{Fft2, GridSpec};

/// Default number of sub-harmonic levels.
pub const DEFAULT_SUBHARMONIC_LEVELS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceParams {
    /// Refractive-index structure constant, m^(−2/3).
    pub cn2: f64,
    /// Total path length, m.
    pub path_length: f64,
    /// Wavelength the stored screen phases refer to, m.
    pub reference_wavelength: f64,
    pub subharmonic_levels: u32,
}

impl TurbulenceParams {
    pub fn new(cn2: f64, path_length: f64, reference_wavelength: f64, subharmonic_levels: u32) -> Result<Self> {
        let p = Self {
            cn2,
            path_length,
            reference_wavelength,
            subharmonic_levels,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cn2 >= 0.0 && self.cn2.is_finite()) {
            return Err(Error::InvalidParameter(format!("cn2 = {} must be >= 0", self.cn2)));
        }
        if !(self.path_length > 0.0 && self.path_length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "path length {} must be positive",
                self.path_length
            )));
        }
        if !(self.reference_wavelength > 0.0) {
            return Err(Error::InvalidParameter("reference wavelength must be positive".into()));
        }
        Ok(())
    }

    pub fn reference_wavenumber(&self) -> f64 {
        2.0 * PI / self.reference_wavelength
    }

    pub fn plan_slabs(&self) -> Result<Vec<f64>> {
        plan_slabs(self.cn2, self.path_length, self.reference_wavelength)
    }

    fn phase_psd(&self, k_mag: f64, dz: f64) -> f64 {
        phase_psd(k_mag, self.cn2, self.reference_wavenumber(), dz)
    }
}

/// Real phase screen in radians at the reference wavenumber for one slab.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScreenBase {
    grid: GridSpec,
    values: Vec<f64>,
    dz_slab: f64,
}

impl PhaseScreenBase {
    pub fn new(grid: GridSpec, values: Vec<f64>, dz_slab: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("phase screen has non-finite samples".into()));
        }
        if !(dz_slab > 0.0) {
            return Err(Error::InvalidParameter(format!("slab thickness {dz_slab} must be positive")));
        }
        Ok(Self { grid, values, dz_slab })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dz_slab(&self) -> f64 {
        self.dz_slab
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / self.values.len() as f64
    }

    fn recenter(&mut self) {
        let m = self.mean();
        self.values.iter_mut().for_each(|v| *v -= m);
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex low-frequency field from `levels` sub-harmonic rings.
///
/// Level `n` uses the frequency spacing `Δk / 3ⁿ` and the eight neighbours of
/// the origin on that finer lattice. Real and imaginary parts of each
/// coefficient have variance `Δk_n² Φ_θ(K)`.
fn subharmonic_field<R: Rng + ?Sized>(
    grid: &GridSpec,
    params: &TurbulenceParams,
    dz: f64,
    levels: u32,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut terms = Vec::with_capacity(8 * levels as usize);
    for level in 1..=levels {
        let dk = grid.frequency_spacing() / 3f64.powi(level as i32);
        for q in -1i32..=1 {
            for p in -1i32..=1 {
                if p == 0 && q == 0 {
                    continue;
                }
                let (kx, ky) = (p as f64 * dk, q as f64 * dk);
                let amp = dk * params.phase_psd(kx.hypot(ky), dz).sqrt();
                terms.push((kx, ky, complex_normal(rng) * amp));
            }
        }
    }
    // each plane wave factorises into a row and a column phase
    let n = grid.n();
    let mut field = vec![Complex64::default(); grid.len()];
    for &(kx, ky, c) in &terms {
        let row: Vec<Complex64> = (0..n).map(|ix| Complex64::from_polar(1.0, kx * grid.coord(ix))).collect();
        for (iy, line) in field.chunks_exact_mut(n).enumerate() {
            let cy = c * Complex64::from_polar(1.0, ky * grid.coord(iy));
            line.iter_mut().zip(&row).for_each(|(f, r)| *f += cy * r);
        }
    }
    field
}

/// Draws one complex filtered-noise field and splits it into two independent
/// real screens (real and imaginary parts).
///
/// Each spectral coefficient is `(a + i b) √Φ_θ(K) Δk` with `a, b ~ N(0, 1)`
/// and the DC bin left at zero, so each part carries the full Kolmogorov
/// phase variance. Sub-harmonics are added when `params.subharmonic_levels > 0`.
pub fn generate_screen_pair<R: Rng + ?Sized>(
    grid: GridSpec,
    params: &TurbulenceParams,
    dz_slab: f64,
    rng: &mut R,
) -> Result<(PhaseScreenBase, PhaseScreenBase)> {
    params.validate()?;
    if !(dz_slab > 0.0) {
        return Err(Error::InvalidParameter(format!("slab thickness {dz_slab} must be positive")));
    }
    let n = grid.n();
    let dk = grid.frequency_spacing();
    let mut spectrum: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let (kx, ky) = (grid.frequency(i % n), grid.frequency(i / n));
            let chi = complex_normal(rng);
            if i == 0 {
                Complex64::default()
            } else {
                chi * dk * params.phase_psd(kx.hypot(ky), dz_slab).sqrt()
            }
        })
        .collect();
    // the unnormalised inverse FFT is exactly Σ_K c_K exp(iK·x)
    Fft2::new(n).inverse(&mut spectrum);
    if params.subharmonic_levels > 0 {
        let low = subharmonic_field(&grid, params, dz_slab, params.subharmonic_levels, rng);
        spectrum.iter_mut().zip(low).for_each(|(a, b)| *a += b);
    }
    let mut first = PhaseScreenBase::new(grid, spectrum.iter().map(|c| c.re).collect(), dz_slab)?;
    let mut second = PhaseScreenBase::new(grid, spectrum.iter().map(|c| c.im).collect(), dz_slab)?;
    first.recenter();
    second.recenter();
    Ok((first, second))
}

/// Adds `levels` sub-harmonic levels (real part of a fresh draw) to `screen`
/// and re-centres it. `levels == 0` returns the input unchanged.
pub fn add_subharmonics<R: Rng + ?Sized>(
    mut screen: PhaseScreenBase,
    levels: u32,
    params: &TurbulenceParams,
    rng: &mut R,
) -> PhaseScreenBase {
    if levels == 0 {
        return screen;
    }
    let low = subharmonic_field(&screen.grid, params, screen.dz_slab, levels, rng);
    screen.values.iter_mut().zip(low).for_each(|(v, c)| *v += c.re);
    screen.recenter();
    screen
}
