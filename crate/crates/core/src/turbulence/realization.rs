use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{generate_screen_pair, PhaseScreenBase, TurbulenceParams};
use crate::error::{Error, Result};
use crate::optics::GridSpec;

/// One frozen snapshot of the path: an ordered list of slab screens.
#[derive(Debug, Clone, PartialEq)]
pub struct TurbulenceRealization {
    screens: Vec<PhaseScreenBase>,
    seed: u64,
    params: TurbulenceParams,
}

impl TurbulenceRealization {
    /// Plans equal slabs and fills them from a ChaCha stream seeded by `seed`.
    pub fn generate(grid: GridSpec, params: TurbulenceParams, seed: u64) -> Result<Self> {
        let slabs = params.plan_slabs()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut screens = Vec::with_capacity(slabs.len());
        while screens.len() < slabs.len() {
            let dz = slabs[screens.len()];
            let (a, b) = generate_screen_pair(grid, &params, dz, &mut rng)?;
            screens.push(a);
            if screens.len() < slabs.len() {
                screens.push(b);
            }
        }
        Self::from_screens(screens, seed, params)
    }

    pub fn from_screens(screens: Vec<PhaseScreenBase>, seed: u64, params: TurbulenceParams) -> Result<Self> {
        if screens.is_empty() {
            return Err(Error::InvalidParameter("a realization needs at least one screen".into()));
        }
        let total: f64 = screens.iter().map(|s| s.dz_slab()).sum();
        if ((total - params.path_length) / params.path_length).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "slabs sum to {total} m, path is {} m",
                params.path_length
            )));
        }
        Ok(Self { screens, seed, params })
    }

    pub fn screens(&self) -> &[PhaseScreenBase] {
        &self.screens
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &TurbulenceParams {
        &self.params
    }

    pub fn grid(&self) -> &GridSpec {
        self.screens[0].grid()
    }

    /// Phase factors `exp(i θ k/k_ref)` of screen `slab` at `wavelength`.
    pub fn phase_factors(&self, slab: usize, wavelength: f64) -> Vec<Complex64> {
        let scale = self.params.reference_wavelength / wavelength;
        self.screens[slab]
            .values()
            .iter()
            .map(|&theta| Complex64::from_polar(1.0, theta * scale))
            .collect()
    }
}
