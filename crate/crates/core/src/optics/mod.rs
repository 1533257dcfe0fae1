//! Sampled scalar fields, Laguerre-Gaussian modes and paraxial free-space steps.

mod fft;
mod field;
mod grid;
mod lg;
mod propagation;

pub use fft::Fft2;
pub use field::{inner_product, SampledField};
pub use grid::GridSpec;
pub use lg::{
    beam_radius, decompose, laguerre, lg_mode_at, lg_mode_field, rayleigh_range, LgIndex, ModeBasis,
    MAX_CLIPPED_POWER, MIN_SAMPLES_PER_WAIST,
};
pub use propagation::{free_space_step, Absorber, FreeSpacePropagator};
