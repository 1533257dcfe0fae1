//! Kolmogorov phase screens, their statistics and derived turbulence parameters.

mod realization;
mod screen;
mod spectrum;
mod stats;

pub use realization::TurbulenceRealization;
pub use screen::{
    add_subharmonics, generate_screen_pair, PhaseScreenBase, TurbulenceParams, DEFAULT_SUBHARMONIC_LEVELS,
};
pub use spectrum::{
    fried_parameter, kolmogorov_psd, phase_psd, plan_slabs, rytov_variance, scintillation_strength, solve_z_for_w,
    SLAB_RYTOV_LIMIT,
};
pub use stats::{
    axial_structure, ensemble_structure, kolmogorov_structure_function, mean_stderr, screen_structure, Direction,
    StructureAccumulator, StructureEstimate,
};
