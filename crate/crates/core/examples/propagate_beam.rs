//! Split-step propagation of an OAM beam through a turbulent path and its
//! modal spectrum at the receiver.

use oam_cs::channel::propagate_branch;
use oam_cs::optics::{decompose, ModeBasis};
use oam_cs::turbulence::{fried_parameter, TurbulenceRealization};
use oam_cs::harness::ExperimentConfig;

fn main() -> oam_cs::Result<()> {
    let cfg = ExperimentConfig::desk().with_scintillation(1.0);
    let (waist, wavelength) = (cfg.input.waist, cfg.reference_wavelength());
    let params = cfg.turbulence_params()?;
    let r0 = fried_parameter(params.cn2, params.path_length, wavelength)?;
    println!("z = {:.0} m, r0 = {:.4} m, W = {:.2}", params.path_length, r0, waist / r0);

    let medium = TurbulenceRealization::generate(cfg.grid_spec()?, params, 3)?;
    println!("{} slabs of {:.0} m", medium.screens().len(), medium.screens()[0].dz_slab());
    let mode = cfg.input.modes()[2];
    let out = propagate_branch(mode, wavelength, &medium, *medium.grid(), waist, None)?;
    println!("norm after propagation: {:.12}", out.norm_sqr());

    let ells: Vec<i32> = (-3..=5).collect();
    let basis = ModeBasis::product(waist, &[0], &ells)?;
    println!("OAM spectrum of l = {} (p = 0):", mode.ell);
    for (idx, c) in basis.indices().iter().zip(decompose(&out, &basis)?) {
        println!("  l={:>2}  {:.4}  {}", idx.ell, c.norm_sqr(), "#".repeat((60.0 * c.norm_sqr()) as usize));
    }
    Ok(())
}
