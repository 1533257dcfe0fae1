//! Samples a few Laguerre-Gaussian modes, checks their overlaps and
//! decomposes a superposition back onto the basis.

use num_complex::Complex64;
use oam_cs::optics::{decompose, inner_product, lg_mode_field, GridSpec, LgIndex, ModeBasis};

fn main() -> oam_cs::Result<()> {
    let (waist, wavelength) = (0.1, 1e-6);
    let grid = GridSpec::new(512, 16.0 * waist)?;
    let basis = ModeBasis::product(waist, &[0, 1], &[-2, -1, 0, 1, 2])?;

    let a = lg_mode_field(LgIndex::new(1, 0), waist, wavelength, grid)?;
    let b = lg_mode_field(LgIndex::new(-1, 0), waist, wavelength, grid)?;
    println!("<LG(1,0)|LG(1,0)>  = {:.6}", inner_product(&a, &a)?);
    println!("<LG(1,0)|LG(-1,0)> = {:.2e}", inner_product(&a, &b)?.norm());

    // (LG(0,0) + i LG(2,1)) / sqrt 2
    let mut mix = lg_mode_field(LgIndex::new(0, 0), waist, wavelength, grid)?;
    let mut other = lg_mode_field(LgIndex::new(2, 1), waist, wavelength, grid)?;
    other.scale(Complex64::new(0.0, 1.0));
    mix.add(&other)?;
    mix.scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    for (idx, c) in basis.indices().iter().zip(decompose(&mix, &basis)?) {
        if c.norm() > 1e-6 {
            println!("  (l={:>2}, p={}) -> {:.4}", idx.ell, idx.p, c);
        }
    }
    Ok(())
}
