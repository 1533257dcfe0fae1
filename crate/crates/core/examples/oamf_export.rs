//! Writes a phase screen and a propagated field in the OAMF binary format
//! and reads them back.

use std::io::Cursor;

use oam_cs::harness::ExperimentConfig;
use oam_cs::oamf::{read_field, read_screen, write_field, write_screen};
use oam_cs::optics::lg_mode_field;
use oam_cs::turbulence::TurbulenceRealization;

fn main() -> oam_cs::Result<()> {
    let cfg = ExperimentConfig::desk();
    let medium = TurbulenceRealization::generate(cfg.grid_spec()?, cfg.turbulence_params()?, 1)?;
    let screen = &medium.screens()[0];

    let mut buf = Vec::new();
    write_screen(&mut buf, screen, cfg.reference_wavelength())?;
    let (back, wavelength) = read_screen(&mut Cursor::new(&buf))?;
    println!("screen: {} bytes, lambda_ref {wavelength:e}, identical: {}", buf.len(), back.values() == screen.values());

    let field = lg_mode_field(cfg.input.modes()[0], cfg.input.waist, cfg.input.wavelengths[0], cfg.grid_spec()?)?;
    let mut buf = Vec::new();
    write_field(&mut buf, &field)?;
    let back = read_field(&mut Cursor::new(&buf))?;
    println!("field: {} bytes, identical: {}", buf.len(), back.amplitude() == field.amplitude());
    Ok(())
}
