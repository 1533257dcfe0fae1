//! "OAMF" binary dumps of sampled fields and phase screens.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `OAMF` |
//! | 2     | version (`u16`); bit 15 set marks a real-valued payload |
//! | 4     | `n` (`u32`) |
//! | 8     | window (`f64`, metres) |
//! | 8     | wavelength (`f64`, metres) |
//! | 8     | `z` (`f64`, metres) |
//! | ...   | `n²` samples, row-major: `(re, im)` `f64` pairs, or one `f64` each when real |
//!
//! Phase screens store their reference wavelength in the wavelength slot and
//! the slab thickness in the `z` slot.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::{GridSpec, SampledField};
use crate::turbulence::PhaseScreenBase;

pub const MAGIC: &[u8; 4] = b"OAMF";
pub const VERSION: u16 = 1;
pub const REAL_PAYLOAD: u16 = 0x8000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Header {
    pub real: bool,
    pub n: u32,
    pub window: f64,
    pub wavelength: f64,
    pub z: f64,
}

impl Header {
    fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        let version = if self.real { VERSION | REAL_PAYLOAD } else { VERSION };
        w.write_all(&version.to_le_bytes())?;
        w.write_all(&self.n.to_le_bytes())?;
        for v in [self.window, self.wavelength, self.z] {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    fn read<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}")));
        }
        let mut b2 = [0u8; 2];
        r.read_exact(&mut b2)?;
        let version = u16::from_le_bytes(b2);
        if version & !REAL_PAYLOAD != VERSION {
            return Err(Error::Format(format!("unsupported version {}", version & !REAL_PAYLOAD)));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        Ok(Self {
            real: version & REAL_PAYLOAD != 0,
            n: u32::from_le_bytes(b4),
            window: read_f64(r)?,
            wavelength: read_f64(r)?,
            z: read_f64(r)?,
        })
    }

    fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.n as usize, self.window)
    }
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn write_field<W: Write>(w: &mut W, field: &SampledField) -> Result<()> {
    let grid = field.grid();
    Header {
        real: false,
        n: grid.n() as u32,
        window: grid.window(),
        wavelength: field.wavelength(),
        z: field.z(),
    }
    .write(w)?;
    for a in field.amplitude() {
        w.write_all(&a.re.to_le_bytes())?;
        w.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<SampledField> {
    let header = Header::read(r)?;
    if header.real {
        return Err(Error::Format("expected a complex payload".into()));
    }
    let grid = header.grid()?;
    let amplitude = (0..grid.len())
        .map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?)))
        .collect::<Result<Vec<_>>>()?;
    SampledField::new(grid, header.wavelength, header.z, amplitude)
}

pub fn write_screen<W: Write>(w: &mut W, screen: &PhaseScreenBase, reference_wavelength: f64) -> Result<()> {
    let grid = screen.grid();
    Header {
        real: true,
        n: grid.n() as u32,
        window: grid.window(),
        wavelength: reference_wavelength,
        z: screen.dz_slab(),
    }
    .write(w)?;
    for v in screen.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Returns the screen and the reference wavelength it was stored with.
pub fn read_screen<R: Read>(r: &mut R) -> Result<(PhaseScreenBase, f64)> {
    let header = Header::read(r)?;
    if !header.real {
        return Err(Error::Format("expected a real payload".into()));
    }
    let grid = header.grid()?;
    let values = (0..grid.len()).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
    Ok((PhaseScreenBase::new(grid, values, header.z)?, header.wavelength))
}
