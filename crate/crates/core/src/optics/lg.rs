//! Laguerre-Gaussian modes, sampled at the waist or at any plane `z`.
//!
//! The modes solve the paraxial equation `∂z u = (i / 2k) ∇⊥² u`, the same
//! convention as [`free_space_step`](super::free_space_step):
//!
//! ```text
//! u(r, φ, z) = C/w · (√2 r / w)^|ℓ| · L_p^|ℓ|(2r²/w²) · exp(−r²/w²)
//!              · exp(i k r² / 2R) · exp(i ℓ φ) · exp(−i (2p + |ℓ| + 1) ψ)
//! ```
//!
//! with `w(z) = w0 √(1 + (z/zR)²)`, `1/R = z / (z² + zR²)`,
//! `ψ = atan(z/zR)` and `zR = π w0² / λ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridSpec, SampledField};
use crate::error::{Error, Result};

/// Minimum number of samples across the waist radius.
pub const MIN_SAMPLES_PER_WAIST: f64 = 8.0;

/// Largest tolerated shortfall of the sampled (pre-normalisation) mode power,
/// i.e. the part of the mode that falls outside the window.
pub const MAX_CLIPPED_POWER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LgIndex {
    pub ell: i32,
    pub p: u32,
}

impl LgIndex {
    pub const fn new(ell: i32, p: u32) -> Self {
        Self { ell, p }
    }

    /// Mode order `2p + |ℓ|`.
    pub fn order(&self) -> u32 {
        2 * self.p + self.ell.unsigned_abs()
    }
}

/// Rayleigh range `π w0² / λ`.
pub fn rayleigh_range(waist: f64, wavelength: f64) -> f64 {
    PI * waist * waist / wavelength
}

/// Beam radius `w(z)` of the fundamental Gaussian.
pub fn beam_radius(waist: f64, wavelength: f64, z: f64) -> f64 {
    let zr = rayleigh_range(waist, wavelength);
    waist * (1.0 + (z / zr).powi(2)).sqrt()
}

/// Generalised Laguerre polynomial `L_p^α(x)` by the three-term recurrence.
pub fn laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..p {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Precomputed, position-independent parts of one mode at one plane.
#[derive(Debug, Clone, Copy)]
struct ModeProfile {
    idx: LgIndex,
    radius: f64,
    norm: f64,
    curvature: f64,
    gouy: f64,
}

impl ModeProfile {
    fn new(idx: LgIndex, waist: f64, wavelength: f64, z: f64) -> Self {
        let zr = rayleigh_range(waist, wavelength);
        let k = 2.0 * PI / wavelength;
        let abs_ell = idx.ell.unsigned_abs();
        let ln_c = 0.5 * ((2.0 / PI).ln() + ln_factorial(idx.p) - ln_factorial(idx.p + abs_ell));
        Self {
            idx,
            radius: beam_radius(waist, wavelength, z),
            norm: ln_c.exp(),
            // k / (2R)
            curvature: k * z / (2.0 * (z * z + zr * zr)),
            gouy: (idx.order() + 1) as f64 * (z / zr).atan(),
        }
    }

    fn value(&self, x: f64, y: f64) -> Complex64 {
        let r2 = x * x + y * y;
        let w2 = self.radius * self.radius;
        let s = 2.0 * r2 / w2;
        let abs_ell = self.idx.ell.unsigned_abs();
        let radial = self.norm / self.radius
            * s.powf(abs_ell as f64 / 2.0)
            * laguerre(self.idx.p, abs_ell as f64, s)
            * (-r2 / w2).exp();
        let phase = self.curvature * r2 + self.idx.ell as f64 * y.atan2(x) - self.gouy;
        Complex64::from_polar(radial, phase)
    }
}

fn check_resolved(idx: LgIndex, waist: f64, grid: &GridSpec) -> Result<()> {
    let unresolved = |reason: String| Error::UnresolvedMode {
        ell: idx.ell,
        p: idx.p,
        reason,
    };
    if waist / grid.spacing() < MIN_SAMPLES_PER_WAIST {
        return Err(unresolved(format!(
            "waist spans {:.1} samples, need {MIN_SAMPLES_PER_WAIST}",
            waist / grid.spacing()
        )));
    }
    if waist >= grid.window() / 4.0 {
        return Err(unresolved(format!(
            "waist {waist} m is not below a quarter of the {} m window",
            grid.window()
        )));
    }
    Ok(())
}

fn check_clipping(idx: LgIndex, sampled_power: f64) -> Result<()> {
    if (1.0 - sampled_power).abs() > MAX_CLIPPED_POWER {
        return Err(Error::UnresolvedMode {
            ell: idx.ell,
            p: idx.p,
            reason: format!("only {sampled_power:.5} of the mode power is sampled by the window"),
        });
    }
    Ok(())
}

/// LG mode at plane `z`, discrete-normalised to unit power.
pub fn lg_mode_at(idx: LgIndex, waist: f64, wavelength: f64, z: f64, grid: GridSpec) -> Result<SampledField> {
    check_resolved(idx, waist, &grid)?;
    let profile = ModeProfile::new(idx, waist, wavelength, z);
    let amplitude = (0..grid.len())
        .map(|i| {
            let (x, y) = grid.position(i);
            profile.value(x, y)
        })
        .collect();
    let mut field = SampledField::new(grid, wavelength, z, amplitude)?;
    check_clipping(idx, field.norm_sqr())?;
    field.normalize();
    Ok(field)
}

/// LG mode at its waist plane (`z = 0`).
pub fn lg_mode_field(idx: LgIndex, waist: f64, wavelength: f64, grid: GridSpec) -> Result<SampledField> {
    lg_mode_at(idx, waist, wavelength, 0.0, grid)
}

/// Ordered set of LG modes sharing one waist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    waist: f64,
    indices: Vec<LgIndex>,
}

impl ModeBasis {
    pub fn new(waist: f64, indices: Vec<LgIndex>) -> Result<Self> {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::InvalidParameter(format!("waist {waist} must be positive")));
        }
        for (i, a) in indices.iter().enumerate() {
            if indices[..i].contains(a) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate mode (ell={}, p={})",
                    a.ell, a.p
                )));
            }
        }
        Ok(Self { waist, indices })
    }

    /// Row-major product basis: outer loop over `p`, inner loop over `ℓ`.
    pub fn product(waist: f64, p_values: &[u32], ell_values: &[i32]) -> Result<Self> {
        let indices = p_values
            .iter()
            .flat_map(|&p| ell_values.iter().map(move |&ell| LgIndex::new(ell, p)))
            .collect();
        Self::new(waist, indices)
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn indices(&self) -> &[LgIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, idx: LgIndex) -> Option<usize> {
        self.indices.iter().position(|&i| i == idx)
    }

    /// Samples every mode at plane `z` for the given wavelength.
    pub fn fields_at(&self, grid: GridSpec, wavelength: f64, z: f64) -> Result<Vec<SampledField>> {
        self.indices
            .iter()
            .map(|&idx| lg_mode_at(idx, self.waist, wavelength, z, grid))
            .collect()
    }
}

/// Projects `field` onto the basis modes evaluated at the field's own plane
/// and wavelength. Coefficient `k` is `⟨mode_k|field⟩`.
pub fn decompose(field: &SampledField, basis: &ModeBasis) -> Result<Vec<Complex64>> {
    let grid = *field.grid();
    let da = grid.spacing().powi(2);
    let positions: Vec<(f64, f64)> = (0..grid.len()).map(|i| grid.position(i)).collect();
    basis
        .indices()
        .iter()
        .map(|&idx| {
            check_resolved(idx, basis.waist(), &grid)?;
            let profile = ModeProfile::new(idx, basis.waist(), field.wavelength(), field.z());
            let mut overlap = Complex64::default();
            let mut power = 0.0;
            for (&(x, y), &a) in positions.iter().zip(field.amplitude()) {
                let u = profile.value(x, y);
                overlap += u.conj() * a;
                power += u.norm_sqr();
            }
            check_clipping(idx, power * da)?;
            Ok(overlap * da / (power * da).sqrt())
        })
        .collect()
}
