//! Split-step propagation of the three input branches and assembly of the
//! output Choi state and ground-truth Kraus matrix.

// 1/√3, the amplitude of each branch of the input state
const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{decompose, lg_mode_field, Absorber, FreeSpacePropagator, GridSpec, LgIndex, ModeBasis, SampledField};
use crate::state::{DensityMatrix, KrausMatrix, StateVector};
use crate::turbulence::TurbulenceRealization;

/// Number of wavelength (subsystem B) levels.
pub const N_B: usize = 3;

/// Default lower bound on the captured output power.
pub const DEFAULT_CAPTURE_FLOOR: f64 = 0.8;

/// The three (OAM, wavelength) pairs of the maximally non-separable input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputStateSpec {
    pub ell_values: [i32; 3],
    /// Metres.
    pub wavelengths: [f64; 3],
    /// Input waist radius, metres.
    pub waist: f64,
}

impl Default for InputStateSpec {
    fn default() -> Self {
        Self {
            ell_values: [-1, 0, 1],
            wavelengths: [1.000e-6, 1.020e-6, 1.040e-6],
            waist: 0.1,
        }
    }
}

impl InputStateSpec {
    pub fn validate(&self) -> Result<()> {
        let [a, b, c] = self.ell_values;
        if a == b || b == c || a == c {
            return Err(Error::InvalidParameter(format!("input ell values {:?} must be distinct", self.ell_values)));
        }
        let [x, y, z] = self.wavelengths;
        if self.wavelengths.iter().any(|w| !(*w > 0.0)) || x == y || y == z || x == z {
            return Err(Error::InvalidParameter(format!(
                "input wavelengths {:?} must be distinct and positive",
                self.wavelengths
            )));
        }
        if !(self.waist > 0.0) {
            return Err(Error::InvalidParameter(format!("waist {} must be positive", self.waist)));
        }
        Ok(())
    }

    pub fn modes(&self) -> [LgIndex; 3] {
        self.ell_values.map(|ell| LgIndex::new(ell, 0))
    }
}

/// Output LG basis: every `p` in `p_values` times every `ℓ` in `ell_range`
/// (inclusive), ordered `p`-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputBasisSpec {
    pub p_values: Vec<u32>,
    pub ell_range: (i32, i32),
}

impl Default for OutputBasisSpec {
    fn default() -> Self {
        Self {
            p_values: (0..=6).collect(),
            ell_range: (-14, 15),
        }
    }
}

impl OutputBasisSpec {
    pub fn new(p_values: Vec<u32>, ell_range: (i32, i32)) -> Self {
        Self { p_values, ell_range }
    }

    /// Smallest product basis containing the input modes.
    pub fn input_only(spec: &InputStateSpec) -> Self {
        let lo = *spec.ell_values.iter().min().unwrap();
        let hi = *spec.ell_values.iter().max().unwrap();
        Self::new(vec![0], (lo, hi))
    }

    pub fn ell_values(&self) -> Vec<i32> {
        (self.ell_range.0..=self.ell_range.1).collect()
    }

    /// `N_A'`.
    pub fn n_spatial(&self) -> usize {
        self.p_values.len() * self.ell_values().len()
    }

    /// `N_out = N_A' · N_B`.
    pub fn n_out(&self) -> usize {
        self.n_spatial() * N_B
    }

    pub fn mode_basis(&self, waist: f64) -> Result<ModeBasis> {
        ModeBasis::product(waist, &self.p_values, &self.ell_values())
    }

    /// Basis position of each input mode.
    pub fn input_positions(&self, spec: &InputStateSpec) -> Result<[usize; 3]> {
        let basis = self.mode_basis(spec.waist)?;
        let mut out = [0; 3];
        for (slot, mode) in out.iter_mut().zip(spec.modes()) {
            *slot = basis.position(mode).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "input mode (ell={}, p={}) is not in the output basis",
                    mode.ell, mode.p
                ))
            })?;
        }
        Ok(out)
    }
}

/// Nine-dimensional input state `Σ_k |ℓ_k, 0⟩|λ_k⟩ / √3`.
pub fn build_input_state(spec: &InputStateSpec) -> Result<StateVector> {
    spec.validate()?;
    let mut v = DVector::zeros(N_B * N_B);
    for k in 0..N_B {
        v[k * N_B + k] = Complex64::new(FRAC_1_SQRT_3, 0.0);
    }
    Ok(StateVector::new(v))
}

/// Input state written in the `N_out`-dimensional output index space.
pub fn embedded_input_state(spec: &InputStateSpec, basis: &OutputBasisSpec) -> Result<StateVector> {
    spec.validate()?;
    let pos = basis.input_positions(spec)?;
    let mut v = DVector::zeros(basis.n_out());
    for (k, m) in pos.iter().enumerate() {
        v[m * N_B + k] = Complex64::new(FRAC_1_SQRT_3, 0.0);
    }
    Ok(StateVector::new(v))
}

/// Options for the split-step propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelOptions {
    pub absorber: Option<Absorber>,
    pub capture_floor: f64,
}

impl Default for ChannelOptions {
    fn default() -> Self {
        Self {
            absorber: Some(Absorber::default()),
            capture_floor: DEFAULT_CAPTURE_FLOOR,
        }
    }
}

/// Propagates one input mode through every slab: phase screen, then free space.
pub fn propagate_branch(
    mode: LgIndex,
    wavelength: f64,
    realization: &TurbulenceRealization,
    grid: GridSpec,
    waist: f64,
    absorber: Option<&Absorber>,
) -> Result<SampledField> {
    if *realization.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let mut field = lg_mode_field(mode, waist, wavelength, grid)?;
    let mask = absorber.map(|a| a.mask(&grid));
    let mut propagator: Option<FreeSpacePropagator> = None;
    for (slab, screen) in realization.screens().iter().enumerate() {
        let phases = realization.phase_factors(slab, wavelength);
        field.amplitude_mut().iter_mut().zip(&phases).for_each(|(a, p)| *a *= p);
        if propagator.as_ref().is_none_or(|p| p.dz() != screen.dz_slab()) {
            propagator = Some(FreeSpacePropagator::new(grid, wavelength, screen.dz_slab())?);
        }
        propagator.as_ref().unwrap().apply(&mut field)?;
        if let Some(mask) = &mask {
            field.amplitude_mut().iter_mut().zip(mask).for_each(|(a, m)| *a *= m);
        }
    }
    Ok(field)
}

/// Output of one realization: normalised Choi vector plus ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOutput {
    /// Normalised output state, `N_out` entries.
    pub state: StateVector,
    /// Raw modal coefficients, one column per input branch (`N_A' × 3`).
    pub kraus: KrausMatrix,
    /// Squared norm of the Choi vector before renormalisation.
    pub captured_power: f64,
}

/// Choi vector `(m, k) → Λ[m, k] / √3` (not renormalised).
pub fn choi_vector(kraus: &KrausMatrix) -> DVector<Complex64> {
    let m = kraus.entries();
    let mut v = DVector::zeros(m.nrows() * N_B);
    for row in 0..m.nrows() {
        for k in 0..m.ncols().min(N_B) {
            v[row * N_B + k] = m[(row, k)] * FRAC_1_SQRT_3;
        }
    }
    v
}

/// Propagates all three branches through `realization` and decomposes each on
/// the output basis at the final plane.
pub fn propagate_choi(
    spec: &InputStateSpec,
    basis: &OutputBasisSpec,
    realization: &TurbulenceRealization,
    options: &ChannelOptions,
) -> Result<ChoiOutput> {
    spec.validate()?;
    basis.input_positions(spec)?;
    let modes = basis.mode_basis(spec.waist)?;
    let grid = *realization.grid();
    let mut kraus = DMatrix::zeros(modes.len(), N_B);
    for (k, (mode, wavelength)) in spec.modes().iter().zip(spec.wavelengths).enumerate() {
        let out = propagate_branch(*mode, wavelength, realization, grid, spec.waist, options.absorber.as_ref())?;
        let coeffs = decompose(&out, &modes)?;
        kraus.set_column(k, &DVector::from_vec(coeffs));
    }
    let kraus = KrausMatrix::new(kraus);
    let raw = choi_vector(&kraus);
    let captured_power = raw.norm_squared();
    if captured_power < options.capture_floor {
        return Err(Error::CaptureTooLow {
            captured: captured_power,
            floor: options.capture_floor,
        });
    }
    Ok(ChoiOutput {
        state: StateVector::normalized(raw)?,
        kraus,
        captured_power,
    })
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// JSON form of a [`ChoiOutput`]; complex numbers are `[re, im]` pairs and the
/// Kraus matrix is stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiArtifact {
    pub n_out: usize,
    pub captured_power: f64,
    pub choi: Vec<[f64; 2]>,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl From<&ChoiOutput> for ChoiArtifact {
    fn from(c: &ChoiOutput) -> Self {
        let k = c.kraus.entries();
        Self {
            n_out: c.state.dim(),
            captured_power: c.captured_power,
            choi: c.state.entries().iter().copied().map(pair).collect(),
            kraus: (0..k.nrows()).map(|r| k.row(r).iter().copied().map(pair).collect()).collect(),
        }
    }
}

impl TryFrom<ChoiArtifact> for ChoiOutput {
    type Error = Error;

    fn try_from(a: ChoiArtifact) -> Result<Self> {
        if a.choi.len() != a.n_out {
            return Err(Error::DimensionMismatch {
                expected: a.n_out,
                found: a.choi.len(),
            });
        }
        if a.kraus.len() * N_B != a.n_out || a.kraus.iter().any(|r| r.len() != N_B) {
            return Err(Error::Format(format!("Kraus matrix does not match N_out = {}", a.n_out)));
        }
        let kraus = DMatrix::from_fn(a.kraus.len(), N_B, |r, c| complex(a.kraus[r][c]));
        Ok(ChoiOutput {
            state: StateVector::from_vec(a.choi.into_iter().map(complex).collect()),
            kraus: KrausMatrix::new(kraus),
            captured_power: a.captured_power,
        })
    }
}

/// Flat indices of the input-mode ⊗ wavelength block, ordered `j · 3 + n`.
pub fn input_block_indices(spec: &InputStateSpec, basis: &OutputBasisSpec) -> Result<Vec<usize>> {
    let pos = basis.input_positions(spec)?;
    Ok(pos.iter().flat_map(|m| (0..N_B).map(move |n| m * N_B + n)).collect())
}

/// The 9×9 block on the input modes, renormalised to unit trace.
pub fn truncate_to_input_subspace(
    rho: &DensityMatrix,
    spec: &InputStateSpec,
    basis: &OutputBasisSpec,
) -> Result<DensityMatrix> {
    if rho.dim() != basis.n_out() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_out(),
            found: rho.dim(),
        });
    }
    let idx = input_block_indices(spec, basis)?;
    let full = rho.entries();
    let block = DMatrix::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])]);
    let trace = block.trace().re;
    if trace < 1e-12 {
        return Err(Error::ZeroBlock(trace));
    }
    DensityMatrix::new(block.unscale(trace))
}
