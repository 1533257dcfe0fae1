use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{ChannelOptions, InputStateSpec, OutputBasisSpec};
use crate::correction::{ExtractionMethod, DEFAULT_RANK_THRESHOLD};
use crate::error::{Error, Result};
use crate::optics::{rayleigh_range, GridSpec};
use crate::tomography::{Guess, ReconstructionConfig};
use crate::turbulence::{
    fried_parameter, scintillation_strength, solve_z_for_w, TurbulenceParams, DEFAULT_SUBHARMONIC_LEVELS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n: usize,
    /// Side length, metres.
    pub window: f64,
}

/// Path length given directly or through the target scintillation strength `W = w0 / r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLength {
    Distance(f64),
    Scintillation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceConfig {
    pub cn2: f64,
    pub path: PathLength,
    pub subharmonic_levels: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessKind {
    MaximallyMixed,
    #[default]
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyConfig {
    /// `m / N_out²`.
    pub m_fraction: f64,
    pub epsilon0: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Standard deviation of additive noise on each expectation value.
    pub noise_sigma: f64,
    pub guess: GuessKind,
    pub extraction: ExtractionMethod,
    pub rank_threshold: f64,
}

impl Default for TomographyConfig {
    fn default() -> Self {
        Self {
            m_fraction: 0.05,
            epsilon0: 0.3,
            tol: 1e-6,
            max_iter: 5000,
            noise_sigma: 0.0,
            guess: GuessKind::Spectral,
            extraction: ExtractionMethod::ColumnDivision,
            rank_threshold: DEFAULT_RANK_THRESHOLD,
        }
    }
}

/// Phase-screen ensemble used by the structure-function check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenValidationConfig {
    pub n: usize,
    pub window: f64,
    /// Fried parameter of each screen, metres.
    pub r0: f64,
    pub screens: usize,
    /// Sub-harmonic level counts to compare.
    pub levels: Vec<u32>,
}

impl Default for ScreenValidationConfig {
    fn default() -> Self {
        // r0 spans four pixels, so [r0/2, 2 r0] is resolved by lags 2..=8
        Self {
            n: 2048,
            window: 2.048,
            r0: 0.004,
            screens: 500,
            levels: vec![DEFAULT_SUBHARMONIC_LEVELS, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grid: GridConfig,
    pub input: InputStateSpec,
    pub turbulence: TurbulenceConfig,
    pub output_basis: OutputBasisSpec,
    pub tomography: TomographyConfig,
    pub channel: ChannelOptions,
    pub realizations: usize,
    pub seed: u64,
    pub screens: ScreenValidationConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Desk,
    Paper,
}

impl ExperimentConfig {
    /// Full-size parameters: 1024² grid, 630-dimensional output, 5 % sampling,
    /// 100 realizations over `z = 2 z_R`. Hours of CPU time.
    pub fn paper() -> Self {
        let input = InputStateSpec::default();
        Self {
            grid: GridConfig {
                n: 1024,
                window: 32.0 * input.waist,
            },
            turbulence: TurbulenceConfig {
                cn2: 1e-16,
                path: PathLength::Distance(2.0 * rayleigh_range(input.waist, input.wavelengths[0])),
                subharmonic_levels: DEFAULT_SUBHARMONIC_LEVELS,
            },
            output_basis: OutputBasisSpec::default(),
            tomography: TomographyConfig::default(),
            channel: ChannelOptions::default(),
            realizations: 100,
            seed: 0,
            screens: ScreenValidationConfig::default(),
            input,
        }
    }

    /// Reduced size that runs in minutes: 512² grid, 108-dimensional output,
    /// 20 % sampling, 20 realizations at `W = 0.5`.
    pub fn desk() -> Self {
        let paper = Self::paper();
        Self {
            grid: GridConfig {
                n: 512,
                window: 16.0 * paper.input.waist,
            },
            turbulence: TurbulenceConfig {
                path: PathLength::Scintillation(0.5),
                ..paper.turbulence
            },
            output_basis: OutputBasisSpec::new(vec![0, 1, 2], (-5, 6)),
            tomography: TomographyConfig {
                m_fraction: 0.2,
                ..paper.tomography
            },
            realizations: 20,
            ..paper
        }
    }

    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Desk => Self::desk(),
            Preset::Paper => Self::paper(),
        }
    }

    /// Overlays a partial JSON or TOML document (chosen by extension, TOML
    /// otherwise) onto `self`.
    pub fn merged_with_file(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let patch: Value = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        self.merged_with(patch)
    }

    pub fn merged_with(&self, patch: Value) -> Result<Self> {
        let mut base = serde_json::to_value(self)?;
        merge(&mut base, patch);
        let cfg: Self = serde_json::from_value(base).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        GridSpec::new(self.grid.n, self.grid.window).map_err(|e| Error::Config(e.to_string()))?;
        self.input.validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.turbulence.cn2 > 0.0 && self.turbulence.cn2.is_finite()) {
            return bad(format!("cn2 = {} must be positive", self.turbulence.cn2));
        }
        match self.turbulence.path {
            PathLength::Distance(z) if !(z > 0.0 && z.is_finite()) => return bad(format!("path length {z} must be positive")),
            PathLength::Scintillation(w) if !(w > 0.0 && w.is_finite()) => return bad(format!("W = {w} must be positive")),
            _ => {}
        }
        self.output_basis
            .input_positions(&self.input)
            .map_err(|e| Error::Config(e.to_string()))?;
        let t = &self.tomography;
        if !(t.m_fraction > 0.0 && t.m_fraction <= 1.0) {
            return bad(format!("m_fraction = {} must lie in (0, 1]", t.m_fraction));
        }
        self.reconstruction_config().validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(t.noise_sigma >= 0.0 && t.noise_sigma.is_finite()) {
            return bad(format!("noise sigma {} must be >= 0", t.noise_sigma));
        }
        if !(t.rank_threshold > 0.0) {
            return bad(format!("rank threshold {} must be positive", t.rank_threshold));
        }
        if !(self.channel.capture_floor >= 0.0) {
            return bad(format!("capture floor {} must be >= 0", self.channel.capture_floor));
        }
        if self.realizations == 0 {
            return bad("at least one realization is required".into());
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.n, self.grid.window)
    }

    pub fn reference_wavelength(&self) -> f64 {
        self.input.wavelengths[0]
    }

    /// Propagation distance, solving for it when a target `W` is configured.
    pub fn path_length(&self) -> Result<f64> {
        match self.turbulence.path {
            PathLength::Distance(z) => Ok(z),
            PathLength::Scintillation(w) => {
                solve_z_for_w(self.input.waist, self.turbulence.cn2, self.reference_wavelength(), w)
            }
        }
    }

    /// `W = w0 / r0` of the configured path.
    pub fn scintillation(&self) -> Result<f64> {
        let r0 = fried_parameter(self.turbulence.cn2, self.path_length()?, self.reference_wavelength())?;
        scintillation_strength(self.input.waist, r0)
    }

    pub fn turbulence_params(&self) -> Result<TurbulenceParams> {
        TurbulenceParams::new(
            self.turbulence.cn2,
            self.path_length()?,
            self.reference_wavelength(),
            self.turbulence.subharmonic_levels,
        )
    }

    pub fn n_out(&self) -> usize {
        self.output_basis.n_out()
    }

    /// `round(m_fraction · N_out²)`, at least 1.
    pub fn measurement_count(&self) -> usize {
        let total = self.n_out() * self.n_out();
        ((self.tomography.m_fraction * total as f64).round() as usize).clamp(1, total)
    }

    pub fn reconstruction_config(&self) -> ReconstructionConfig {
        ReconstructionConfig {
            epsilon0: self.tomography.epsilon0,
            tol: self.tomography.tol,
            max_iter: self.tomography.max_iter,
            guess: match self.tomography.guess {
                GuessKind::MaximallyMixed => Guess::MaximallyMixed,
                GuessKind::Spectral => Guess::Spectral,
            },
        }
    }

    pub fn with_scintillation(&self, w: f64) -> Self {
        let mut c = self.clone();
        c.turbulence.path = PathLength::Scintillation(w);
        c
    }

    pub fn with_output_basis(&self, basis: OutputBasisSpec) -> Self {
        let mut c = self.clone();
        c.output_basis = basis;
        c
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::paper()
    }
}

/// Recursive overlay. An object carrying a key the base lacks replaces the
/// base wholesale, which switches enum variants such as `path`.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) if p.keys().all(|k| b.contains_key(k)) => {
            for (k, v) in p {
                merge(b.get_mut(&k).expect("key checked above"), v);
            }
        }
        (slot, v) => *slot = v,
    }
}
