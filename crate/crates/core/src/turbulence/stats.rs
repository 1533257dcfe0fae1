//! Ensemble structure-function estimates for validating phase screens.

use serde::Serialize;

use super::PhaseScreenBase;

/// Kolmogorov phase structure function `6.88 (r / r0)^(5/3)`.
pub fn kolmogorov_structure_function(r: f64, r0: f64) -> f64 {
    6.88 * (r / r0).powf(5.0 / 3.0)
}

/// Pixel displacement used for one direction bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    X,
    Y,
    Diagonal,
    AntiDiagonal,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::X, Direction::Y, Direction::Diagonal, Direction::AntiDiagonal];

    fn step(self) -> (isize, isize) {
        match self {
            Direction::X => (1, 0),
            Direction::Y => (0, 1),
            Direction::Diagonal => (1, 1),
            Direction::AntiDiagonal => (1, -1),
        }
    }

    /// Length of one step in units of the grid spacing.
    pub fn unit_length(self) -> f64 {
        let (dx, dy) = self.step();
        ((dx * dx + dy * dy) as f64).sqrt()
    }
}

/// Mean of `(θ(x + lag·step) − θ(x))²` over all in-window pairs of one screen.
/// No wrap-around is used, so sub-harmonic content is measured correctly.
pub fn screen_structure(screen: &PhaseScreenBase, direction: Direction, lag: usize) -> f64 {
    let n = screen.grid().n() as isize;
    let v = screen.values();
    let (sx, sy) = direction.step();
    let (dx, dy) = (sx * lag as isize, sy * lag as isize);
    let (mut acc, mut count) = (0.0, 0usize);
    for y in 0..n {
        let y2 = y + dy;
        if !(0..n).contains(&y2) {
            continue;
        }
        for x in 0..n - dx {
            let d = v[(y2 * n + x + dx) as usize] - v[(y * n + x) as usize];
            acc += d * d;
            count += 1;
        }
    }
    acc / count as f64
}

/// Ensemble estimate at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureEstimate {
    pub r: f64,
    pub mean: f64,
    /// Standard error of `mean` over the ensemble members.
    pub stderr: f64,
}

/// Ensemble-averaged structure function along `direction` at each pixel lag.
pub fn ensemble_structure(screens: &[PhaseScreenBase], direction: Direction, lags: &[usize]) -> Vec<StructureEstimate> {
    assert!(!screens.is_empty(), "empty ensemble");
    let spacing = screens[0].grid().spacing();
    lags.iter()
        .map(|&lag| {
            let samples: Vec<f64> = screens.iter().map(|s| screen_structure(s, direction, lag)).collect();
            let (mean, stderr) = mean_stderr(&samples);
            StructureEstimate {
                r: lag as f64 * direction.unit_length() * spacing,
                mean,
                stderr,
            }
        })
        .collect()
}

/// Isotropic estimate: average of the x and y axis estimates.
pub fn axial_structure(screens: &[PhaseScreenBase], lags: &[usize]) -> Vec<StructureEstimate> {
    let spacing = screens[0].grid().spacing();
    lags.iter()
        .map(|&lag| {
            let samples: Vec<f64> = screens
                .iter()
                .map(|s| 0.5 * (screen_structure(s, Direction::X, lag) + screen_structure(s, Direction::Y, lag)))
                .collect();
            let (mean, stderr) = mean_stderr(&samples);
            StructureEstimate {
                r: lag as f64 * spacing,
                mean,
                stderr,
            }
        })
        .collect()
}

/// Streaming version of [`axial_structure`]: screens are added one at a time
/// and need not be kept.
#[derive(Debug, Clone)]
pub struct StructureAccumulator {
    lags: Vec<usize>,
    spacing: f64,
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl StructureAccumulator {
    pub fn new(lags: &[usize], spacing: f64) -> Self {
        Self {
            lags: lags.to_vec(),
            spacing,
            count: 0,
            mean: vec![0.0; lags.len()],
            m2: vec![0.0; lags.len()],
        }
    }

    pub fn push(&mut self, screen: &PhaseScreenBase) {
        self.count += 1;
        let n = self.count as f64;
        for (i, &lag) in self.lags.iter().enumerate() {
            let x = 0.5 * (screen_structure(screen, Direction::X, lag) + screen_structure(screen, Direction::Y, lag));
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x - self.mean[i]);
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn estimates(&self) -> Vec<StructureEstimate> {
        let n = self.count as f64;
        self.lags
            .iter()
            .enumerate()
            .map(|(i, &lag)| StructureEstimate {
                r: lag as f64 * self.spacing,
                mean: self.mean[i],
                stderr: if self.count < 2 {
                    f64::NAN
                } else {
                    (self.m2[i] / (n - 1.0) / n).sqrt()
                },
            })
            .collect()
    }
}

pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
