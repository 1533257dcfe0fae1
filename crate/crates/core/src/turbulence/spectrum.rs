//! Kolmogorov spectra and the scalar turbulence parameters derived from them.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest per-slab Rytov variance accepted by [`plan_slabs`].
pub const SLAB_RYTOV_LIMIT: f64 = 0.1;

/// Kolmogorov refractive-index spectrum `0.033 C_n² κ^(−11/3)`; zero at `κ = 0`.
pub fn kolmogorov_psd(k_mag: f64, cn2: f64) -> f64 {
    if k_mag <= 0.0 {
        return 0.0;
    }
    0.033 * cn2 * k_mag.powf(-11.0 / 3.0)
}

/// Phase spectrum of one slab: `2π k² Δz Φ_n(κ)`.
pub fn phase_psd(k_mag: f64, cn2: f64, wavenumber: f64, dz: f64) -> f64 {
    2.0 * PI * wavenumber * wavenumber * dz * kolmogorov_psd(k_mag, cn2)
}

/// Fried parameter `r0 = 0.185 (λ² / (C_n² z))^(3/5)`.
pub fn fried_parameter(cn2: f64, z: f64, wavelength: f64) -> Result<f64> {
    if !(cn2 > 0.0 && z > 0.0 && wavelength > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "fried parameter needs positive cn2, z and wavelength (got {cn2}, {z}, {wavelength})"
        )));
    }
    Ok(0.185 * (wavelength * wavelength / (cn2 * z)).powf(0.6))
}

/// Scintillation strength `W = w0 / r0`.
pub fn scintillation_strength(w0: f64, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!("r0 = {r0} must be positive")));
    }
    Ok(w0 / r0)
}

/// Path length at which `w0 / r0` equals `target_w`.
pub fn solve_z_for_w(w0: f64, cn2: f64, wavelength: f64, target_w: f64) -> Result<f64> {
    if !(target_w > 0.0 && w0 > 0.0 && cn2 > 0.0 && wavelength > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot solve for W = {target_w} with w0 = {w0}, cn2 = {cn2}"
        )));
    }
    let r0 = w0 / target_w;
    Ok(wavelength * wavelength / cn2 * (r0 / 0.185).powf(-5.0 / 3.0))
}

/// Plane-wave Rytov variance `1.23 C_n² k^(7/6) L^(11/6)`.
pub fn rytov_variance(cn2: f64, wavenumber: f64, length: f64) -> f64 {
    1.23 * cn2 * wavenumber.powf(7.0 / 6.0) * length.powf(11.0 / 6.0)
}

/// Splits `path_length` into the fewest equal slabs (at least two) whose
/// individual Rytov variance at `wavelength` stays within [`SLAB_RYTOV_LIMIT`].
pub fn plan_slabs(cn2: f64, path_length: f64, wavelength: f64) -> Result<Vec<f64>> {
    if !(path_length > 0.0 && cn2 >= 0.0 && wavelength > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot plan slabs for z = {path_length}, cn2 = {cn2}"
        )));
    }
    let k = 2.0 * PI / wavelength;
    let mut count = 2usize;
    if cn2 > 0.0 {
        // largest slab meeting the bound, then round the count up
        let max_dz = (SLAB_RYTOV_LIMIT / (1.23 * cn2 * k.powf(7.0 / 6.0))).powf(6.0 / 11.0);
        count = count.max((path_length / max_dz).ceil() as usize);
        while rytov_variance(cn2, k, path_length / count as f64) > SLAB_RYTOV_LIMIT {
            count += 1;
        }
    }
    Ok(vec![path_length / count as f64; count])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_power_law() {
        assert_eq!(kolmogorov_psd(0.0, 1e-16), 0.0);
        let r = kolmogorov_psd(20.0, 1e-16) / kolmogorov_psd(10.0, 1e-16);
        assert!((r - 2f64.powf(-11.0 / 3.0)).abs() < 1e-14);
        // 100^(-11/3) = 10^(-22/3)
        let want = 0.033e-16 * 10f64.powf(-22.0 / 3.0);
        assert!((kolmogorov_psd(100.0, 1e-16) / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fried_parameter_scaling() {
        let r0 = fried_parameter(1e-16, 1000.0, 1e-6).unwrap();
        let r0z = fried_parameter(1e-16, 2000.0, 1e-6).unwrap();
        assert!((r0z / r0 - 2f64.powf(-0.6)).abs() < 1e-12);
        let r0c = fried_parameter(1e-16 / 2f64.powf(5.0 / 3.0), 1000.0, 1e-6).unwrap();
        assert!((r0c / r0 - 2.0).abs() < 1e-12);
        assert!(fried_parameter(0.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn scintillation_strength_labels() {
        assert_eq!(scintillation_strength(0.1, 0.2).unwrap(), 0.5);
        assert_eq!(scintillation_strength(0.1, 0.05).unwrap(), 2.0);
        assert!(scintillation_strength(0.1, 0.0).is_err());
    }

    #[test]
    fn z_for_w_round_trip() {
        for z in [10.0, 1234.5, 62_832.0, 1e6] {
            let r0 = fried_parameter(1e-16, z, 1e-6).unwrap();
            let w = scintillation_strength(0.1, r0).unwrap();
            let back = solve_z_for_w(0.1, 1e-16, 1e-6, w).unwrap();
            assert!((back / z - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn negligible_turbulence_gives_two_slabs() {
        assert_eq!(plan_slabs(1e-20, 1000.0, 1e-6).unwrap(), vec![500.0, 500.0]);
        assert_eq!(plan_slabs(0.0, 1000.0, 1e-6).unwrap().len(), 2);
    }
}
