//! Compressive-sensing tomography of a random pure state from 20 % of the
//! generalized Gell-Mann expectation values.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oam_cs::metrics::fidelity;
use oam_cs::state::StateVector;
use oam_cs::tomography::{measure_state, reconstruct, sample_measurement_set, GgmBasis, Guess, ReconstructionConfig};

fn main() -> oam_cs::Result<()> {
    let d = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let psi = StateVector::normalized(DVector::from_fn(d, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    }))?;
    let basis = GgmBasis::new(d)?;
    let m = d * d / 5;
    let records = measure_state(&psi, &basis, &sample_measurement_set(d, m, &mut rng)?)?;

    let cfg = ReconstructionConfig {
        epsilon0: 0.3,
        guess: Guess::Spectral,
        ..Default::default()
    };
    let r = reconstruct(&records, &basis, &cfg)?;
    println!("d = {d}, m = {m} of {}", basis.len());
    println!(
        "fidelity {:.6} after {} iterations ({:.2} s), residual {:.2e}",
        fidelity(&r.state, &psi)?,
        r.diagnostics.iterations,
        r.diagnostics.wall_time_s,
        r.diagnostics.residual
    );
    Ok(())
}
