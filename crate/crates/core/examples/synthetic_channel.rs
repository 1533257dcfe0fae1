//! Channel correction with an exactly known channel: a random isometry acts
//! on the OAM part of the input, the output is measured completely, and the
//! Kraus matrix recovered from the reconstruction undoes it.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use oam_cs::channel::{build_input_state, choi_vector, InputStateSpec};
use oam_cs::correction::{assemble_kraus, correct_state, extract_state_vector, ExtractionMethod, DEFAULT_RANK_THRESHOLD};
use oam_cs::metrics::{fidelity, negativity};
use oam_cs::state::{KrausMatrix, StateVector};
use oam_cs::tomography::{measure_state, reconstruct, GgmBasis, ReconstructionConfig};

fn main() -> oam_cs::Result<()> {
    let n_spatial = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut g = || Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
    // orthonormal columns via QR
    let v = DMatrix::from_fn(n_spatial, 3, |_, _| g()).qr().q();
    let channel = KrausMatrix::new(v);

    let psi_out = StateVector::normalized(choi_vector(&channel))?;
    let d = psi_out.dim();
    let basis = GgmBasis::new(d)?;
    let all: Vec<usize> = (0..d * d).collect();
    let rec = reconstruct(&measure_state(&psi_out, &basis, &all)?, &basis, &ReconstructionConfig::default())?;

    let psi = extract_state_vector(&rec.state, ExtractionMethod::ColumnDivision, DEFAULT_RANK_THRESHOLD)?;
    let kraus = assemble_kraus(&psi, 3)?;
    let corrected = correct_state(&psi_out.density(), &kraus.kraus)?;
    let target = build_input_state(&InputStateSpec::default())?;
    println!("N_out = {d}, isometry defect of recovered Kraus {:.1e}", kraus.kraus.isometry_defect());
    println!("corrected fidelity {:.12}", fidelity(&corrected, &target)?);
    println!("corrected negativity {:.12}", negativity(&corrected, 3, 3)?);
    Ok(())
}
