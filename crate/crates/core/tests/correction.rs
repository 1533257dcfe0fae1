mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{choi_of, random_isometry, random_state};
use oam_cs::channel::{build_input_state, embedded_input_state, InputStateSpec, OutputBasisSpec};
use oam_cs::correction::{assemble_kraus, correct_state, extract_state_vector, ExtractionMethod, DEFAULT_RANK_THRESHOLD};
use oam_cs::linalg::hermitian_eigen;
use oam_cs::metrics::{fidelity, trace_distance};
use oam_cs::state::{DensityMatrix, KrausMatrix, StateVector};
use oam_cs::Error;

fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm()
}

#[test]
fn identity_channel_gives_the_embedding() {
    let spec = InputStateSpec::default();
    let basis = OutputBasisSpec::default();
    let psi = embedded_input_state(&spec, &basis).unwrap();
    let got = extract_state_vector(&psi.density(), ExtractionMethod::ColumnDivision, DEFAULT_RANK_THRESHOLD).unwrap();
    let k = assemble_kraus(&got, 3).unwrap().kraus;
    let want = KrausMatrix::embedding(210, &basis.input_positions(&spec).unwrap());
    assert_eq!(k.entries(), want.entries());
}

#[test]
fn random_isometry_is_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let v = random_isometry(210, 3, &mut rng);
    let rho_out = choi_of(&v).density();
    let psi = extract_state_vector(&rho_out, ExtractionMethod::ColumnDivision, DEFAULT_RANK_THRESHOLD).unwrap();
    let k = assemble_kraus(&psi, 3).unwrap().kraus;
    for c in 0..3 {
        let (kc, vc) = (k.entries().column(c), v.entries().column(c));
        let phase = vc.dotc(&kc);
        let phase = phase / phase.norm();
        let worst = kc.iter().zip(vc.iter()).map(|(a, b)| (a - b * phase).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "column {c}: {worst}");
    }
    let corrected = correct_state(&rho_out, &k).unwrap();
    let target = build_input_state(&InputStateSpec::default()).unwrap();
    assert!((fidelity(&corrected, &target).unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn slightly_mixed_states_extract_well() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = 27;
    let psi = random_state(d, &mut rng);
    let mut m = psi.density().into_entries().scale(0.98);
    for i in 0..d {
        m[(i, i)] += Complex64::new(0.02 / d as f64, 0.0);
    }
    let rho = DensityMatrix::new(m).unwrap();
    let a = extract_state_vector(&rho, ExtractionMethod::ColumnDivision, DEFAULT_RANK_THRESHOLD).unwrap();
    let b = extract_state_vector(&rho, ExtractionMethod::DominantEigenvector, DEFAULT_RANK_THRESHOLD).unwrap();
    assert!(overlap(&a, &psi) > 0.99 && overlap(&b, &psi) > 0.99);
    assert!((overlap(&a, &psi) - overlap(&b, &psi)).abs() < 1e-2);

    // the rank-1 rebuild is within twice the distance of ρ from the nearest pure state
    let (_, vectors) = hermitian_eigen(rho.entries());
    let top = StateVector::new(vectors.column(d - 1).into_owned());
    let defect = rho.distance(&top.density());
    for e in [&a, &b] {
        let gap = rho.distance(&e.density());
        assert!(gap <= 2.0 * defect, "gap {gap}, defect {defect}");
    }
}

#[test]
fn rank_two_state_is_rejected() {
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(1, 1)] = Complex64::new(0.5, 0.0);
    let rho = DensityMatrix::new(m).unwrap();
    for method in [ExtractionMethod::ColumnDivision, ExtractionMethod::DominantEigenvector] {
        assert!(matches!(
            extract_state_vector(&rho, method, DEFAULT_RANK_THRESHOLD),
            Err(Error::RankAmbiguous { .. })
        ));
    }
}

#[test]
fn metric_reference_values() {
    let target = build_input_state(&InputStateSpec::default()).unwrap();
    let rho = target.density();
    assert!((fidelity(&rho, &target).unwrap() - 1.0).abs() < 1e-12);
    assert!(trace_distance(&rho, &target).unwrap().abs() < 1e-7);
    let orth = StateVector::basis(9, 1).density();
    assert!(fidelity(&orth, &target).unwrap().abs() < 1e-12);
    assert!((trace_distance(&orth, &target).unwrap() - 1.0).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(9);
    assert!((fidelity(&mixed, &target).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}
