use num_complex::Complex64;
use oam_cs::optics::{
    beam_radius, decompose, free_space_step, inner_product, lg_mode_at, lg_mode_field, rayleigh_range, GridSpec,
    LgIndex, ModeBasis, SampledField,
};

const WAIST: f64 = 0.1;
const LAMBDA: f64 = 1e-6;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, 16.0 * WAIST).unwrap()
}

/// 1/e² intensity radius from the second moment: `w = 2 √⟨x²⟩` for a Gaussian.
fn second_moment_radius(f: &SampledField) -> f64 {
    let g = f.grid();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, a) in f.amplitude().iter().enumerate() {
        let (x, _) = g.position(i);
        num += x * x * a.norm_sqr();
        den += a.norm_sqr();
    }
    2.0 * (num / den).sqrt()
}

#[test]
fn gaussian_width_after_one_rayleigh_range() {
    let g = grid(1024);
    let f = lg_mode_field(LgIndex::new(0, 0), WAIST, LAMBDA, g).unwrap();
    assert!((second_moment_radius(&f) / WAIST - 1.0).abs() < 1e-3);
    let out = free_space_step(&f, rayleigh_range(WAIST, LAMBDA)).unwrap();
    let w = second_moment_radius(&out);
    let want = WAIST * 2f64.sqrt();
    assert!((w / want - 1.0).abs() < 0.01, "w = {w}, want {want}");
}

#[test]
fn lg_gram_matrix_is_identity() {
    let g = grid(1024);
    let basis = ModeBasis::product(WAIST, &[0, 1, 2], &[-3, -2, -1, 0, 1, 2, 3]).unwrap();
    let fields = basis.fields_at(g, LAMBDA, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i..] {
            let ip = inner_product(a, b).unwrap();
            let want = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            worst = worst.max((ip - Complex64::new(want, 0.0)).norm());
        }
    }
    assert!(worst < 1e-3, "max Gram deviation {worst}");
}

#[test]
fn propagation_preserves_norm() {
    let g = grid(256);
    let mut f = lg_mode_field(LgIndex::new(3, 1), WAIST, LAMBDA, g).unwrap();
    f.add(&lg_mode_field(LgIndex::new(-2, 0), WAIST, LAMBDA, g).unwrap()).unwrap();
    let before = f.norm_sqr();
    for dz in [0.0, 1.0, 1e3, 3.1e4, 1e5] {
        let out = free_space_step(&f, dz).unwrap();
        assert!((out.norm_sqr() / before - 1.0).abs() < 1e-10, "dz = {dz}");
        assert_eq!(out.z(), dz);
    }
}

#[test]
fn propagation_composes() {
    let g = grid(256);
    let f = lg_mode_field(LgIndex::new(1, 1), WAIST, LAMBDA, g).unwrap();
    let (a, b) = (7_000.0, 12_500.0);
    let once = free_space_step(&f, a + b).unwrap();
    let twice = free_space_step(&free_space_step(&f, a).unwrap(), b).unwrap();
    let worst = once
        .amplitude()
        .iter()
        .zip(twice.amplitude())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "max sample difference {worst}");
}

#[test]
fn lg_modes_are_free_space_eigenmodes() {
    let g = grid(512);
    let z = 2.0 * rayleigh_range(WAIST, LAMBDA);
    let basis = ModeBasis::product(WAIST, &[0, 1, 2], &[-4, -2, -1, 0, 1, 3]).unwrap();
    for &idx in basis.indices() {
        let f = lg_mode_field(idx, WAIST, LAMBDA, g).unwrap();
        let out = free_space_step(&f, z).unwrap();
        let c = decompose(&out, &basis).unwrap();
        let hit = basis.position(idx).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = if k == hit { 1.0 } else { 0.0 };
            assert!((v.norm() - want).abs() < 1e-3, "{idx:?} -> k={k}: {}", v.norm());
        }
        // phase too: the analytic mode at z includes the Gouy term
        assert!((c[hit] - Complex64::new(1.0, 0.0)).norm() < 1e-3, "{idx:?}: {}", c[hit]);
    }
}

#[test]
fn analytic_radius_matches_propagated_mode() {
    let g = grid(512);
    let z = 1.5 * rayleigh_range(WAIST, LAMBDA);
    let analytic = lg_mode_at(LgIndex::new(0, 0), WAIST, LAMBDA, z, g).unwrap();
    let w = second_moment_radius(&analytic);
    assert!((w / beam_radius(WAIST, LAMBDA, z) - 1.0).abs() < 1e-3);
}
