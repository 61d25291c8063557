//! Property tests for the spectral substrate and the frame maps.

use bargmann_core::frame::{
    apply_boost, apply_translation, bargmann_loop_on_state, bargmann_loop_phase, neg, Channel,
    MassChannelState, PhysicalContext,
};
use bargmann_core::grid::{
    from_spectrum, global_phase_between, to_spectrum, ComplexField, Grid,
};
use bargmann_core::report::wrap_angle;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn random_field(grid: Grid, seed: u64) -> ComplexField {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.n())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexField::new(grid, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_round_trip(exp in 3u32..=12, seed in any::<u64>(), len in 1.0f64..50.0) {
        let grid = Grid::new(1 << exp, len).unwrap();
        let f = random_field(grid, seed);
        let spec = to_spectrum(&f);
        let norm_sq = f.norm_sq();
        prop_assert!((norm_sq - spec.norm_sq()).abs() <= 1e-12 * norm_sq.max(1e-300));
        let back = from_spectrum(&spec);
        prop_assert!(f.max_abs_diff(&back).unwrap() <= 1e-12);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(seed in any::<u64>()) {
        let grid = Grid::new(128, 12.0).unwrap();
        let f = random_field(grid, seed);
        let g = random_field(grid, seed.wrapping_add(1));
        let fg = f.inner(&g).unwrap();
        let gf = g.inner(&f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-14 * fg.norm().max(1.0));
    }

    #[test]
    fn frame_maps_are_unitary(
        v in -5.0f64..5.0,
        a in -3.0f64..3.0,
        mass in 0.1f64..10.0,
        sigma in 0.2f64..0.8,
    ) {
        let grid = Grid::new(512, 28.0).unwrap();
        let field = ComplexField::gaussian(grid, 0.0, sigma, 0.0);
        let state = MassChannelState::single(mass, field, PhysicalContext::natural()).unwrap();
        let n0 = state.total_norm();
        let boosted = apply_boost(&state, [v, 0.0, 0.0], 0.0);
        prop_assert!((boosted.total_norm() - n0).abs() <= 1e-13);
        let translated = apply_translation(&state, [a, 0.0, 0.0]);
        prop_assert!((translated.total_norm() - n0).abs() <= 1e-13);
        let looped = bargmann_loop_on_state(&state, [v, 0.0, 0.0], [a, 0.0, 0.0]);
        prop_assert!((looped.total_norm() - n0).abs() <= 1e-13);
    }

    #[test]
    fn boost_translation_inverses(v in -4.0f64..4.0, a in -3.0f64..3.0) {
        let grid = Grid::new(512, 28.0).unwrap();
        let field = ComplexField::gaussian(grid, 0.5, 0.5, 1.0);
        let state = MassChannelState::single(1.3, field, PhysicalContext::natural()).unwrap();
        let vv = [v, 0.0, 0.0];
        let round = apply_boost(&apply_boost(&state, vv, 0.0), neg(vv), 0.0);
        prop_assert!(
            round.channels()[0].field.max_abs_diff(&state.channels()[0].field).unwrap() <= 1e-12
        );
        let aa = [a, 0.0, 0.0];
        let round = apply_translation(&apply_translation(&state, aa), neg(aa));
        prop_assert!(
            round.channels()[0].field.max_abs_diff(&state.channels()[0].field).unwrap() <= 1e-12
        );
    }
}

#[test]
fn global_phase_recovers_100_random_angles() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let grid = Grid::new(256, 24.0).unwrap();
    let f = ComplexField::gaussian(grid, 0.3, 0.9, 1.1);
    for _ in 0..100 {
        let theta: f64 = rng.random_range(-20.0..20.0);
        let g = f.map(|_, v| v * Complex64::cis(theta));
        let m = global_phase_between(&f, &g).unwrap();
        assert!(
            wrap_angle(m.angle - theta).abs() <= 1e-12,
            "theta = {theta}, extracted {}",
            m.angle
        );
        assert!(m.residual <= 1e-12);
    }
}

#[test]
fn loop_phase_law_over_random_parameters() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let grid = Grid::new(1024, 28.0).unwrap();
    let ctx = PhysicalContext::natural();
    for _ in 0..25 {
        let m: f64 = rng.random_range(0.1..10.0);
        let v: f64 = rng.random_range(0.1..10.0);
        let a: f64 = rng.random_range(0.1..10.0);
        let field = ComplexField::gaussian(grid, 0.0, 0.4, 0.0);
        let state = MassChannelState::single(m, field, ctx).unwrap();
        let looped = bargmann_loop_on_state(&state, [v, 0.0, 0.0], [a, 0.0, 0.0]);
        let got = global_phase_between(&state.channels()[0].field, &looped.channels()[0].field)
            .unwrap();
        let want = wrap_angle(bargmann_loop_phase(m, [v, 0.0, 0.0], [a, 0.0, 0.0], &ctx).unwrap());
        assert!(
            wrap_angle(got.angle - want).abs() <= 1e-9,
            "m={m} v={v} a={a}: extracted {} want {want}",
            got.angle
        );
    }
}

#[test]
fn translation_acts_identically_on_all_masses() {
    let grid = Grid::new(256, 24.0).unwrap();
    let field = ComplexField::gaussian(grid, -0.7, 0.6, 0.9);
    let state = MassChannelState::new(
        vec![
            Channel {
                mass: 0.5,
                field: field.clone(),
            },
            Channel { mass: 8.0, field },
        ],
        PhysicalContext::natural(),
    )
    .unwrap();
    let moved = apply_translation(&state, [1.37, 0.0, 0.0]);
    let diff = moved.channels()[0]
        .field
        .max_abs_diff(&moved.channels()[1].field)
        .unwrap();
    assert!(diff <= 1e-13);
}
