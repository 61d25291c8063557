//! Cross-module consistency: the wavepacket loop, the closed-form prediction,
//! and the matrix-group central shift must all carry the same phase with the
//! same sign.

use bargmann_core::frame::{
    bargmann_loop_on_state, bargmann_loop_phase, MassChannelState, PhysicalContext,
};
use bargmann_core::grid::{global_phase_between, ComplexField, Grid};
use bargmann_core::groups::{bargmann_group_loop, central_part, SpaceDim};
use bargmann_core::report::wrap_angle;
use rand::{Rng, SeedableRng};

#[test]
fn matrix_central_shift_reproduces_field_loop_phase() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let grid = Grid::new(1024, 28.0).unwrap();
    let ctx = PhysicalContext::natural();
    for trial in 0..20 {
        let m: f64 = rng.random_range(0.1..10.0);
        let v: f64 = rng.random_range(0.1..10.0);
        let a: f64 = rng.random_range(0.1..10.0);
        let vv = [v, 0.0, 0.0];
        let aa = [a, 0.0, 0.0];

        let looped = bargmann_group_loop(vv, aa, SpaceDim::One).unwrap();
        let (shift, deviation) = central_part(&looped).unwrap();
        assert!(deviation <= 1e-13, "trial {trial}: loop not central");

        // Matrix route vs closed form: identical floating-point value.
        let analytic = bargmann_loop_phase(m, vv, aa, &ctx).unwrap();
        assert!(
            (shift * m / ctx.hbar() - analytic).abs() <= 1e-12,
            "trial {trial}: s-shift phase {} vs analytic {analytic}",
            shift * m / ctx.hbar()
        );

        // Field route: extracted global phase agrees modulo 2 pi, including
        // the sign.
        let state =
            MassChannelState::single(m, ComplexField::gaussian(grid, 0.0, 0.4, 0.0), ctx).unwrap();
        let after = bargmann_loop_on_state(&state, vv, aa);
        let got = global_phase_between(&state.channels()[0].field, &after.channels()[0].field)
            .unwrap();
        assert!(got.residual <= 1e-9, "trial {trial}: residual {}", got.residual);
        assert!(
            wrap_angle(got.angle - shift * m / ctx.hbar()).abs() <= 1e-9,
            "trial {trial}: m={m} v={v} a={a} field {} matrix {}",
            got.angle,
            wrap_angle(shift * m / ctx.hbar())
        );
    }
}

#[test]
fn signs_cohere_for_small_parameters() {
    // With v a > 0 small enough to avoid wrapping, the extracted field phase,
    // the closed form, and the matrix shift are all strictly positive.
    let grid = Grid::new(512, 28.0).unwrap();
    let ctx = PhysicalContext::natural();
    let (m, v, a) = (1.0, 0.7, 0.9);
    let state =
        MassChannelState::single(m, ComplexField::gaussian(grid, 0.0, 0.5, 0.0), ctx).unwrap();
    let looped = bargmann_loop_on_state(&state, [v, 0.0, 0.0], [a, 0.0, 0.0]);
    let field_phase = global_phase_between(&state.channels()[0].field, &looped.channels()[0].field)
        .unwrap()
        .angle;
    let matrix_shift = central_part(
        &bargmann_group_loop([v, 0.0, 0.0], [a, 0.0, 0.0], SpaceDim::One).unwrap(),
    )
    .unwrap()
    .0;
    assert!(field_phase > 0.0);
    assert!(matrix_shift > 0.0);
    assert!((field_phase - v * a).abs() <= 1e-10);
    assert!((matrix_shift - v * a).abs() <= 1e-14);
}
