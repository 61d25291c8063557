//! Browser bindings for the interactive demo page: the translate-boost loop
//! on a two-mass packet, ring-interferometer phase curves, and the
//! Klein-Gordon reduction sweep. Every export returns a JSON string so the
//! page needs no framework, just `fetch`-style parsing and a canvas.

use bargmann_core::evolution::{
    factor_rest_phase, kg_evolve_by, schrodinger_evolve, EvolutionParams, KGState, Potential,
};
use bargmann_core::frame::{
    bargmann_loop_on_state, channel_phases, global_phase_between_states, Channel,
    MassChannelState, PhysicalContext,
};
use bargmann_core::grid::{ComplexField, Grid};
use bargmann_core::report::{log_log_slope, wrap_angle};
use bargmann_core::sagnac::{
    einstein_planck_omega, nonrel_phase, projective_phase, ring_time_delay,
};
use wasm_bindgen::prelude::wasm_bindgen;

fn json_numbers(values: impl Iterator<Item = f64>) -> String {
    let parts: Vec<String> = values.map(|v| format!("{v:.6e}")).collect();
    format!("[{}]", parts.join(","))
}

fn json_error(message: &str) -> String {
    format!("{{\"error\": \"{}\"}}", message.replace('"', "'"))
}

/// Run the translation-boost loop on a two-mass Gaussian packet and report
/// the per-channel phases, the predicted values, the channel-relative phase,
/// and the packet curves (|psi| plus the real part of each channel before and
/// after the loop).
#[wasm_bindgen]
pub fn loop_scan(m1: f64, m2: f64, v: f64, a: f64, n: usize, length: f64) -> String {
    let grid = match Grid::new(n, length) {
        Ok(g) => g,
        Err(e) => return json_error(&e.to_string()),
    };
    let ctx = PhysicalContext::natural();
    let sigma = length / 70.0;
    let field = ComplexField::gaussian(grid, 0.0, sigma, 0.0);
    let state = match MassChannelState::new(
        vec![
            Channel { mass: m1, field: field.clone() },
            Channel { mass: m2, field },
        ],
        ctx,
    ) {
        Ok(s) => s,
        Err(e) => return json_error(&e.to_string()),
    };
    let looped = bargmann_loop_on_state(&state, [v, 0.0, 0.0], [a, 0.0, 0.0]);
    let phases = match channel_phases(&state, &looped) {
        Ok(p) => p,
        Err(e) => return json_error(&e.to_string()),
    };
    let witness = match global_phase_between_states(&state, &looped) {
        Ok(w) => w,
        Err(e) => return json_error(&e.to_string()),
    };

    let analytic1 = wrap_angle(m1 * v * a);
    let analytic2 = wrap_angle(m2 * v * a);
    let relative = wrap_angle(phases[1].angle - phases[0].angle);
    format!(
        concat!(
            "{{\"x\": {},\n\"abs\": {},\n\"re_before\": {},\n",
            "\"re_after_1\": {},\n\"re_after_2\": {},\n",
            "\"phase_1\": {:.15e}, \"phase_2\": {:.15e},\n",
            "\"analytic_1\": {:.15e}, \"analytic_2\": {:.15e},\n",
            "\"relative_phase\": {:.15e}, \"relative_predicted\": {:.15e},\n",
            "\"residual_1\": {:.3e}, \"residual_2\": {:.3e}, \"witness_residual\": {:.6e}}}\n"
        ),
        json_numbers(grid.positions()),
        json_numbers(state.channels()[0].field.values().iter().map(|z| z.norm())),
        json_numbers(state.channels()[0].field.values().iter().map(|z| z.re)),
        json_numbers(looped.channels()[0].field.values().iter().map(|z| z.re)),
        json_numbers(looped.channels()[1].field.values().iter().map(|z| z.re)),
        phases[0].angle,
        phases[1].angle,
        analytic1,
        analytic2,
        relative,
        wrap_angle((m2 - m1) * v * a),
        phases[0].residual,
        phases[1].residual,
        witness.residual,
    )
}

/// Ring-interferometer phase curves over signed angular velocity: the
/// non-relativistic phase, the projective-representation phase (flight time
/// pi/|Omega|), and the relativistic phase at the Einstein-Planck frequency.
#[wasm_bindgen]
pub fn sagnac_curves(
    radius: f64,
    mass: f64,
    v_signal: f64,
    omega_max: f64,
    points: usize,
    c: f64,
) -> String {
    if radius <= 0.0 || !radius.is_finite() || omega_max <= 0.0 || !omega_max.is_finite() || points < 2 {
        return json_error("need radius > 0, omega_max > 0, points >= 2");
    }
    if omega_max * radius >= c || v_signal >= c {
        return json_error("need |Omega| R < c and v_signal < c");
    }
    let ctx = match PhysicalContext::with_c(c) {
        Ok(ctx) => ctx,
        Err(e) => return json_error(&e.to_string()),
    };
    let omega_ep = match einstein_planck_omega(mass, v_signal, &ctx) {
        Ok(w) => w,
        Err(e) => return json_error(&e.to_string()),
    };
    let mut omegas = Vec::with_capacity(points);
    let mut phi_n = Vec::with_capacity(points);
    let mut phi_nqm = Vec::with_capacity(points);
    let mut phi_rel = Vec::with_capacity(points);
    for k in 0..points {
        let omega = -omega_max + 2.0 * omega_max * k as f64 / (points - 1) as f64;
        let t_flight = if omega == 0.0 { 0.0 } else { std::f64::consts::PI / omega.abs() };
        omegas.push(omega);
        phi_n.push(nonrel_phase(radius, omega, mass, 1.0));
        phi_nqm.push(if omega == 0.0 {
            0.0
        } else {
            projective_phase(radius, omega, mass, v_signal, t_flight, 1.0)
        });
        phi_rel.push(match ring_time_delay(radius, omega, c) {
            Ok(dt) => omega_ep * dt,
            Err(e) => return json_error(&e.to_string()),
        });
    }
    format!(
        "{{\"omega\": {},\n\"phase_nonrel\": {},\n\"phase_projective\": {},\n\"phase_rel\": {},\n\"omega_ep\": {omega_ep:.6e}}}\n",
        json_numbers(omegas.into_iter()),
        json_numbers(phi_n.into_iter()),
        json_numbers(phi_nqm.into_iter()),
        json_numbers(phi_rel.into_iter()),
    )
}

/// Klein-Gordon reduction sweep: for each c in a doubling ladder, the L2
/// difference between the rest-phase-factored relativistic envelope and the
/// non-relativistic evolution of the same packet, plus the fitted slope.
#[wasm_bindgen]
pub fn kg_reduction_sweep(mass: f64, t_final: f64, c_start: f64, count: usize) -> String {
    if !(mass > 0.0 && mass.is_finite()) || !(t_final > 0.0 && t_final.is_finite()) || !(c_start > 1.0 && c_start.is_finite()) || !(2..=12).contains(&count) {
        return json_error("need mass > 0, t_final > 0, c_start > 1, 2 <= count <= 12");
    }
    let grid = Grid::new(256, 40.0).unwrap();
    let envelope = ComplexField::gaussian(grid, 0.0, 1.0, 1.0);
    let nr = match MassChannelState::single(mass, envelope.clone(), PhysicalContext::natural()) {
        Ok(s) => s,
        Err(e) => return json_error(&e.to_string()),
    };
    let steps = ((t_final / 1e-2).ceil() as usize).max(1);
    let params = match EvolutionParams::new(t_final / steps as f64, steps) {
        Ok(p) => p,
        Err(e) => return json_error(&e.to_string()),
    };
    let psi_schr = match schrodinger_evolve(&nr, &Potential::Free, &params) {
        Ok(s) => s,
        Err(e) => return json_error(&e.to_string()),
    };
    let psi_schr = &psi_schr.channels()[0].field;

    let cs: Vec<f64> = (0..count).map(|k| c_start * 2.0_f64.powi(k as i32)).collect();
    let mut diffs = Vec::with_capacity(cs.len());
    for &c in &cs {
        let ctx = match PhysicalContext::with_c(c) {
            Ok(ctx) => ctx,
            Err(e) => return json_error(&e.to_string()),
        };
        let kg = match KGState::positive_frequency(&envelope, mass, ctx) {
            Ok(s) => s,
            Err(e) => return json_error(&e.to_string()),
        };
        let psi_kg = factor_rest_phase(&kg_evolve_by(&kg, t_final), t_final);
        match psi_kg.diff_norm(psi_schr) {
            Ok(d) => diffs.push(d),
            Err(e) => return json_error(&e.to_string()),
        }
    }
    let slope = log_log_slope(&cs, &diffs).map(|f| f.slope).unwrap_or(f64::NAN);
    format!(
        "{{\"c\": {},\n\"difference\": {},\n\"slope\": {slope:.6}}}\n",
        json_numbers(cs.into_iter()),
        json_numbers(diffs.into_iter()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_scan_reports_phases() {
        let out = loop_scan(1.0, 2.0, 1.0, 1.0, 256, 28.0);
        assert!(out.contains("\"relative_phase\""), "{out}");
        assert!(!out.contains("error"), "{out}");
        // phase_1 should be ~1 rad for m=1, v=a=1.
        let phase: f64 = out
            .split("\"phase_1\": ")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!((phase - 1.0).abs() < 1e-9, "phase_1 = {phase}");
    }

    #[test]
    fn loop_scan_rejects_bad_grid() {
        assert!(loop_scan(1.0, 2.0, 1.0, 1.0, 100, 28.0).contains("error"));
        assert!(loop_scan(-1.0, 2.0, 1.0, 1.0, 256, 28.0).contains("error"));
    }

    #[test]
    fn sagnac_curves_are_odd_and_bounded() {
        let out = sagnac_curves(1.0, 1.0, 1.0, 0.8, 21, 10.0);
        assert!(!out.contains("error"), "{out}");
        assert!(out.contains("phase_projective"));
        assert!(sagnac_curves(1.0, 1.0, 1.0, 20.0, 21, 10.0).contains("error"));
    }

    #[test]
    fn kg_sweep_reports_negative_two_slope() {
        let out = kg_reduction_sweep(1.0, 1.0, 8.0, 5);
        assert!(!out.contains("error"), "{out}");
        let slope: f64 = out
            .split("\"slope\": ")
            .nth(1)
            .unwrap()
            .trim_end_matches(['}', '\n'])
            .parse()
            .unwrap();
        assert!((slope + 2.0).abs() < 0.1, "slope = {slope}");
    }
}
