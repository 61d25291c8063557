//! Closed-form ring-interferometer comparators: the relativistic arrival-time
//! and phase differences of counter-propagating signals on a rotating disk,
//! their non-relativistic limit, the Einstein-Planck frequency conversion,
//! and the projective-representation phase difference, with consistency
//! checks among them.
//!
//! Everything here is evaluated in closed form; the wavepacket machinery of
//! [`crate::frame`] independently validates the boost phases these formulas
//! are built from.

use crate::error::{Error, Result};
use crate::frame::PhysicalContext;
use crate::report::{log_log_slope, SlopeFit};

/// Rotating-disk configuration: radius, angular velocity, signal mass, and
/// the signal speed relative to the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig {
    pub radius: f64,
    pub omega: f64,
    pub mass: f64,
    pub v_signal: f64,
    pub ctx: PhysicalContext,
}

impl RingConfig {
    pub fn new(radius: f64, omega: f64, mass: f64, v_signal: f64, ctx: PhysicalContext) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidRing(format!("radius must be > 0, got {radius}")));
        }
        if omega < 0.0 || !omega.is_finite() {
            return Err(Error::InvalidRing(format!("Omega must be >= 0, got {omega}")));
        }
        if omega * radius >= ctx.c() {
            return Err(Error::InvalidRing(format!(
                "Omega*R must be < c (rim speed {} >= c = {})",
                omega * radius,
                ctx.c()
            )));
        }
        if mass <= 0.0 || !mass.is_finite() {
            return Err(Error::NonpositiveMass(mass));
        }
        if v_signal < 0.0 || !v_signal.is_finite() {
            return Err(Error::InvalidRing(format!(
                "signal speed must be >= 0, got {v_signal}"
            )));
        }
        Ok(RingConfig {
            radius,
            omega,
            mass,
            v_signal,
            ctx,
        })
    }
}

/// Arrival-time difference seen by the comoving observer,
/// `4 pi R^2 Omega gamma / c^2` with `gamma = 1/sqrt(1 - Omega^2 R^2/c^2)`,
/// written as `4 pi R^2 Omega / (c sqrt(c^2 - Omega^2 R^2))`. Defined for
/// signed `Omega` (counter-rotation flips the sign).
pub fn ring_time_delay(radius: f64, omega: f64, c: f64) -> Result<f64> {
    let rim = (omega * radius).abs();
    if rim >= c {
        return Err(Error::InvalidRing(format!(
            "Omega*R must be < c (rim speed {rim} >= c = {c})"
        )));
    }
    Ok(4.0 * std::f64::consts::PI * radius * radius * omega / (c * (c * c - omega * omega * radius * radius).sqrt()))
}

/// Non-relativistic phase difference `4 pi R^2 m Omega / hbar`.
pub fn nonrel_phase(radius: f64, omega: f64, mass: f64, hbar: f64) -> f64 {
    4.0 * std::f64::consts::PI * radius * radius * mass * omega / hbar
}

/// Projective-representation phase difference between the counter-propagating
/// signals, `m (v + Omega R)^2 t / 2 hbar - m (v - Omega R)^2 t / 2 hbar`
/// (kept unsimplified; it equals `2 m v Omega R t / hbar` algebraically).
pub fn projective_phase(radius: f64, omega: f64, mass: f64, v: f64, t: f64, hbar: f64) -> f64 {
    let co = v + omega * radius;
    let counter = v - omega * radius;
    mass * co * co * t / (2.0 * hbar) - mass * counter * counter * t / (2.0 * hbar)
}

/// `Delta t` for a validated configuration; zero at `Omega = 0` and strictly
/// increasing in `Omega` on `[0, c/R)`.
pub fn sagnac_dt(cfg: &RingConfig) -> Result<f64> {
    ring_time_delay(cfg.radius, cfg.omega, cfg.ctx.c())
}

/// Phase difference for a signal of angular frequency `omega_signal`:
/// identically `omega_signal * sagnac_dt(cfg)`.
pub fn sagnac_phase_rel(cfg: &RingConfig, omega_signal: f64) -> Result<f64> {
    if omega_signal <= 0.0 || !omega_signal.is_finite() {
        return Err(Error::InvalidRing(format!(
            "signal frequency must be > 0, got {omega_signal}"
        )));
    }
    Ok(omega_signal * sagnac_dt(cfg)?)
}

/// Einstein-Planck conversion `hbar omega = m c^2 / sqrt(1 - v^2/c^2)`;
/// the rest frequency `m c^2 / hbar` at `v = 0`.
pub fn einstein_planck_omega(mass: f64, v_signal: f64, ctx: &PhysicalContext) -> Result<f64> {
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::NonpositiveMass(mass));
    }
    let c = ctx.c();
    if v_signal.abs() >= c {
        return Err(Error::SpeedLimit { v: v_signal.abs(), c });
    }
    let beta_sq = (v_signal / c) * (v_signal / c);
    Ok(mass * c * c / (ctx.hbar() * (1.0 - beta_sq).sqrt()))
}

/// `Delta phi_N = 4 pi R^2 m Omega / hbar`, the `c -> infinity` limit of
/// [`sagnac_phase_rel`] at the Einstein-Planck frequency.
pub fn sagnac_phase_nonrel(cfg: &RingConfig) -> f64 {
    nonrel_phase(cfg.radius, cfg.omega, cfg.mass, cfg.ctx.hbar())
}

/// Projective phase difference with flight time `t_flight` (default
/// `pi / Omega`, the half-turn time, which needs `Omega > 0`).
pub fn sagnac_phase_projective(cfg: &RingConfig, t_flight: Option<f64>) -> Result<f64> {
    let t = match t_flight {
        Some(t) => t,
        None => {
            if cfg.omega == 0.0 {
                return Err(Error::InvalidRing(
                    "default flight time t = pi/Omega is undefined at Omega = 0".into(),
                ));
            }
            std::f64::consts::PI / cfg.omega
        }
    };
    Ok(projective_phase(
        cfg.radius, cfg.omega, cfg.mass, cfg.v_signal, t, cfg.ctx.hbar(),
    ))
}

/// Aggregate comparison of all ring-phase quantities for one configuration,
/// plus the non-relativistic-limit slope over a `c` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SagnacReport {
    pub dt: f64,
    /// Einstein-Planck frequency of the signal at the configured speed.
    pub omega_ep: f64,
    pub phase_rel: f64,
    pub phase_nonrel: f64,
    pub phase_projective: f64,
    pub diff_rel_nonrel: f64,
    pub diff_projective_nonrel: f64,
    /// Whether the projective phase reproduces the non-relativistic one for
    /// the configured signal speed (it does exactly when `v = 2 Omega R`).
    pub projective_matches_nonrel: bool,
    /// Rows of the sweep: `(c, phase_rel(c), |phase_rel(c) - phase_nonrel|)`.
    pub sweep: Vec<(f64, f64, f64)>,
    /// Fit of `|phase_rel(c) - phase_nonrel|` vs `c`; expected slope -2.
    pub limit_slope: Option<SlopeFit>,
}

pub fn sagnac_report(cfg: &RingConfig, c_sweep: &[f64]) -> Result<SagnacReport> {
    let dt = sagnac_dt(cfg)?;
    let omega_ep = einstein_planck_omega(cfg.mass, cfg.v_signal, &cfg.ctx)?;
    let phase_rel = omega_ep * dt;
    let phase_nonrel = sagnac_phase_nonrel(cfg);
    let phase_projective = if cfg.omega == 0.0 {
        0.0
    } else {
        sagnac_phase_projective(cfg, None)?
    };
    let scale = phase_nonrel.abs().max(1.0);
    let mut sweep = Vec::with_capacity(c_sweep.len());
    for &c in c_sweep {
        let ctx = PhysicalContext::new(cfg.ctx.hbar(), c)?;
        let swept = RingConfig::new(cfg.radius, cfg.omega, cfg.mass, cfg.v_signal, ctx)?;
        let w = einstein_planck_omega(swept.mass, swept.v_signal, &ctx)?;
        let phi = w * sagnac_dt(&swept)?;
        sweep.push((c, phi, (phi - phase_nonrel).abs()));
    }
    sweep.sort_by(|a, b| a.0.total_cmp(&b.0));
    let cs: Vec<f64> = sweep.iter().map(|r| r.0).collect();
    let diffs: Vec<f64> = sweep.iter().map(|r| r.2).collect();
    let limit_slope = log_log_slope(&cs, &diffs).ok();
    Ok(SagnacReport {
        dt,
        omega_ep,
        phase_rel,
        phase_nonrel,
        phase_projective,
        diff_rel_nonrel: (phase_rel - phase_nonrel).abs(),
        diff_projective_nonrel: (phase_projective - phase_nonrel).abs(),
        projective_matches_nonrel: (phase_projective - phase_nonrel).abs() <= 1e-12 * scale,
        sweep,
        limit_slope,
    })
}
