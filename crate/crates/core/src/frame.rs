//! Unitary frame maps on wavefunctions: spatial translation, Galilean boost
//! with its projective phase, and the composed translation-boost loop on
//! multi-mass superposition states.
//!
//! Conventions (active maps; fixed once, reused by `groups`):
//! * translation by `a`: `psi_a(x + a) = psi(x)`, realized spectrally as
//!   multiplication of mode `k` by `exp(-i k a_x)`;
//! * boost by `v` at instant `t`: pointwise multiplication by
//!   `exp(i m (v^2 t/2 - v.x)/hbar)` followed by the relabel `x' = x - v t`
//!   (at `t = 0` the relabel is the identity and the map is the pure
//!   multiplication `exp(-i m v_x x / hbar)`);
//! * the loop composes translation and boost factors so that each mass-`m`
//!   channel returns to `exp(+i m v_x a_x / hbar)` times itself, matching the
//!   central shift produced by the matrix loop in [`crate::groups`].
//!
//! Fields are one-dimensional, so the field-level maps use the x-components
//! of `v` and `a`; the closed-form phases keep full 3-vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    from_spectrum, global_phase_between, to_spectrum, ComplexField, Grid, PhaseMatch,
};

/// 3-vectors for transform parameters.
pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

pub fn norm3(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// `hbar` and `c`, both strictly positive; defaults to natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    hbar: f64,
    c: f64,
}

impl PhysicalContext {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        if hbar <= 0.0 || !hbar.is_finite() {
            return Err(Error::InvalidContext(format!("hbar must be > 0, got {hbar}")));
        }
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidContext(format!("c must be > 0, got {c}")));
        }
        Ok(PhysicalContext { hbar, c })
    }

    pub fn natural() -> Self {
        PhysicalContext { hbar: 1.0, c: 1.0 }
    }

    pub fn with_c(c: f64) -> Result<Self> {
        Self::new(1.0, c)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for PhysicalContext {
    fn default() -> Self {
        Self::natural()
    }
}

/// Boost/translation parameters of a frame change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTransform {
    pub v: Vec3,
    pub a: Vec3,
}

impl FrameTransform {
    pub fn new(v: Vec3, a: Vec3) -> Result<Self> {
        if v.iter().chain(a.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("transform components must be finite".into()));
        }
        Ok(FrameTransform { v, a })
    }
}

/// One mass sector of a superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub mass: f64,
    pub field: ComplexField,
}

/// `psi = sum_i psi_{m_i}`: an ordered list of mass channels on one grid.
/// Channels of distinct mass are orthogonal sectors; norms add in quadrature
/// and relative phases between channels are bookkept per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct MassChannelState {
    channels: Vec<Channel>,
    context: PhysicalContext,
}

impl MassChannelState {
    pub fn new(channels: Vec<Channel>, context: PhysicalContext) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidState("state needs at least one channel".into()));
        }
        let grid = channels[0].field.grid();
        for ch in &channels {
            if ch.mass <= 0.0 || !ch.mass.is_finite() {
                return Err(Error::NonpositiveMass(ch.mass));
            }
            if ch.field.grid() != grid {
                return Err(Error::GridMismatch(ch.field.grid().n(), grid.n()));
            }
        }
        Ok(MassChannelState { channels, context })
    }

    pub fn single(mass: f64, field: ComplexField, context: PhysicalContext) -> Result<Self> {
        Self::new(vec![Channel { mass, field }], context)
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn context(&self) -> PhysicalContext {
        self.context
    }

    pub fn grid(&self) -> Grid {
        self.channels[0].field.grid()
    }

    /// Total squared norm: channels add as orthogonal sectors.
    pub fn total_norm_sq(&self) -> f64 {
        self.channels.iter().map(|c| c.field.norm_sq()).sum()
    }

    pub fn total_norm(&self) -> f64 {
        self.total_norm_sq().sqrt()
    }

    fn map_fields(&self, f: impl Fn(&Channel) -> ComplexField) -> MassChannelState {
        MassChannelState {
            channels: self
                .channels
                .iter()
                .map(|ch| Channel {
                    mass: ch.mass,
                    field: f(ch),
                })
                .collect(),
            context: self.context,
        }
    }
}

/// The boost phase of the wavefunction transformation law:
/// `m (v^2 t / 2 - v.x) / hbar`, not reduced mod 2*pi.
pub fn boost_phase(mass: f64, v: Vec3, x: Vec3, t: f64, ctx: &PhysicalContext) -> Result<f64> {
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::NonpositiveMass(mass));
    }
    Ok(mass * (dot(v, v) * t / 2.0 - dot(v, x)) / ctx.hbar())
}

/// Closed-form loop phase `m (v.a) / hbar` predicted for
/// [`bargmann_loop_on_state`].
pub fn bargmann_loop_phase(mass: f64, v: Vec3, a: Vec3, ctx: &PhysicalContext) -> Result<f64> {
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::NonpositiveMass(mass));
    }
    Ok(mass * dot(v, a) / ctx.hbar())
}

fn translate_field(field: &ComplexField, a_x: f64) -> ComplexField {
    if a_x == 0.0 {
        return field.clone();
    }
    let grid = field.grid();
    let shifted = to_spectrum(field).map(|j, c| c * Complex64::cis(-grid.wavenumber(j) * a_x));
    from_spectrum(&shifted)
}

/// Boost every channel by `v` at instant `t`: pointwise phase multiplication
/// followed (for `t != 0`) by the spectral relabel to `x' = x - v t`. Norms
/// are preserved per channel.
pub fn apply_boost(state: &MassChannelState, v: Vec3, t: f64) -> MassChannelState {
    let hbar = state.context.hbar();
    let v_sq = dot(v, v);
    state.map_fields(|ch| {
        let m = ch.mass;
        let grid = ch.field.grid();
        let phased = ch.field.map(|j, val| {
            let x = grid.position(j);
            val * Complex64::cis(m * (v_sq * t / 2.0 - v[0] * x) / hbar)
        });
        if t == 0.0 {
            phased
        } else {
            translate_field(&phased, -v[0] * t)
        }
    })
}

/// Translate every channel by `a` (mass-independent, exact for band-limited
/// fields): `psi_a(x + a_x) = psi(x)`.
pub fn apply_translation(state: &MassChannelState, a: Vec3) -> MassChannelState {
    state.map_fields(|ch| translate_field(&ch.field, a[0]))
}

/// The composed translation-boost loop at `t = 0`. The four factors are
/// applied innermost-first in the order that realizes the matrix identity of
/// [`crate::groups::bargmann_group_loop`]; each channel of mass `m` comes
/// back as `exp(+i m v_x a_x / hbar)` times itself, so a two-mass state picks
/// up the relative phase `(m2 - m1) v_x a_x / hbar` between its channels.
pub fn bargmann_loop_on_state(state: &MassChannelState, v: Vec3, a: Vec3) -> MassChannelState {
    let s1 = apply_translation(state, neg(a));
    let s2 = apply_boost(&s1, v, 0.0);
    let s3 = apply_translation(&s2, a);
    apply_boost(&s3, neg(v), 0.0)
}

/// Global phase between two multi-channel states, treating the channel list
/// as one stacked vector (distinct-mass sectors stay orthogonal, so a true
/// global-phase multiple needs every channel rotated by the same angle).
pub fn global_phase_between_states(
    f: &MassChannelState,
    g: &MassChannelState,
) -> Result<PhaseMatch> {
    if f.channels.len() != g.channels.len() {
        return Err(Error::InvalidState(format!(
            "channel counts differ: {} vs {}",
            f.channels.len(),
            g.channels.len()
        )));
    }
    let nf = f.total_norm();
    let ng = g.total_norm();
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut ip = Complex64::new(0.0, 0.0);
    for (cf, cg) in f.channels.iter().zip(&g.channels) {
        ip += cf.field.inner(&cg.field)?;
    }
    let angle = ip.im.atan2(ip.re);
    let rot = Complex64::cis(angle) * (ng / nf);
    let mut dev = 0.0;
    for (cf, cg) in f.channels.iter().zip(&g.channels) {
        dev += cf
            .field
            .values()
            .iter()
            .zip(cg.field.values())
            .map(|(a, b)| (b - rot * a).norm_sqr())
            .sum::<f64>()
            * cf.field.grid().spacing();
    }
    Ok(PhaseMatch {
        angle,
        residual: dev.sqrt() / ng,
    })
}

/// Per-channel phases acquired between `before` and `after`, plus residuals.
pub fn channel_phases(
    before: &MassChannelState,
    after: &MassChannelState,
) -> Result<Vec<PhaseMatch>> {
    if before.channels.len() != after.channels.len() {
        return Err(Error::InvalidState(format!(
            "channel counts differ: {} vs {}",
            before.channels.len(),
            after.channels.len()
        )));
    }
    before
        .channels
        .iter()
        .zip(&after.channels)
        .map(|(b, a)| global_phase_between(&b.field, &a.field))
        .collect()
}
