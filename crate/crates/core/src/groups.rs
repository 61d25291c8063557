//! Faithful affine matrix representations of the extended Galilei (Bargmann)
//! algebra and the Poincare algebra: generators, closed-form exponentials,
//! commutators, the translation-boost group loops, and the 1/c^2 contraction
//! connecting them.
//!
//! Generator basis (the single source of truth; everything else is derived):
//!
//! Extended Galilei, acting on homogeneous extended events `(t, x_i, s, 1)`
//! (4x4 in 1-D, 6x6 in 3-D):
//!
//! ```text
//! H:  t-row, homogeneous column = 1          exp(H,tau):   t -> t + tau
//! P_i: x_i-row, homogeneous column = 1       exp(P_i,a):   x_i -> x_i + a
//! C_i: x_i-row, t column = 1                 exp(C_i,w):   x_i -> x_i + w t
//!      s-row, x_i column = 1                               s  -> s + w x_i + w^2 t / 2
//! M:  s-row, homogeneous column = 1          exp(M,sig):   s -> s + sig
//! ```
//!
//! Poincare, acting on `(ct, x_i, 1)` (3x3 in 1+1-D, 5x5 in 3+1-D), with the
//! boost generator velocity-normalized:
//!
//! ```text
//! H:  ct-row, homogeneous column = c         exp(H,tau):   t -> t + tau
//! P_i: x_i-row, homogeneous column = 1
//! K_i: ct-row x_i column = 1/c, x_i-row ct column = 1/c
//! ```
//!
//! Nonzero commutators in this basis: `[C_i, P_j] = M delta_ij`,
//! `[C_i, H] = P_i`, `[K_i, P_j] = H delta_ij / c^2`, `[K_i, H] = P_i`.
//!
//! Sign dictionary: the physical boost by velocity `w` (event action
//! `x' = x - w t`, wavefunction phase `exp(i m (w^2 t/2 - w.x)/hbar)`) is
//! `exp(C, -w)` here, and [`lorentz_boost`] is likewise `exp(K, -c*atanh(w/c))`.
//! Both group loops below are the product
//! `exp(X, v) * exp(P, a) * exp(X, -v) * exp(P, -a)` (rightmost factor acts
//! first), which shifts `s` by exactly `+v.a` in the Bargmann case and the
//! event coordinates by `(+v.a/c^2, +(v.a) v/2c^2)` to leading order in the
//! Poincare case, with the same sign as the field-level loop phase
//! `+m v.a/hbar` of [`crate::frame::bargmann_loop_on_state`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frame::{dot, neg, norm3, Vec3};
use crate::report::{log_log_slope, SlopeFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceDim {
    One,
    Three,
}

impl SpaceDim {
    fn axes(&self) -> &'static [Axis] {
        match self {
            SpaceDim::One => &[Axis::X],
            SpaceDim::Three => &[Axis::X, Axis::Y, Axis::Z],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(&self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Representation tag. Poincare representations carry their `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rep {
    ExtendedGalilei(SpaceDim),
    Poincare(SpaceDim, f64),
}

impl Rep {
    pub fn size(&self) -> usize {
        match self {
            Rep::ExtendedGalilei(SpaceDim::One) => 4,
            Rep::ExtendedGalilei(SpaceDim::Three) => 6,
            Rep::Poincare(SpaceDim::One, _) => 3,
            Rep::Poincare(SpaceDim::Three, _) => 5,
        }
    }

    pub fn dim(&self) -> SpaceDim {
        match self {
            Rep::ExtendedGalilei(d) | Rep::Poincare(d, _) => *d,
        }
    }

    fn time_row(&self) -> usize {
        0
    }

    fn space_row(&self, axis: Axis) -> usize {
        1 + axis.index()
    }

    fn s_row(&self) -> Option<usize> {
        match self {
            Rep::ExtendedGalilei(d) => Some(1 + d.axes().len()),
            Rep::Poincare(..) => None,
        }
    }

    fn homog(&self) -> usize {
        self.size() - 1
    }

    fn light_speed(&self) -> Option<f64> {
        match self {
            Rep::Poincare(_, c) => Some(*c),
            Rep::ExtendedGalilei(_) => None,
        }
    }

    fn name(&self) -> String {
        match self {
            Rep::ExtendedGalilei(SpaceDim::One) => "extended-galilei-1d".into(),
            Rep::ExtendedGalilei(SpaceDim::Three) => "extended-galilei-3d".into(),
            Rep::Poincare(SpaceDim::One, c) => format!("poincare-1d(c={c})"),
            Rep::Poincare(SpaceDim::Three, c) => format!("poincare-3d(c={c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    H,
    P(Axis),
    C(Axis),
    K(Axis),
    M,
}

impl Label {
    fn name(&self) -> String {
        match self {
            Label::H => "H".into(),
            Label::P(a) => format!("P_{:?}", a),
            Label::C(a) => format!("C_{:?}", a),
            Label::K(a) => format!("K_{:?}", a),
            Label::M => "M".into(),
        }
    }
}

/// A basis element of the algebra in its matrix representation.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    rep: Rep,
    label: Label,
    matrix: DMatrix<f64>,
}

impl AlgebraElement {
    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// A finite group element: an invertible affine matrix plus the ordered list
/// of generator factors it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    rep: Rep,
    matrix: DMatrix<f64>,
    provenance: Vec<(Label, f64)>,
}

impl GroupElement {
    pub fn identity(rep: Rep) -> Self {
        GroupElement {
            rep,
            matrix: DMatrix::identity(rep.size(), rep.size()),
            provenance: Vec::new(),
        }
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn provenance(&self) -> &[(Label, f64)] {
        &self.provenance
    }

    /// `self * other` (so `other` acts first on events).
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.rep != other.rep {
            return Err(Error::RepMismatch(self.rep.name(), other.rep.name()));
        }
        let mut provenance = other.provenance.clone();
        provenance.extend(self.provenance.iter().cloned());
        Ok(GroupElement {
            rep: self.rep,
            matrix: &self.matrix * &other.matrix,
            provenance,
        })
    }

    /// Largest absolute deviation from the identity matrix.
    pub fn identity_deviation(&self) -> f64 {
        let n = self.rep.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.matrix[(i, j)] - target).abs());
            }
        }
        worst
    }
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// The fixed basis matrix for `label` in `rep`.
pub fn generator(rep: Rep, label: Label) -> Result<AlgebraElement> {
    let n = rep.size();
    let mut m = DMatrix::zeros(n, n);
    let unknown = || Error::UnknownGenerator {
        label: label.name(),
        rep: rep.name(),
    };
    let axis_ok = |a: Axis| rep.dim().axes().contains(&a);
    match (rep, label) {
        (Rep::ExtendedGalilei(_), Label::H) => {
            m[(rep.time_row(), rep.homog())] = 1.0;
        }
        (Rep::ExtendedGalilei(_), Label::P(a)) if axis_ok(a) => {
            m[(rep.space_row(a), rep.homog())] = 1.0;
        }
        (Rep::ExtendedGalilei(_), Label::C(a)) if axis_ok(a) => {
            m[(rep.space_row(a), rep.time_row())] = 1.0;
            m[(rep.s_row().unwrap(), rep.space_row(a))] = 1.0;
        }
        (Rep::ExtendedGalilei(_), Label::M) => {
            m[(rep.s_row().unwrap(), rep.homog())] = 1.0;
        }
        (Rep::Poincare(_, c), Label::H) => {
            m[(rep.time_row(), rep.homog())] = c;
        }
        (Rep::Poincare(_, _), Label::P(a)) if axis_ok(a) => {
            m[(rep.space_row(a), rep.homog())] = 1.0;
        }
        (Rep::Poincare(_, c), Label::K(a)) if axis_ok(a) => {
            m[(rep.time_row(), rep.space_row(a))] = 1.0 / c;
            m[(rep.space_row(a), rep.time_row())] = 1.0 / c;
        }
        _ => return Err(unknown()),
    }
    Ok(AlgebraElement {
        rep,
        label,
        matrix: m,
    })
}

/// `[a, b] = a b - b a`; both elements must live in the same representation.
pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> Result<DMatrix<f64>> {
    if a.rep != b.rep {
        return Err(Error::RepMismatch(a.rep.name(), b.rep.name()));
    }
    Ok(&a.matrix * &b.matrix - &b.matrix * &a.matrix)
}

/// Truncating polynomial exponential for nilpotent matrices.
fn exp_nilpotent(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut acc = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=n {
        term = (&term * m) / k as f64;
        if max_abs(&term) == 0.0 {
            break;
        }
        acc += &term;
    }
    debug_assert!(max_abs(&(&term * m)) == 0.0, "matrix not nilpotent");
    acc
}

/// Closed-form one-parameter exponential `exp(theta * g)`.
///
/// Galilean generators and the Poincare `H`/`P` are nilpotent, so the series
/// terminates exactly. For `K` the parameter `theta` adds like `c * rapidity`
/// (`exp(K, theta)` is the boost with velocity `c * tanh(theta/c)`), which
/// keeps `exp(g, t1) * exp(g, t2) = exp(g, t1 + t2)` exact for every label.
pub fn exponentiate(g: &AlgebraElement, theta: f64) -> GroupElement {
    let matrix = match g.label {
        Label::K(_) => {
            let c = g.rep.light_speed().expect("K only exists in Poincare reps");
            let pattern = &g.matrix * c; // unit hyperbolic pattern
            let phi = theta / c;
            let n = g.rep.size();
            DMatrix::identity(n, n) + &pattern * phi.sinh() + &pattern * &pattern * (phi.cosh() - 1.0)
        }
        _ => exp_nilpotent(&(&g.matrix * theta)),
    };
    GroupElement {
        rep: g.rep,
        matrix,
        provenance: vec![(g.label, theta)],
    }
}

// Components transverse to a 1-D representation are simply not represented;
// callers that care pass x-only vectors or pick the 3-D representation.
fn sum_over_axes(rep: Rep, params: Vec3, make: impl Fn(Axis) -> Label) -> Result<DMatrix<f64>> {
    let n = rep.size();
    let mut m = DMatrix::zeros(n, n);
    for axis in rep.dim().axes() {
        let p = params[axis.index()];
        if p != 0.0 {
            m += generator(rep, make(*axis))?.matrix() * p;
        }
    }
    Ok(m)
}

fn provenance_over_axes(rep: Rep, params: Vec3, make: impl Fn(Axis) -> Label) -> Vec<(Label, f64)> {
    rep.dim()
        .axes()
        .iter()
        .filter(|a| params[a.index()] != 0.0)
        .map(|a| (make(*a), params[a.index()]))
        .collect()
}

/// `exp(sum_i a_i P_i)`: spatial translation by the in-representation part
/// of `a`.
pub fn translation_element(rep: Rep, a: Vec3) -> Result<GroupElement> {
    Ok(GroupElement {
        rep,
        matrix: exp_nilpotent(&sum_over_axes(rep, a, Label::P)?),
        provenance: provenance_over_axes(rep, a, Label::P),
    })
}

/// `exp(sum_i v_i C_i)` in an extended-Galilei representation. The event
/// action is `x -> x + v t`, `s -> s + v.x + v^2 t / 2`; the physical boost
/// by `w` in the wavefunction convention is this element at `v = -w`.
pub fn galilean_boost_element(dim: SpaceDim, v: Vec3) -> Result<GroupElement> {
    let rep = Rep::ExtendedGalilei(dim);
    Ok(GroupElement {
        rep,
        matrix: exp_nilpotent(&sum_over_axes(rep, v, Label::C)?),
        provenance: provenance_over_axes(rep, v, Label::C),
    })
}

/// `exp(sum_i v_i K_i)` (rapidity direction `+v`): closed hyperbolic form.
fn poincare_boost_exp(rep: Rep, v: Vec3) -> Result<GroupElement> {
    let c = rep.light_speed().expect("Poincare rep required");
    let speed = match rep.dim() {
        SpaceDim::One => v[0].abs(),
        SpaceDim::Three => norm3(v),
    };
    if speed >= c {
        return Err(Error::SpeedLimit { v: speed, c });
    }
    let n = rep.size();
    if speed == 0.0 {
        return Ok(GroupElement::identity(rep));
    }
    let phi = (speed / c).atanh();
    let mut pattern = DMatrix::zeros(n, n);
    match rep.dim() {
        SpaceDim::One => {
            let sign = v[0].signum();
            pattern[(0, 1)] = sign;
            pattern[(1, 0)] = sign;
        }
        SpaceDim::Three => {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                let u = v[axis.index()] / speed;
                pattern[(0, rep.space_row(axis))] = u;
                pattern[(rep.space_row(axis), 0)] = u;
            }
        }
    }
    let matrix =
        DMatrix::identity(n, n) + &pattern * phi.sinh() + &pattern * &pattern * (phi.cosh() - 1.0);
    Ok(GroupElement {
        rep,
        matrix,
        provenance: provenance_over_axes(rep, v.map(|x| x * c / speed * phi), Label::K),
    })
}

/// Standard Lorentz boost with velocity `v` (`ct' = gamma (ct - beta.x)`,
/// `x' = gamma (x - beta ct)` along `v`), i.e. `exp(K, -c*atanh(|v|/c))`
/// along `v`.
pub fn lorentz_boost(rep: Rep, v: Vec3) -> Result<GroupElement> {
    poincare_boost_exp(rep, neg(v))
}

/// The translation-boost loop in the Bargmann representation:
/// `exp(C,v) exp(P,a) exp(C,-v) exp(P,-a)`. The result is exactly central:
/// `t` and `x` are fixed and `s` shifts by `+v.a`.
pub fn bargmann_group_loop(v: Vec3, a: Vec3, dim: SpaceDim) -> Result<GroupElement> {
    let rep = Rep::ExtendedGalilei(dim);
    let bp = galilean_boost_element(dim, v)?;
    let bm = galilean_boost_element(dim, neg(v))?;
    let tp = translation_element(rep, a)?;
    let tm = translation_element(rep, neg(a))?;
    bp.compose(&tp)?.compose(&bm)?.compose(&tm)
}

/// The same four-factor loop with Lorentz boosts:
/// `exp(K,v) exp(P,a) exp(K,-v) exp(P,-a)`. Not the identity: acting on the
/// origin event it produces `t' = v.a/c^2 + O(1/c^4)` and
/// `x' = (v.a) v / 2c^2 + O(1/c^4)`.
pub fn poincare_group_loop(v: Vec3, a: Vec3, c: f64, dim: SpaceDim) -> Result<GroupElement> {
    let rep = Rep::Poincare(dim, c);
    let bp = poincare_boost_exp(rep, v)?;
    let bm = poincare_boost_exp(rep, neg(v))?;
    let tp = translation_element(rep, a)?;
    let tm = translation_element(rep, neg(a))?;
    bp.compose(&tp)?.compose(&bm)?.compose(&tm)
}

/// Spacetime point extended by the central coordinate `s` conjugate to `M`.
/// The boost action pins `s` to accumulate exactly the wavefunction phase
/// argument, so a loop's `s`-shift times `m/hbar` is a physical phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedEvent {
    pub t: f64,
    pub x: Vec3,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub x: Vec3,
}

/// Event carrier for [`event_shift`]; the variant must match the element's
/// representation family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Extended(ExtendedEvent),
    Spacetime(SpacetimeEvent),
}

/// Apply a group element to homogeneous event coordinates. Components
/// transverse to a 1-D representation pass through untouched.
pub fn event_shift(g: &GroupElement, event: &Event) -> Result<Event> {
    let rep = g.rep;
    let n = rep.size();
    let mut col = DMatrix::zeros(n, 1);
    match (rep, event) {
        (Rep::ExtendedGalilei(dim), Event::Extended(e)) => {
            col[(rep.time_row(), 0)] = e.t;
            for axis in dim.axes() {
                col[(rep.space_row(*axis), 0)] = e.x[axis.index()];
            }
            col[(rep.s_row().unwrap(), 0)] = e.s;
            col[(rep.homog(), 0)] = 1.0;
            let out = g.matrix() * col;
            let mut x = e.x;
            for axis in dim.axes() {
                x[axis.index()] = out[(rep.space_row(*axis), 0)];
            }
            Ok(Event::Extended(ExtendedEvent {
                t: out[(rep.time_row(), 0)],
                x,
                s: out[(rep.s_row().unwrap(), 0)],
            }))
        }
        (Rep::Poincare(dim, c), Event::Spacetime(e)) => {
            col[(rep.time_row(), 0)] = c * e.t;
            for axis in dim.axes() {
                col[(rep.space_row(*axis), 0)] = e.x[axis.index()];
            }
            col[(rep.homog(), 0)] = 1.0;
            let out = g.matrix() * col;
            let mut x = e.x;
            for axis in dim.axes() {
                x[axis.index()] = out[(rep.space_row(*axis), 0)];
            }
            Ok(Event::Spacetime(SpacetimeEvent {
                t: out[(rep.time_row(), 0)] / c,
                x,
            }))
        }
        _ => Err(Error::RepMismatch(rep.name(), "event kind".into())),
    }
}

/// Split a Bargmann group element into its central `s`-shift and the largest
/// deviation from the pure central form `identity + shift`.
pub fn central_part(g: &GroupElement) -> Result<(f64, f64)> {
    let rep = g.rep;
    let s_row = rep
        .s_row()
        .ok_or_else(|| Error::RepMismatch(rep.name(), "extended-galilei".into()))?;
    let shift = g.matrix()[(s_row, rep.homog())];
    let n = rep.size();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut target = if i == j { 1.0 } else { 0.0 };
            if i == s_row && j == rep.homog() {
                target = shift;
            }
            dev = dev.max((g.matrix()[(i, j)] - target).abs());
        }
    }
    Ok((shift, dev))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionRow {
    pub c: f64,
    /// Time shift of the origin event under the Poincare loop.
    pub dt: f64,
    /// Spatial shift along x of the origin event.
    pub dx: f64,
    pub c2_dt: f64,
    /// `|c^2 dt - v.a|`
    pub time_residual: f64,
    /// `|dx - (v.a) v_x / 2 c^2|`
    pub space_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub rows: Vec<ContractionRow>,
    /// `s`-shift of the Bargmann loop (the contraction target of `c^2 dt`).
    pub central_shift: f64,
    /// Fit of `time_residual` vs `c`; expected slope -2.
    pub time_slope: Option<SlopeFit>,
    /// Fit of `space_residual` vs `c`; expected slope -4.
    pub space_slope: Option<SlopeFit>,
    /// Richardson extrapolation of `c^2 dt(c)` from the two largest `c`.
    pub richardson_limit: Option<f64>,
}

/// Sweep the Poincare loop over `c` and verify that `c^2 * dt(c)` contracts
/// onto the Bargmann central shift `v.a`, with the spatial shift matching
/// `(v.a) v / 2c^2`.
pub fn contraction_check(v: Vec3, a: Vec3, c_sweep: &[f64]) -> Result<ContractionReport> {
    if c_sweep.is_empty() {
        return Err(Error::InvalidParams("empty c sweep".into()));
    }
    let dim = if v[1] == 0.0 && v[2] == 0.0 && a[1] == 0.0 && a[2] == 0.0 {
        SpaceDim::One
    } else {
        SpaceDim::Three
    };
    let speed = norm3(v);
    for &c in c_sweep {
        if speed >= c {
            return Err(Error::SpeedLimit { v: speed, c });
        }
    }
    let va = dot(v, a);
    let (central_shift, _) = central_part(&bargmann_group_loop(v, a, dim)?)?;
    let origin = Event::Spacetime(SpacetimeEvent { t: 0.0, x: [0.0; 3] });
    let mut rows = Vec::with_capacity(c_sweep.len());
    for &c in c_sweep {
        let looped = poincare_group_loop(v, a, c, dim)?;
        let shifted = match event_shift(&looped, &origin)? {
            Event::Spacetime(e) => e,
            Event::Extended(_) => unreachable!(),
        };
        let dt = shifted.t;
        let dx = shifted.x[0];
        rows.push(ContractionRow {
            c,
            dt,
            dx,
            c2_dt: c * c * dt,
            time_residual: (c * c * dt - va).abs(),
            space_residual: (dx - va * v[0] / (2.0 * c * c)).abs(),
        });
    }
    rows.sort_by(|p, q| p.c.total_cmp(&q.c));
    let cs: Vec<f64> = rows.iter().map(|r| r.c).collect();
    let tres: Vec<f64> = rows.iter().map(|r| r.time_residual).collect();
    let sres: Vec<f64> = rows.iter().map(|r| r.space_residual).collect();
    let time_slope = log_log_slope(&cs, &tres).ok();
    let space_slope = log_log_slope(&cs, &sres).ok();
    let richardson_limit = if rows.len() >= 2 {
        let f1 = rows[rows.len() - 2].c2_dt;
        let f2 = rows[rows.len() - 1].c2_dt;
        let r = rows[rows.len() - 1].c / rows[rows.len() - 2].c;
        let r2 = r * r;
        Some((r2 * f2 - f1) / (r2 - 1.0))
    } else {
        None
    };
    Ok(ContractionReport {
        rows,
        central_shift,
        time_slope,
        space_slope,
        richardson_limit,
    })
}
