//! Periodic 1-D grid, complex field storage, unitary spectral transforms,
//! norms, inner products, and global-phase extraction.
//!
//! Conventions, used everywhere in the crate:
//! * sample positions `x_j = -L/2 + j*dx` with `dx = L/n`;
//! * signed wavenumbers `k_j = 2*pi*alias(j)/L`, where `alias(j) = j` for
//!   `j <= n/2` and `j - n` otherwise (the Nyquist mode keeps the positive
//!   sign);
//! * the transform pair is unitary (`1/sqrt(n)` in both directions), so
//!   `sum |psi_j|^2 dx == sum |psi_hat_k|^2 dx` holds symmetrically.
//!
//! Wavepacket containment rule for test states: Gaussians should satisfy
//! `sigma <= L/16` and keep at least `4*sigma` clear of the box boundary
//! over a run; band-limiting asks for spectral content beyond `|k|_max/2`
//! below 1e-12 of the norm.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic spatial grid: `n` samples (power of two) over a box of length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "length must be finite and positive, got {length}"
            )));
        }
        Ok(Grid { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Sample position `x_j = -L/2 + j*dx`.
    pub fn position(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.position(j))
    }

    /// Signed alias of mode index `j`; the Nyquist mode `n/2` stays positive.
    pub fn signed_mode(&self, j: usize) -> i64 {
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// `k_j = 2*pi*alias(j)/L`; `wavenumber(0) == 0`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI * self.signed_mode(j) as f64 / self.length
    }

    /// Largest representable wavenumber, `pi*n/L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.length
    }
}

type FftPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static FFT_PLANS: RefCell<HashMap<usize, FftPair>> = RefCell::new(HashMap::new());
}

fn with_plans<T>(n: usize, f: impl FnOnce(&dyn Fft<f64>, &dyn Fft<f64>) -> T) -> T {
    FFT_PLANS.with(|cell| {
        let mut plans = cell.borrow_mut();
        let (fwd, inv) = plans.entry(n).or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        });
        f(fwd.as_ref(), inv.as_ref())
    })
}

/// Complex amplitudes sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Unitary spectral coefficients of a [`ComplexField`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(values.len(), grid.n()));
        }
        Ok(ComplexField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        ComplexField {
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
            grid,
        }
    }

    pub fn constant(grid: Grid, value: Complex64) -> Self {
        ComplexField {
            values: vec![value; grid.n()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        ComplexField {
            values: grid.positions().map(f).collect(),
            grid,
        }
    }

    /// Normalized Gaussian packet
    /// `(2 pi sigma^2)^{-1/4} exp(-(x-x0)^2/(4 sigma^2) + i k0 (x-x0))`.
    pub fn gaussian(grid: Grid, x0: f64, sigma: f64, k0: f64) -> Self {
        let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
        Self::from_fn(grid, |x| {
            let u = x - x0;
            norm * (-u * u / (4.0 * sigma * sigma)).exp() * Complex64::cis(k0 * u)
        })
    }

    /// Unit-amplitude plane wave on grid mode `m`: `exp(i k_m x)`.
    pub fn plane_wave(grid: Grid, mode: i64) -> Self {
        let k = 2.0 * PI * mode as f64 / grid.length();
        Self::from_fn(grid, |x| Complex64::cis(k * x))
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise map onto the same grid.
    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        ComplexField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(j, &v)| f(j, v))
                .collect(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// `sqrt(sum |psi_j|^2 dx)`; zero iff all amplitudes vanish.
    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `<self, g> = sum conj(self_j) g_j dx`.
    pub fn inner(&self, g: &ComplexField) -> Result<Complex64> {
        if self.grid != g.grid {
            return Err(Error::GridMismatch(self.grid.n(), g.grid.n()));
        }
        Ok(self
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing())
    }

    /// `||self - g||`.
    pub fn diff_norm(&self, g: &ComplexField) -> Result<f64> {
        if self.grid != g.grid {
            return Err(Error::GridMismatch(self.grid.n(), g.grid.n()));
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.spacing()).sqrt())
    }

    pub fn max_abs_diff(&self, g: &ComplexField) -> Result<f64> {
        if self.grid != g.grid {
            return Err(Error::GridMismatch(self.grid.n(), g.grid.n()));
        }
        Ok(self
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Fraction of the squared norm carried by modes with `|k| > nyquist/2`
    /// (the band-limiting diagnostic).
    pub fn spectral_tail_fraction(&self) -> f64 {
        let spec = to_spectrum(self);
        let half = self.grid.nyquist() / 2.0;
        let total: f64 = spec.coeffs.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = spec
            .coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| self.grid.wavenumber(*j).abs() > half)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        tail / total
    }
}

impl SpectralField {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::GridMismatch(coeffs.len(), grid.n()));
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, &v)| f(j, v))
                .collect(),
        }
    }

    /// Spectral squared norm with the same `dx` weight as the spatial one,
    /// so Parseval reads as plain equality.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

/// Forward unitary transform: `F_k = n^{-1/2} sum_j f_j exp(-2 pi i j k / n)`.
pub fn to_spectrum(f: &ComplexField) -> SpectralField {
    let n = f.grid.n();
    let mut buf = f.values.clone();
    with_plans(n, |fwd, _| fwd.process(&mut buf));
    let scale = 1.0 / (n as f64).sqrt();
    for c in &mut buf {
        *c *= scale;
    }
    SpectralField {
        grid: f.grid,
        coeffs: buf,
    }
}

/// Inverse unitary transform; `from_spectrum(to_spectrum(f)) == f` up to
/// rounding.
pub fn from_spectrum(s: &SpectralField) -> ComplexField {
    let n = s.grid.n();
    let mut buf = s.coeffs.clone();
    with_plans(n, |_, inv| inv.process(&mut buf));
    let scale = 1.0 / (n as f64).sqrt();
    for c in &mut buf {
        *c *= scale;
    }
    ComplexField {
        grid: s.grid,
        values: buf,
    }
}

/// Result of comparing two fields up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    /// `arg <f, g>`, in (-pi, pi].
    pub angle: f64,
    /// `||g - exp(i angle) f (||g||/||f||)|| / ||g||`; ~0 iff `g` is a
    /// global-phase multiple of `f`.
    pub residual: f64,
}

/// Extract the global phase between two nonzero fields on one grid. The
/// residual is reported, not policed: a large residual simply means the two
/// fields are not on the same ray.
pub fn global_phase_between(f: &ComplexField, g: &ComplexField) -> Result<PhaseMatch> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch(f.grid.n(), g.grid.n()));
    }
    let nf = f.l2_norm();
    let ng = g.l2_norm();
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let ip = f.inner(g)?;
    let angle = ip.im.atan2(ip.re);
    let rot = Complex64::cis(angle) * (ng / nf);
    let dev: f64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (b - rot * a).norm_sqr())
        .sum::<f64>()
        * f.grid.spacing();
    Ok(PhaseMatch {
        angle,
        residual: dev.sqrt() / ng,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, length: f64) -> Grid {
        Grid::new(n, length).unwrap()
    }

    /// Direct O(n^2) summation of the unitary transform, as an oracle
    /// independent of the FFT path.
    fn dft_direct(f: &ComplexField) -> Vec<Complex64> {
        let n = f.grid().n();
        let scale = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        f.values()[j]
                            * Complex64::cis(-2.0 * PI * (j as f64) * (k as f64) / n as f64)
                    })
                    .sum::<Complex64>()
                    * scale
            })
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(7, 1.0).is_err());
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(8, 0.0).is_err());
        assert!(Grid::new(8, -2.0).is_err());
        assert!(Grid::new(8, 1.0).is_ok());
    }

    #[test]
    fn signed_wavenumbers() {
        let g = grid(8, 2.0);
        assert_eq!(g.wavenumber(0), 0.0);
        assert_eq!(g.signed_mode(1), 1);
        assert_eq!(g.signed_mode(4), 4); // Nyquist kept positive
        assert_eq!(g.signed_mode(5), -3);
        assert_eq!(g.signed_mode(7), -1);
        assert!((g.wavenumber(1) - PI).abs() < 1e-15);
    }

    #[test]
    fn constant_field_is_pure_dc() {
        let g = grid(8, 2.0);
        let f = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        let s = to_spectrum(&f);
        assert!((s.coeffs()[0] - Complex64::new(8.0_f64.sqrt(), 0.0)).norm() < 1e-14);
        for c in &s.coeffs()[1..] {
            assert!(c.norm() < 1e-14);
        }
    }

    #[test]
    fn first_mode_plane_wave_concentrates_on_mode_one() {
        let g = grid(64, 5.0);
        let f = ComplexField::plane_wave(g, 1);
        let s = to_spectrum(&f);
        let oracle = dft_direct(&f);
        for (a, b) in s.coeffs().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-12);
        }
        for (j, c) in s.coeffs().iter().enumerate() {
            if j == 1 {
                assert!((c.norm() - 8.0).abs() < 1e-12); // sqrt(64)
            } else {
                assert!(c.norm() < 1e-11, "leak at mode {j}: {}", c.norm());
            }
        }
    }

    #[test]
    fn gaussian_round_trip_identity() {
        let g = grid(256, 20.0);
        let f = ComplexField::gaussian(g, 1.0, 0.8, 3.0);
        let back = from_spectrum(&to_spectrum(&f));
        assert!(f.max_abs_diff(&back).unwrap() <= 1e-12);
    }

    #[test]
    fn l2_norm_cases() {
        let g = grid(16, 2.0);
        assert_eq!(ComplexField::zeros(g).l2_norm(), 0.0);
        let c = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        assert!((c.l2_norm() - 2.0_f64.sqrt()).abs() < 1e-14);
        let g = grid(512, 32.0);
        let psi = ComplexField::gaussian(g, 0.0, 1.0, 2.0);
        assert!((psi.l2_norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn global_phase_cases() {
        let g = grid(128, 16.0);
        let f = ComplexField::gaussian(g, 0.0, 1.0, 0.0);
        let m = global_phase_between(&f, &f).unwrap();
        assert_eq!(m.angle, 0.0);
        assert!(m.residual < 1e-14);

        let rotated = f.map(|_, v| v * Complex64::cis(PI / 3.0));
        let m = global_phase_between(&f, &rotated).unwrap();
        assert!((m.angle - PI / 3.0).abs() < 1e-12);
        assert!(m.residual <= 1e-12);

        // A shifted Gaussian is not a phase multiple: residual is large but
        // reported, not an error.
        let shifted = ComplexField::gaussian(g, 2.5, 1.0, 0.0);
        let m = global_phase_between(&f, &shifted).unwrap();
        assert!(m.residual > 0.1);
    }

    #[test]
    fn zero_norm_is_an_error() {
        let g = grid(16, 2.0);
        let z = ComplexField::zeros(g);
        let f = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        assert_eq!(global_phase_between(&z, &f), Err(Error::ZeroNorm));
        assert_eq!(global_phase_between(&f, &z), Err(Error::ZeroNorm));
    }

    #[test]
    fn mismatched_grids_are_an_error() {
        let f = ComplexField::zeros(grid(16, 2.0));
        let g = ComplexField::zeros(grid(32, 2.0));
        assert!(f.inner(&g).is_err());
        let s = to_spectrum(&g);
        assert!(SpectralField::new(f.grid(), s.coeffs().to_vec()).is_err());
    }

    #[test]
    fn gaussian_is_band_limited() {
        let g = grid(1024, 28.0);
        let f = ComplexField::gaussian(g, 0.0, 0.4, 0.0);
        assert!(f.spectral_tail_fraction() < 1e-12);
    }
}
