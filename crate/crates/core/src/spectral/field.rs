use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Fourier coefficients of a scalar field, `f(x) = Σ_k f̂_k e^{ik·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralScalar {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralScalar {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            n: grid.n(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { n: grid.n(), coeffs })
    }

    /// Single Fourier mode `amp · e^{ik·x}` (not Hermitian on its own).
    pub fn mode(grid: &Grid, k1: i64, k2: i64, amp: Complex64) -> Self {
        let mut f = Self::zeros(grid);
        if let Some(idx) = grid.index_of(k1, k2) {
            f.coeffs[idx] = amp;
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at wavenumber `(k1, k2)`; zero off the lattice.
    pub fn at(&self, grid: &Grid, k1: i64, k2: i64) -> Complex64 {
        grid.index_of(k1, k2)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor · other`
    pub fn add_scaled(&mut self, other: &Self, factor: f64) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }
}

/// Two-component vector field on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVector {
    pub components: [SpectralScalar; 2],
}

impl SpectralVector {
    pub fn new(u1: SpectralScalar, u2: SpectralScalar) -> Self {
        Self {
            components: [u1, u2],
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::new(SpectralScalar::zeros(grid), SpectralScalar::zeros(grid))
    }

    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    pub fn max_abs(&self) -> f64 {
        self.components[0].max_abs().max(self.components[1].max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(SpectralScalar::is_finite)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            self.components[0].scaled(factor),
            self.components[1].scaled(factor),
        )
    }

    pub fn add_scaled(&mut self, other: &Self, factor: f64) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_scaled(b, factor);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }
}

/// Shared per-mode machinery for scalar, vector and multi-component fields.
pub trait SpectralField: Clone {
    fn grid_n(&self) -> usize;

    /// Replace each coefficient `c` at flat index `idx` by `f(idx, c)`.
    fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self;

    /// `Σ_components Σ_k w(idx) |ĉ_k|²`
    fn weighted_sq_sum(&self, w: impl Fn(usize) -> f64) -> f64;

    /// `Σ_components Σ_k Re(â_k conj(b̂_k))`
    fn dot_modes(&self, other: &Self) -> f64;

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.grid_n() == grid.n() {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: grid.n(),
                found: self.grid_n(),
            })
        }
    }
}

impl SpectralField for SpectralScalar {
    fn grid_n(&self) -> usize {
        self.n
    }

    fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(i, c))
                .collect(),
        }
    }

    fn weighted_sq_sum(&self, w: impl Fn(usize) -> f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| w(i) * c.norm_sqr())
            .sum()
    }

    fn dot_modes(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }
}

impl SpectralField for SpectralVector {
    fn grid_n(&self) -> usize {
        self.n()
    }

    fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self::new(
            self.components[0].map_modes(&f),
            self.components[1].map_modes(&f),
        )
    }

    fn weighted_sq_sum(&self, w: impl Fn(usize) -> f64) -> f64 {
        self.components.iter().map(|c| c.weighted_sq_sum(&w)).sum()
    }

    fn dot_modes(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.dot_modes(b))
            .sum()
    }
}

/// Order-parameter fields carry one scalar per component (one in scalar
/// mode, two or three in vector mode, none when the phase field is off).
impl SpectralField for Vec<SpectralScalar> {
    fn grid_n(&self) -> usize {
        self.first().map_or(0, SpectralScalar::n)
    }

    fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        self.iter().map(|c| c.map_modes(&f)).collect()
    }

    fn weighted_sq_sum(&self, w: impl Fn(usize) -> f64) -> f64 {
        self.iter().map(|c| c.weighted_sq_sum(&w)).sum()
    }

    fn dot_modes(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| a.dot_modes(b)).sum()
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        for c in self {
            c.check_grid(grid)?;
        }
        Ok(())
    }
}
