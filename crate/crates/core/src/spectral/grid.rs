use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform discretization of the torus `[0, 2π)²` with `n` points per
/// dimension.
///
/// Real-space samples and Fourier coefficients share one row-major layout:
/// entry `i1 * n + i2` holds the sample at `x = (2π i1 / n, 2π i2 / n)` or
/// the coefficient at wavenumber `(k(i1), k(i2))`, where `k(i) = i` for
/// `i ≤ n/2` and `i − n` otherwise. The wavenumber lattice is therefore
/// `{−n/2+1, …, n/2}²`.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    dealias: Arc<[bool]>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Grid {
    /// Build a grid with `n` modes per dimension. `n` must be even and at
    /// least 8.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(n));
        }
        let mut dealias = vec![false; n * n];
        for i1 in 0..n {
            for i2 in 0..n {
                let (k1, k2) = (wavenumber(i1, n), wavenumber(i2, n));
                // |k_i| < n/3 for both components
                dealias[i1 * n + i2] = 3 * k1.unsigned_abs() < n as u64
                    && 3 * k2.unsigned_abs() < n as u64;
            }
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            dealias: dealias.into(),
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of lattice points, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2π / n`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of one cell, `(2π/n)²`.
    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    /// Signed wavenumber pair at flat index `idx`.
    pub fn wavenumber(&self, idx: usize) -> (i64, i64) {
        (wavenumber(idx / self.n, self.n), wavenumber(idx % self.n, self.n))
    }

    /// Wavenumbers used for differentiation: the Nyquist component is zero.
    pub fn diff_wavenumber(&self, idx: usize) -> (f64, f64) {
        let (k1, k2) = self.wavenumber(idx);
        let half = (self.n / 2) as i64;
        let d = |k: i64| if k == half { 0.0 } else { k as f64 };
        (d(k1), d(k2))
    }

    /// `|k|²` at flat index `idx`.
    pub fn k_sq(&self, idx: usize) -> f64 {
        let (k1, k2) = self.wavenumber(idx);
        (k1 * k1 + k2 * k2) as f64
    }

    /// True when either component of the wavenumber is the Nyquist mode.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let (k1, k2) = self.wavenumber(idx);
        let half = (self.n / 2) as i64;
        k1 == half || k2 == half
    }

    /// Index of the wavenumber `(k1, k2)`, if it lies on the lattice.
    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let n = self.n as i64;
        let wrap = |k: i64| -> Option<usize> {
            if k > n / 2 || k <= -n / 2 {
                None
            } else {
                Some(k.rem_euclid(n) as usize)
            }
        };
        Some(wrap(k1)? * self.n + wrap(k2)?)
    }

    /// Index of `−k` for the wavenumber stored at `idx`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (i1, i2) = (idx / self.n, idx % self.n);
        ((self.n - i1) % self.n) * self.n + (self.n - i2) % self.n
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias
    }

    pub fn in_band(&self, idx: usize) -> bool {
        self.dealias[idx]
    }

    /// Real-space coordinates of sample `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let h = self.spacing();
        ((idx / self.n) as f64 * h, (idx % self.n) as f64 * h)
    }

    /// Evaluate `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.len())
            .map(|idx| {
                let (x1, x2) = self.point(idx);
                f(x1, x2)
            })
            .collect()
    }

    /// Tabulate a function of `|k|²` over the lattice.
    pub fn tabulate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.len()).map(|idx| f(self.k_sq(idx))).collect()
    }

    /// In-place 2-D DFT; `inverse` selects the sign. No normalization.
    pub(crate) fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let n = self.n;
        plan.process(buf);
        transpose(buf, n);
        plan.process(buf);
        transpose(buf, n);
    }
}

fn wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
