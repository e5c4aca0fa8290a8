//! Diagonal Fourier operators: multipliers, derivatives, the Leray
//! projector and Sobolev norms.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Grid, SpectralField, SpectralScalar, SpectralVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier multiplier given as a function of `|k|²`.
#[derive(Clone)]
pub struct Symbol(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Symbol(..)")
    }
}

impl Symbol {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn identity() -> Self {
        Self::new(|_| 1.0)
    }

    pub fn eval(&self, k_sq: f64) -> f64 {
        (self.0)(k_sq)
    }

    /// Pointwise product of two symbols (composition of the operators).
    pub fn compose(&self, other: &Symbol) -> Symbol {
        let (a, b) = (self.clone(), other.clone());
        Symbol::new(move |s| a.eval(s) * b.eval(s))
    }

    pub fn tabulate(&self, grid: &Grid) -> Vec<f64> {
        grid.tabulate(|s| self.eval(s))
    }
}

/// Multiply every coefficient by `sym(|k|²)`.
pub fn apply_symbol<F: SpectralField>(grid: &Grid, field: &F, sym: &Symbol) -> F {
    let table = sym.tabulate(grid);
    apply_table(field, &table)
}

/// As [`apply_symbol`] with a pre-tabulated multiplier.
pub fn apply_table<F: SpectralField>(field: &F, table: &[f64]) -> F {
    field.map_modes(|i, c| c * table[i])
}

pub fn gradient(grid: &Grid, f: &SpectralScalar) -> SpectralVector {
    SpectralVector::new(partial(grid, f, 0), partial(grid, f, 1))
}

/// `∂f/∂x_axis` with the Nyquist wavenumber treated as zero.
pub fn partial(grid: &Grid, f: &SpectralScalar, axis: usize) -> SpectralScalar {
    f.map_modes(|i, c| {
        let (k1, k2) = grid.diff_wavenumber(i);
        let k = if axis == 0 { k1 } else { k2 };
        c * Complex64::new(0.0, k)
    })
}

pub fn divergence(grid: &Grid, v: &SpectralVector) -> SpectralScalar {
    let mut out = partial(grid, &v.components[0], 0);
    out.add_scaled(&partial(grid, &v.components[1], 1), 1.0);
    out
}

/// `Δf`, using the same Nyquist convention as [`gradient`] so that
/// `divergence ∘ gradient = laplacian` holds exactly.
pub fn laplacian<F: SpectralField>(grid: &Grid, f: &F) -> F {
    f.map_modes(|i, c| {
        let (k1, k2) = grid.diff_wavenumber(i);
        c * -(k1 * k1 + k2 * k2)
    })
}

/// L²-orthogonal projection onto mean-free divergence-free fields.
/// Modes with a Nyquist component are removed.
pub fn leray_project(grid: &Grid, v: &SpectralVector) -> SpectralVector {
    let [a, b] = &v.components;
    let mut p1 = a.clone();
    let mut p2 = b.clone();
    let (c1, c2) = (p1.coeffs_mut(), p2.coeffs_mut());
    for i in 0..grid.len() {
        if i == 0 || grid.is_nyquist(i) {
            c1[i] = ZERO;
            c2[i] = ZERO;
            continue;
        }
        let (k1, k2) = grid.wavenumber(i);
        let (k1, k2) = (k1 as f64, k2 as f64);
        let kdotu = c1[i] * k1 + c2[i] * k2;
        let inv = 1.0 / (k1 * k1 + k2 * k2);
        c1[i] -= kdotu * (k1 * inv);
        c2[i] -= kdotu * (k2 * inv);
    }
    SpectralVector::new(p1, p2)
}

/// `‖f‖_s = ((2π)² Σ_k (1+|k|²)^s |f̂_k|²)^{1/2}`, summed over components.
pub fn sobolev_norm<F: SpectralField>(grid: &Grid, f: &F, s: f64) -> f64 {
    let w = grid.tabulate(|k2| (1.0 + k2).powf(s));
    (4.0 * PI * PI * f.weighted_sq_sum(|i| w[i])).sqrt()
}

/// `L²` norm, `sobolev_norm(·, 0)`.
pub fn l2_norm<F: SpectralField>(f: &F) -> f64 {
    (4.0 * PI * PI * f.weighted_sq_sum(|_| 1.0)).sqrt()
}

/// `∫_Ω a·b dx` for real fields given by their coefficients.
pub fn inner<F: SpectralField>(a: &F, b: &F) -> f64 {
    4.0 * PI * PI * a.dot_modes(b)
}

/// Zero every coefficient outside the 2/3 band.
pub fn dealias<F: SpectralField>(grid: &Grid, f: &F) -> F {
    let mask = grid.dealias_mask();
    f.map_modes(|i, c| if mask[i] { c } else { ZERO })
}
