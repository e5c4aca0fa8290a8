//! Discretization of the periodic torus `[0, 2π)²`: grid, Fourier
//! coefficient fields, transforms and diagonal operators.

mod field;
mod grid;
mod ops;
mod transform;

pub use field::{SpectralField, SpectralScalar, SpectralVector};
pub use grid::Grid;
pub use ops::{
    apply_symbol, apply_table, dealias, divergence, gradient, inner, l2_norm, laplacian,
    leray_project, partial, sobolev_norm, Symbol,
};

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Real field with independent uniform samples (full spectrum).
    pub fn random_scalar(grid: &Grid, seed: u64, amp: f64) -> SpectralScalar {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..grid.len()).map(|_| amp * rng.gen_range(-1.0..1.0)).collect();
        grid.forward(&x).unwrap()
    }

    pub fn random_vector(grid: &Grid, seed: u64, amp: f64) -> SpectralVector {
        SpectralVector::new(
            random_scalar(grid, seed, amp),
            random_scalar(grid, seed.wrapping_add(1000), amp),
        )
    }

    /// Dealiased, divergence-free random velocity.
    pub fn random_solenoidal(grid: &Grid, seed: u64) -> SpectralVector {
        leray_project(grid, &dealias(grid, &random_vector(grid, seed, 1.0)))
    }
}
