//! Seeded band-limited initial data and forcing profiles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{l2_norm, leray_project, Grid, SpectralScalar, SpectralVector};

/// Largest `|φ₀|` produced for the order parameter.
pub const PHI_BOUND: f64 = 0.9;

const BAND: i64 = 4;
const PHASE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
const FORCING_STREAM: u64 = 0xd1b5_4a32_d192_ed03;

/// Real random field with coefficients on `1 ≤ |k| ≤ 4`.
pub fn band_limited_scalar(grid: &Grid, rng: &mut ChaCha8Rng) -> SpectralScalar {
    let mut f = SpectralScalar::zeros(grid);
    for k1 in -BAND..=BAND {
        for k2 in -BAND..=BAND {
            let ksq = k1 * k1 + k2 * k2;
            // one representative of each ±k pair
            let upper = k1 > 0 || (k1 == 0 && k2 > 0);
            if !(1..=BAND * BAND).contains(&ksq) || !upper {
                continue;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (Some(i), Some(j)) = (grid.index_of(k1, k2), grid.index_of(-k1, -k2)) else {
                continue;
            };
            f.coeffs_mut()[i] = c;
            f.coeffs_mut()[j] = c.conj();
        }
    }
    f
}

fn solenoidal(grid: &Grid, rng: &mut ChaCha8Rng, l2: f64) -> SpectralVector {
    let raw = SpectralVector::new(band_limited_scalar(grid, rng), band_limited_scalar(grid, rng));
    let v = leray_project(grid, &raw);
    let norm = l2_norm(&v);
    if norm > 0.0 {
        v.scaled(l2 / norm)
    } else {
        v
    }
}

/// Divergence-free random velocity with `‖u‖_{L²} = amplitude`.
pub fn random_velocity(grid: &Grid, seed: u64, amplitude: f64) -> SpectralVector {
    solenoidal(grid, &mut ChaCha8Rng::seed_from_u64(seed), amplitude)
}

/// Divergence-free forcing profile with `‖g₀‖_{L²} = amplitude`.
pub fn random_forcing_profile(grid: &Grid, seed: u64, amplitude: f64) -> SpectralVector {
    solenoidal(
        grid,
        &mut ChaCha8Rng::seed_from_u64(seed ^ FORCING_STREAM),
        amplitude,
    )
}

/// Order parameter with `components` components: a band-limited
/// fluctuation of grid amplitude `amplitude` around `mean` (added to the
/// first component). The fluctuation is shrunk so that `|φ₀| ≤ 0.9` on
/// the grid.
pub fn random_order_param(
    grid: &Grid,
    seed: u64,
    components: usize,
    amplitude: f64,
    mean: f64,
) -> Vec<SpectralScalar> {
    if components == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ PHASE_STREAM);
    let fluct: Vec<SpectralScalar> = (0..components)
        .map(|_| band_limited_scalar(grid, &mut rng))
        .collect();
    let samples: Vec<Vec<f64>> = fluct.iter().map(|c| grid.inverse(c)).collect();
    let peak = (0..grid.len())
        .map(|x| samples.iter().map(|s| s[x] * s[x]).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mean = mean.clamp(-PHI_BOUND, PHI_BOUND);
    let amp = amplitude.max(0.0).min(PHI_BOUND - mean.abs());
    let scale = if peak > 0.0 { amp / peak } else { 0.0 };
    fluct
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut c = c.scaled(scale);
            if i == 0 {
                c.coeffs_mut()[0].re += mean;
            }
            c
        })
        .collect()
}
