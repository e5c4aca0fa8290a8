use num_complex::Complex64;

use super::{Grid, SpectralScalar, SpectralVector};
use crate::error::{Error, Result};

impl Grid {
    /// Real-space samples to coefficients, `f̂_k = n⁻² Σ_x f(x) e^{−ik·x}`.
    pub fn forward(&self, samples: &[f64]) -> Result<SpectralScalar> {
        if samples.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: samples.len(),
            });
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fft2(&mut buf, false);
        let scale = 1.0 / self.len() as f64;
        for c in &mut buf {
            *c *= scale;
        }
        SpectralScalar::from_coeffs(self, buf)
    }

    /// Coefficients to real-space samples. The imaginary part (zero for a
    /// Hermitian field) is discarded.
    pub fn inverse(&self, field: &SpectralScalar) -> Vec<f64> {
        debug_assert_eq!(field.n(), self.n());
        let mut buf = field.coeffs().to_vec();
        self.fft2(&mut buf, true);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn forward_vector(&self, samples: [&[f64]; 2]) -> Result<SpectralVector> {
        Ok(SpectralVector::new(
            self.forward(samples[0])?,
            self.forward(samples[1])?,
        ))
    }

    pub fn inverse_vector(&self, field: &SpectralVector) -> [Vec<f64>; 2] {
        [
            self.inverse(&field.components[0]),
            self.inverse(&field.components[1]),
        ]
    }
}
