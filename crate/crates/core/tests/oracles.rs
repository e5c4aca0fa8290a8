//! Dense real-space oracles for the pseudo-spectral operators.
//!
//! Inputs are explicit trigonometric polynomials. The oracle evaluates them
//! and their derivatives by direct summation at the collocation points,
//! forms the products pointwise, and projects back with a direct-sum DFT.
//! No FFT and no library operator is involved on the oracle side.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regalpha::diagnostics::{chemical_potential, energy};
use regalpha::models::{OrderParam, Preset};
use regalpha::nonlinear::{b0_bar, NonlinearWorkspace};
use regalpha::spectral::{Grid, SpectralScalar, SpectralVector};
use regalpha::timestepper::State;

/// Real trigonometric polynomial `Σ c_k e^{ik·x}` stored with both members
/// of each conjugate pair.
#[derive(Clone, Debug)]
struct Trig(Vec<(i64, i64, Complex64)>);

impl Trig {
    fn random(rng: &mut ChaCha8Rng, kmax: i64, mean: f64) -> Self {
        let mut modes = vec![(0, 0, Complex64::new(mean, 0.0))];
        for k1 in 0..=kmax {
            for k2 in -kmax..=kmax {
                if k1 == 0 && k2 <= 0 {
                    continue;
                }
                let c = Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
                modes.push((k1, k2, c));
                modes.push((-k1, -k2, c.conj()));
            }
        }
        Trig(modes)
    }

    fn map(&self, f: impl Fn(i64, i64, Complex64) -> Complex64) -> Self {
        Trig(self.0.iter().map(|&(a, b, c)| (a, b, f(a, b, c))).collect())
    }

    fn dx(&self, axis: usize) -> Self {
        self.map(|a, b, c| Complex64::new(0.0, [a, b][axis] as f64) * c)
    }

    fn lap(&self) -> Self {
        self.map(|a, b, c| -((a * a + b * b) as f64) * c)
    }

    fn at(&self, x1: f64, x2: f64) -> f64 {
        self.0
            .iter()
            .map(|&(a, b, c)| (c * Complex64::from_polar(1.0, a as f64 * x1 + b as f64 * x2)).re)
            .sum()
    }

    fn samples(&self, n: usize) -> Vec<f64> {
        let h = 2.0 * PI / n as f64;
        (0..n * n)
            .map(|idx| self.at((idx / n) as f64 * h, (idx % n) as f64 * h))
            .collect()
    }

    fn to_field(&self, g: &Grid) -> SpectralScalar {
        let mut f = SpectralScalar::zeros(g);
        for &(a, b, c) in &self.0 {
            f.coeffs_mut()[g.index_of(a, b).unwrap()] += c;
        }
        f
    }

    /// Divergence-free velocity `(∂₂ψ, −∂₁ψ)` from a stream function.
    fn curl(&self) -> [Trig; 2] {
        [self.dx(1), self.dx(0).map(|_, _, c| -c)]
    }
}

/// Direct-sum DFT of grid samples, truncated to `3|k_i| < n`, as a map
/// from wavenumber to coefficient.
fn dft_band(n: usize, s: &[f64]) -> Vec<((i64, i64), Complex64)> {
    let h = 2.0 * PI / n as f64;
    let kmax = ((n - 1) / 3) as i64;
    let mut out = Vec::new();
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            if 3 * k1.abs() >= n as i64 || 3 * k2.abs() >= n as i64 {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, v) in s.iter().enumerate() {
                let (x1, x2) = ((idx / n) as f64 * h, (idx % n) as f64 * h);
                acc += v * Complex64::from_polar(1.0, -(k1 as f64 * x1 + k2 as f64 * x2));
            }
            out.push(((k1, k2), acc / (n * n) as f64));
        }
    }
    out
}

fn project(v: [Vec<((i64, i64), Complex64)>; 2]) -> [Vec<((i64, i64), Complex64)>; 2] {
    let [a, b] = v;
    let mut pa = Vec::new();
    let mut pb = Vec::new();
    for (((k1, k2), x), (_, y)) in a.into_iter().zip(b) {
        let ksq = (k1 * k1 + k2 * k2) as f64;
        if ksq == 0.0 {
            pa.push(((k1, k2), Complex64::new(0.0, 0.0)));
            pb.push(((k1, k2), Complex64::new(0.0, 0.0)));
            continue;
        }
        let dot = (x * k1 as f64 + y * k2 as f64) / ksq;
        pa.push(((k1, k2), x - dot * k1 as f64));
        pb.push(((k1, k2), y - dot * k2 as f64));
    }
    [pa, pb]
}

/// Largest coefficient mismatch relative to the largest oracle coefficient;
/// modes outside the oracle list must vanish in the library result.
fn mismatch(g: &Grid, lib: &SpectralScalar, oracle: &[((i64, i64), Complex64)]) -> f64 {
    let mut expected = vec![Complex64::new(0.0, 0.0); g.len()];
    for &((k1, k2), c) in oracle {
        expected[g.index_of(k1, k2).unwrap()] = c;
    }
    let scale = expected.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    lib.coeffs()
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

fn vec_field(g: &Grid, v: &[Trig; 2]) -> SpectralVector {
    SpectralVector::new(v[0].to_field(g), v[1].to_field(g))
}

#[test]
fn advection_with_transpose_term_matches_direct_sums() {
    let n = 16;
    let g = Grid::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let v = Trig::random(&mut rng, 3, 0.0).curl();
        let w = Trig::random(&mut rng, 4, 0.0).curl();
        let vs = [v[0].samples(n), v[1].samples(n)];
        let ws = [w[0].samples(n), w[1].samples(n)];
        let dw = [
            [w[0].dx(0).samples(n), w[0].dx(1).samples(n)],
            [w[1].dx(0).samples(n), w[1].dx(1).samples(n)],
        ];
        let dv = [
            [v[0].dx(0).samples(n), v[0].dx(1).samples(n)],
            [v[1].dx(0).samples(n), v[1].dx(1).samples(n)],
        ];
        let comp = |i: usize| -> Vec<f64> {
            (0..n * n)
                .map(|x| {
                    (0..2).map(|j| vs[j][x] * dw[i][j][x]).sum::<f64>()
                        + (0..2).map(|j| ws[j][x] * dv[j][i][x]).sum::<f64>()
                })
                .collect()
        };
        let oracle = project([dft_band(n, &comp(0)), dft_band(n, &comp(1))]);
        let lib = b0_bar(&g, &vec_field(&g, &v), &vec_field(&g, &w), true).unwrap();
        for i in 0..2 {
            let e = mismatch(&g, &lib.components[i], &oracle[i]);
            assert!(e <= 1e-10, "component {i}: {e:e}");
        }
    }
}

#[test]
fn filtered_transport_matches_direct_sums() {
    let n = 16;
    let g = Grid::new(n).unwrap();
    let p = Preset::MlAcAlpha.params(0.3, 0.1, 0.1, 1.0);
    let ws = NonlinearWorkspace::new(&g, &p);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let u = Trig::random(&mut rng, 3, 0.0).curl();
    let phi = Trig::random(&mut rng, 4, 0.2);
    let smooth = |t: &Trig| {
        t.map(|a, b, c| c / (1.0 + 0.09 * (a * a + b * b) as f64))
    };
    let nu = [smooth(&u[0]), smooth(&u[1])];
    let (a, b) = (nu[0].samples(n), nu[1].samples(n));
    let (d1, d2) = (phi.dx(0).samples(n), phi.dx(1).samples(n));
    let prod: Vec<f64> = (0..n * n).map(|x| a[x] * d1[x] + b[x] * d2[x]).collect();
    let oracle = dft_band(n, &prod);
    let lib = ws.b1(&vec_field(&g, &u), &vec![phi.to_field(&g)]).unwrap();
    let e = mismatch(&g, &lib[0], &oracle);
    assert!(e <= 1e-10, "{e:e}");
}

#[test]
fn chemical_potential_matches_collocation() {
    let n = 16;
    let g = Grid::new(n).unwrap();
    let (eps, gamma3) = (0.2, 0.7);
    let p = Preset::NseAc.params(0.2, 0.1, eps, gamma3);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let phi = Trig::random(&mut rng, 4, 0.1);
    let s = phi.samples(n);
    let f: Vec<f64> = s.iter().map(|r| 4.0 * gamma3 * r * (r * r - 1.0)).collect();
    let lap = phi.lap();
    let mut oracle = dft_band(n, &f);
    for ((k1, k2), c) in &mut oracle {
        let l = lap
            .0
            .iter()
            .filter(|(a, b, _)| a == k1 && b == k2)
            .map(|t| t.2)
            .sum::<Complex64>();
        *c = *c / eps - eps * l;
    }
    let mu = chemical_potential(&g, &p, &vec![phi.to_field(&g)]).unwrap();
    let e = mismatch(&g, &mu[0], &oracle);
    assert!(e <= 1e-10, "{e:e}");
}

#[test]
fn korteweg_force_matches_direct_sums() {
    let n = 16;
    let g = Grid::new(n).unwrap();
    let eps = 0.15;
    let p = Preset::NseAc.params(0.2, 0.1, eps, 1.0);
    let ws = NonlinearWorkspace::new(&g, &p);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let phi = Trig::random(&mut rng, 4, 0.0);
    let l = phi.lap().samples(n);
    let comp = |i: usize| -> Vec<f64> {
        let d = phi.dx(i).samples(n);
        (0..n * n).map(|x| -eps * l[x] * d[x]).collect()
    };
    let oracle = project([dft_band(n, &comp(0)), dft_band(n, &comp(1))]);
    let field = vec![phi.to_field(&g)];
    for lib in [
        ws.korteweg_convective_form(&field).unwrap(),
        ws.korteweg_stress_form(&field).unwrap(),
    ] {
        for i in 0..2 {
            let e = mismatch(&g, &lib.components[i], &oracle[i]);
            assert!(e <= 1e-10, "component {i}: {e:e}");
        }
    }
}

#[test]
fn energy_matches_exact_integrals() {
    // n = 32 integrates the quartic potential of a degree-4 polynomial exactly
    let n = 32;
    let g = Grid::new(n).unwrap();
    let (alpha, eps, gamma3) = (0.3, 0.25, 1.3);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let u = Trig::random(&mut rng, 3, 0.0).curl();
    let phi = Trig::random(&mut rng, 4, 0.3);
    let area = 4.0 * PI * PI;
    let parseval = |t: &Trig, w: &dyn Fn(f64) -> f64| {
        area * t
            .0
            .iter()
            .map(|&(a, b, c)| w((a * a + b * b) as f64) * c.norm_sqr())
            .sum::<f64>()
    };
    // exact ∫F by a finer tensor-product trapezoid rule
    let fine = 64;
    let fs = phi.samples(fine);
    let big_f: f64 = fs
        .iter()
        .map(|r| gamma3 * (r * r - 1.0).powi(2))
        .sum::<f64>()
        * area
        / (fine * fine) as f64;
    let grad_sq = parseval(&phi, &|s| s);
    for (preset, theta) in [(Preset::NseAc, 0.0), (Preset::SbmAc, 1.0), (Preset::NsAcAlpha, 1.0)] {
        let p = preset.params(alpha, 0.1, eps, gamma3);
        let kin: f64 = u
            .iter()
            .map(|c| parseval(c, &|s| (1.0 + alpha * alpha * s).powf(-theta)))
            .sum::<f64>()
            * 0.5;
        let expected = kin + 0.5 * eps * grad_sq + big_f / eps;
        let state = State::new(&g, 0.0, vec_field(&g, &u), vec![phi.to_field(&g)]).unwrap();
        let got = energy(&g, &p, &state);
        assert!(
            (got - expected).abs() <= 1e-10 * expected.abs(),
            "{preset}: {got} vs {expected}"
        );
    }
    let mut p = Preset::NseAc.params(alpha, 0.1, eps, gamma3);
    p.order_param = OrderParam::Vector(2);
    let d2 = Trig::random(&mut rng, 3, 0.0);
    let s1 = phi.samples(fine);
    let s2 = d2.samples(fine);
    let big_f_vec: f64 = s1
        .iter()
        .zip(&s2)
        .map(|(a, b)| gamma3 * (a * a + b * b - 1.0).powi(2))
        .sum::<f64>()
        * area
        / (fine * fine) as f64;
    let kin = 0.5 * u.iter().map(|c| parseval(c, &|_| 1.0)).sum::<f64>();
    let expected = kin + 0.5 * eps * (grad_sq + parseval(&d2, &|s| s)) + eps * big_f_vec;
    let state = State::new(
        &g,
        0.0,
        vec_field(&g, &u),
        vec![phi.to_field(&g), d2.to_field(&g)],
    )
    .unwrap();
    let got = energy(&g, &p, &state);
    assert!((got - expected).abs() <= 1e-10 * expected, "{got} vs {expected}");
}
