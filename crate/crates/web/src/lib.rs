//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Everything here is plain Rust as well, so the same entry points are
//! exercised natively by the crate's tests.

use regalpha::diagnostics::Diagnostics;
use regalpha::harness::init::{random_order_param, random_velocity};
use regalpha::models::{
    a0_symbol, energy_pairing_symbol, m_symbol, n_symbol, ModelParams, Preset,
};
use regalpha::nonlinear::NonlinearWorkspace;
use regalpha::spectral::{
    apply_symbol, inner, l2_norm, partial, sobolev_norm, Grid, SpectralVector,
};
use regalpha::timestepper::{cfl_suggest, ForcingSpec, Scheme, State, Stepper, StepperConfig};
use wasm_bindgen::prelude::*;

const GAMMA3: f64 = 1.0;
const DEMO_EPSILON: f64 = 0.2;

fn parse_preset(name: &str) -> Result<Preset, String> {
    name.parse::<Preset>().map_err(|e| e.to_string())
}

fn model(preset: &str, alpha: f64, nu: f64, epsilon: f64) -> Result<ModelParams, String> {
    let p = parse_preset(preset)?.params(alpha, nu, epsilon, GAMMA3);
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

/// A running simulation with zero forcing and the IMEX-BDF2 scheme.
#[wasm_bindgen]
pub struct Simulation {
    grid: Grid,
    stepper: Stepper,
    diagnostics: Diagnostics,
    forcing: ForcingSpec,
    state: State,
    dt: f64,
}

#[wasm_bindgen]
impl Simulation {
    /// Random band-limited initial data from `seed`. The time step is the
    /// advective bound of the initial velocity.
    #[wasm_bindgen(constructor)]
    pub fn new(
        preset: &str,
        n: usize,
        alpha: f64,
        nu: f64,
        epsilon: f64,
        seed: u32,
    ) -> Result<Simulation, String> {
        let p = model(preset, alpha, nu, epsilon)?;
        let grid = Grid::new(n).map_err(|e| e.to_string())?;
        let seed = u64::from(seed);
        let u = random_velocity(&grid, seed, 0.5);
        let phi = random_order_param(&grid, seed, 1, 0.9, 0.0);
        let state = State::new(&grid, 0.0, u, phi).map_err(|e| e.to_string())?;
        let dt = cfl_suggest(&state, &grid, &p).min(0.01);
        let cfg = StepperConfig::new(dt, Scheme::ImexBdf2, &p);
        let stepper = Stepper::new(&grid, &p, &cfg).map_err(|e| e.to_string())?;
        Ok(Simulation {
            diagnostics: Diagnostics::new(&grid, &p),
            forcing: ForcingSpec::zero(&grid),
            grid,
            stepper,
            state,
            dt,
        })
    }

    /// Advance `steps` time steps and return the new time.
    pub fn step(&mut self, steps: u32) -> Result<f64, String> {
        for _ in 0..steps {
            let next = self
                .stepper
                .step(&self.state, &self.forcing)
                .map_err(|e| e.to_string())?;
            self.state = next;
        }
        Ok(self.state.t)
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn energy(&self) -> f64 {
        self.diagnostics.energy(&self.state)
    }

    pub fn max_abs_phi(&self) -> f64 {
        self.diagnostics.max_abs_phi(&self.state)
    }

    /// Order parameter on the grid, row-major in `(x1, x2)`.
    pub fn phase(&self) -> Vec<f64> {
        self.grid.inverse(&self.state.phi[0])
    }

    /// Vorticity `∂₁u₂ − ∂₂u₁` on the grid.
    pub fn vorticity(&self) -> Vec<f64> {
        let u: &SpectralVector = &self.state.u;
        let mut w = partial(&self.grid, &u.components[1], 0);
        w.add_scaled(&partial(&self.grid, &u.components[0], 1), -1.0);
        self.grid.inverse(&w)
    }
}

/// Operator symbols at `|k| = 0, 1, …, kmax`, flattened as rows of
/// `[k, A₀, M, N, E]`.
#[wasm_bindgen]
pub fn symbol_curves(preset: &str, alpha: f64, nu: f64, kmax: u32) -> Result<Vec<f64>, String> {
    let p = model(preset, alpha, nu, DEMO_EPSILON)?;
    let (a0, m, nn, e) = (a0_symbol(&p), m_symbol(&p), n_symbol(&p), energy_pairing_symbol(&p));
    Ok((0..=kmax)
        .flat_map(|k| {
            let s = f64::from(k * k);
            [f64::from(k), a0.eval(s), m.eval(s), nn.eval(s), e.eval(s)]
        })
        .collect())
}

/// Relative sizes of the quantities that vanish exactly in the continuum
/// model, for one random state on a 16² grid: `[⟨B₀(u), Eu⟩, ⟨B₁(u, φ), φ⟩,
/// Korteweg stress form minus convective form]`.
#[wasm_bindgen]
pub fn cancellation_check(preset: &str, seed: u32) -> Result<Vec<f64>, String> {
    let p = model(preset, 0.3, 0.1, DEMO_EPSILON)?;
    let g = Grid::new(16).map_err(|e| e.to_string())?;
    let seed = u64::from(seed);
    let u = random_velocity(&g, seed, 1.0);
    let phi = random_order_param(&g, seed, 1, 0.9, 0.0);
    let ws = NonlinearWorkspace::new(&g, &p);
    let err = |e: regalpha::Error| e.to_string();

    let eu = apply_symbol(&g, &u, &energy_pairing_symbol(&p));
    let b0 = ws.b0(&u).map_err(err)?;
    let advective = inner(&b0, &eu).abs() / (l2_norm(&u) * sobolev_norm(&g, &u, 1.0) * l2_norm(&eu));

    let b1 = ws.b1(&u, &phi).map_err(err)?;
    let transport =
        inner(&b1, &phi).abs() / (l2_norm(&u) * sobolev_norm(&g, &phi, 1.0) * l2_norm(&phi));

    let stress = ws.korteweg_stress_form(&phi).map_err(err)?;
    let convective = ws.korteweg_convective_form(&phi).map_err(err)?;
    let korteweg = l2_norm(&stress.sub(&convective)) / l2_norm(&stress);

    Ok(vec![advective, transport, korteweg])
}
