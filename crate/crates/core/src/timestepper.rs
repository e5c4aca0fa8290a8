//! Semi-implicit time integration.
//!
//! All diagonal linear operators (`A₀`, `A₁` and the stabilization shift
//! `σ`) are treated implicitly; advection, transport, the Korteweg force,
//! the potential force and external forcing are explicit. Pressure never
//! appears: every momentum term is Leray-projected.

use std::str::FromStr;

use crate::diagnostics::{DiagRecord, Diagnostics};
use crate::error::{Error, Result};
use crate::models::{a0_symbol, ModelParams, OrderParam};
use crate::nonlinear::{NonlinearWorkspace, OrderField};
use crate::spectral::{
    apply_table, dealias, leray_project, Grid, SpectralField, SpectralScalar, SpectralVector,
};

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: SpectralVector,
    pub phi: OrderField,
}

impl State {
    /// Build a state, projecting `u` onto dealiased divergence-free fields
    /// and dealiasing `phi`.
    pub fn new(grid: &Grid, t: f64, u: SpectralVector, phi: OrderField) -> Result<Self> {
        u.check_grid(grid)?;
        phi.check_grid(grid)?;
        Ok(Self {
            t,
            u: leray_project(grid, &dealias(grid, &u)),
            phi: dealias(grid, &phi),
        })
    }

    /// `u = 0` and every order-parameter component equal to `value`.
    pub fn uniform(grid: &Grid, order: OrderParam, value: f64) -> Self {
        let mut c = SpectralScalar::zeros(grid);
        c.coeffs_mut()[0].re = value;
        Self {
            t: 0.0,
            u: SpectralVector::zeros(grid),
            phi: vec![c; order.components()],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.is_finite() && self.phi.iter().all(SpectralScalar::is_finite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    ImexEuler,
    ImexBdf2,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "imex_euler" | "euler" => Ok(Self::ImexEuler),
            "imex_bdf2" | "bdf2" => Ok(Self::ImexBdf2),
            _ => Err(Error::InvalidParam(format!("unknown scheme `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub sigma_stab: f64,
    /// Drop advection, transport, Korteweg and potential terms, keeping
    /// only the linear operators and external sources.
    pub linear_only: bool,
}

impl StepperConfig {
    /// Config with the default stabilization for `p`.
    pub fn new(dt: f64, scheme: Scheme, p: &ModelParams) -> Self {
        Self {
            dt,
            scheme,
            sigma_stab: default_sigma(p),
            linear_only: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParam("dt must be > 0".into()));
        }
        if !(self.sigma_stab >= 0.0 && self.sigma_stab.is_finite()) {
            return Err(Error::InvalidParam("sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Stabilization shift covering `|f′|` on `[−1.2, 1.2]` with a factor of
/// about 1.2 to spare: `16 γ₃` times the reaction rate.
pub fn default_sigma(p: &ModelParams) -> f64 {
    16.0 * p.gamma3 * p.reaction_rate()
}

/// Time dependence of the momentum forcing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Envelope {
    Zero,
    Constant,
    /// `(1 + t)^{−(2+δ)/2}`
    PowerDecay { delta: f64 },
}

impl Envelope {
    pub fn factor(&self, t: f64) -> f64 {
        match *self {
            Envelope::Zero => 0.0,
            Envelope::Constant => 1.0,
            Envelope::PowerDecay { delta } => (1.0 + t).powf(-(2.0 + delta) / 2.0),
        }
    }

    /// `∫_t^∞ factor(s)² ds`; infinite for a constant envelope.
    pub fn tail_integral(&self, t: f64) -> f64 {
        match *self {
            Envelope::Zero => 0.0,
            Envelope::Constant => f64::INFINITY,
            Envelope::PowerDecay { delta } => (1.0 + t).powf(-(1.0 + delta)) / (1.0 + delta),
        }
    }
}

/// Source terms added to the right-hand sides.
pub trait Forcing {
    fn momentum(&self, t: f64) -> Option<SpectralVector>;

    fn order_param(&self, _t: f64) -> Option<OrderField> {
        None
    }
}

/// `g(t) = g₀ · envelope(t)` with a divergence-free profile `g₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForcingSpec {
    pub g0: SpectralVector,
    pub envelope: Envelope,
}

impl ForcingSpec {
    pub fn new(grid: &Grid, g0: SpectralVector, envelope: Envelope) -> Result<Self> {
        g0.check_grid(grid)?;
        Ok(Self {
            g0: leray_project(grid, &dealias(grid, &g0)),
            envelope,
        })
    }

    pub fn zero(grid: &Grid) -> Self {
        Self {
            g0: SpectralVector::zeros(grid),
            envelope: Envelope::Zero,
        }
    }
}

impl Forcing for ForcingSpec {
    fn momentum(&self, t: f64) -> Option<SpectralVector> {
        match self.envelope {
            Envelope::Zero => None,
            env => Some(self.g0.scaled(env.factor(t))),
        }
    }
}

struct History {
    t: f64,
    u: SpectralVector,
    phi: OrderField,
    rhs_u: SpectralVector,
    rhs_phi: OrderField,
}

/// Advances a [`State`] for one model on one grid. Keeps the previous
/// level for the two-step scheme.
pub struct Stepper {
    grid: Grid,
    params: ModelParams,
    cfg: StepperConfig,
    ws: NonlinearWorkspace,
    a0: Vec<f64>,
    neg_lap: Vec<f64>,
    history: Option<History>,
}

impl Stepper {
    pub fn new(grid: &Grid, params: &ModelParams, cfg: &StepperConfig) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        let neg_lap = (0..grid.len())
            .map(|i| {
                let (k1, k2) = grid.diff_wavenumber(i);
                k1 * k1 + k2 * k2
            })
            .collect();
        Ok(Self {
            grid: grid.clone(),
            params: params.clone(),
            cfg: cfg.clone(),
            ws: NonlinearWorkspace::new(grid, params),
            a0: a0_symbol(params).tabulate(grid),
            neg_lap,
            history: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    pub fn workspace(&self) -> &NonlinearWorkspace {
        &self.ws
    }

    /// Forget the previous level; the next two-step update restarts with
    /// an Euler step.
    pub fn reset(&mut self) {
        self.history = None;
    }

    /// Explicit right-hand sides at `state`.
    fn explicit(&self, state: &State, forcing: &dyn Forcing) -> Result<(SpectralVector, OrderField)> {
        let g = &self.grid;
        let mut rhs_u = SpectralVector::zeros(g);
        let mut rhs_phi: OrderField = vec![SpectralScalar::zeros(g); state.phi.len()];
        if !self.cfg.linear_only {
            rhs_u.add_scaled(&self.ws.b0(&state.u)?, -1.0);
            if !state.phi.is_empty() {
                rhs_u.add_scaled(&self.ws.korteweg_convective_form(&state.phi)?, 1.0);
                let transport = self.ws.b1(&state.u, &state.phi)?;
                let reaction = self.ws.potential_force(&state.phi)?;
                let rate = self.params.reaction_rate();
                for ((r, b), f) in rhs_phi.iter_mut().zip(&transport).zip(&reaction) {
                    r.add_scaled(b, -1.0);
                    r.add_scaled(f, -rate);
                }
            }
        }
        if let Some(gm) = forcing.momentum(state.t) {
            rhs_u.add_scaled(&leray_project(g, &dealias(g, &gm)), 1.0);
        }
        if let Some(src) = forcing.order_param(state.t) {
            for (r, s) in rhs_phi.iter_mut().zip(&src) {
                r.add_scaled(&dealias(g, s), 1.0);
            }
        }
        Ok((rhs_u, rhs_phi))
    }

    pub fn step(&mut self, state: &State, forcing: &dyn Forcing) -> Result<State> {
        state.u.check_grid(&self.grid)?;
        state.phi.check_grid(&self.grid)?;
        let dt = self.cfg.dt;
        let sigma = self.cfg.sigma_stab;
        let diff = self.params.diffusion_rate();
        let (rhs_u, rhs_phi) = self.explicit(state, forcing)?;

        let prev = match (&self.cfg.scheme, self.history.take()) {
            (Scheme::ImexBdf2, Some(h))
                if (h.t + dt - state.t).abs() <= 1e-9 * dt.max(state.t.abs())
                    && h.phi.len() == state.phi.len() =>
            {
                Some(h)
            }
            _ => None,
        };

        let t_next = state.t + dt;
        let (u, phi) = match &prev {
            None => {
                // (1 + dt L) x' = x + dt N
                let mut u = state.u.clone();
                u.add_scaled(&rhs_u, dt);
                let u = u.map_modes(|i, c| c / (1.0 + dt * self.a0[i]));
                let phi = state
                    .phi
                    .iter()
                    .zip(&rhs_phi)
                    .map(|(p, r)| {
                        let mut x = p.scaled(1.0 + dt * sigma);
                        x.add_scaled(r, dt);
                        x.map_modes(|i, c| c / (1.0 + dt * (diff * self.neg_lap[i] + sigma)))
                    })
                    .collect::<Vec<_>>();
                (u, phi)
            }
            Some(h) => {
                // (3/2 + dt L) x' = 2x − x⁻/2 + dt(2N − N⁻) + dt σ(2x − x⁻)
                let mut u = state.u.scaled(2.0);
                u.add_scaled(&h.u, -0.5);
                u.add_scaled(&rhs_u, 2.0 * dt);
                u.add_scaled(&h.rhs_u, -dt);
                let u = u.map_modes(|i, c| c / (1.5 + dt * self.a0[i]));
                let phi = state
                    .phi
                    .iter()
                    .zip(&h.phi)
                    .zip(rhs_phi.iter().zip(&h.rhs_phi))
                    .map(|((p, pm), (r, rm))| {
                        let mut x = p.scaled(2.0 + 2.0 * dt * sigma);
                        x.add_scaled(pm, -0.5 - dt * sigma);
                        x.add_scaled(r, 2.0 * dt);
                        x.add_scaled(rm, -dt);
                        x.map_modes(|i, c| c / (1.5 + dt * (diff * self.neg_lap[i] + sigma)))
                    })
                    .collect::<Vec<_>>();
                (u, phi)
            }
        };

        let next = State { t: t_next, u, phi };
        if !next.is_finite() {
            self.history = None;
            return Err(Error::BlowUp { t: t_next });
        }
        if self.cfg.scheme == Scheme::ImexBdf2 {
            self.history = Some(History {
                t: state.t,
                u: state.u.clone(),
                phi: state.phi.clone(),
                rhs_u,
                rhs_phi,
            });
        }
        Ok(next)
    }
}

/// Completed run: final state and sampled diagnostics.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub state: State,
    pub records: Vec<DiagRecord>,
}

/// Run aborted by a non-finite state; diagnostics up to the failure are
/// retained.
#[derive(Clone, Debug)]
pub struct RunFailure {
    pub t: f64,
    pub records: Vec<DiagRecord>,
    pub error_message: String,
}

/// Advance `state0` to `t_end`, sampling diagnostics at the initial state,
/// every `sample_every` steps, and at the final step.
pub fn run(
    stepper: &mut Stepper,
    state0: State,
    forcing: &dyn Forcing,
    t_end: f64,
    sample_every: usize,
) -> std::result::Result<RunOutput, RunFailure> {
    run_with(stepper, state0, forcing, t_end, sample_every, |_, _| {})
}

/// As [`run`], calling `observe(step_index, state)` after every step.
pub fn run_with(
    stepper: &mut Stepper,
    state0: State,
    forcing: &dyn Forcing,
    t_end: f64,
    sample_every: usize,
    mut observe: impl FnMut(usize, &State),
) -> std::result::Result<RunOutput, RunFailure> {
    let fail = |t: f64, records: Vec<DiagRecord>, e: Error| RunFailure {
        t,
        records,
        error_message: e.to_string(),
    };
    let dt = stepper.config().dt;
    if t_end < state0.t {
        return Err(fail(
            state0.t,
            Vec::new(),
            Error::InvalidParam("t_end precedes the initial time".into()),
        ));
    }
    let steps = ((t_end - state0.t) / dt).round() as usize;
    if steps == 0 {
        return Ok(RunOutput {
            state: state0,
            records: Vec::new(),
        });
    }
    let every = sample_every.max(1);
    let diag = Diagnostics::new(stepper.grid(), stepper.params());
    stepper.reset();
    let t0 = state0.t;
    let mut records = vec![diag.record(&state0, None, forcing, dt)];
    let mut state = state0;
    for k in 1..=steps {
        let mut next = match stepper.step(&state, forcing) {
            Ok(s) => s,
            Err(e) => return Err(fail(state.t + dt, records, e)),
        };
        next.t = t0 + k as f64 * dt;
        if k % every == 0 || k == steps {
            records.push(diag.record(&next, Some(&state), forcing, dt));
        }
        observe(k, &next);
        state = next;
    }
    Ok(RunOutput { state, records })
}

/// Advective time-step bound `0.4 Δx / max(1, max|Nu|)`.
pub fn cfl_suggest(state: &State, grid: &Grid, p: &ModelParams) -> f64 {
    let nu = apply_table(&state.u, &crate::models::n_symbol(p).tabulate(grid));
    let [a, b] = grid.inverse_vector(&nu);
    let vmax = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x * x + y * y).sqrt())
        .fold(0.0, f64::max);
    0.4 * grid.spacing() / vmax.max(1.0)
}
