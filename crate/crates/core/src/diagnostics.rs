//! Energies, residuals of the continuous identities and decay-rate fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    a0_symbol, energy_pairing_symbol, potential_big_f, potential_big_f_vec, ModelParams,
    OrderParam,
};
use crate::nonlinear::{NonlinearWorkspace, OrderField};
use crate::spectral::{
    apply_table, gradient, inner, l2_norm, laplacian, sobolev_norm, Grid, SpectralVector,
};
use crate::timestepper::{Forcing, State};

/// One diagnostics sample. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagRecord {
    pub t: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub dirichlet: f64,
    pub potential: f64,
    pub mu_norm: f64,
    pub u_neg_norm: f64,
    pub max_abs_phi: f64,
    pub upsilon: f64,
    pub energy_residual: f64,
}

impl DiagRecord {
    pub const HEADER: [&'static str; 10] = [
        "t",
        "energy",
        "kinetic",
        "dirichlet",
        "potential",
        "mu_norm",
        "u_neg_norm",
        "max_abs_phi",
        "upsilon",
        "energy_residual",
    ];
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyParts {
    pub kinetic: f64,
    pub dirichlet: f64,
    pub potential: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.dirichlet + self.potential
    }
}

/// Diagnostics for one model on one grid.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    grid: Grid,
    params: ModelParams,
    ws: NonlinearWorkspace,
    pairing: Vec<f64>,
    a0: Vec<f64>,
}

impl Diagnostics {
    pub fn new(grid: &Grid, params: &ModelParams) -> Self {
        Self {
            grid: grid.clone(),
            params: params.clone(),
            ws: NonlinearWorkspace::new(grid, params),
            pairing: energy_pairing_symbol(params).tabulate(grid),
            a0: a0_symbol(params).tabulate(grid),
        }
    }

    fn is_vector(&self) -> bool {
        matches!(self.params.order_param, OrderParam::Vector(_))
    }

    /// `A₁φ + f(φ)` with `A₁ = −Δ`.
    fn equilibrium_operator(&self, phi: &OrderField) -> Result<OrderField> {
        let mut out = laplacian(&self.grid, phi);
        for c in &mut out {
            *c = c.scaled(-1.0);
        }
        for (o, f) in out.iter_mut().zip(self.ws.potential_force(phi)?) {
            o.add_scaled(&f, 1.0);
        }
        Ok(out)
    }

    /// `μ = −εΔφ + ε⁻¹f(φ)`; for a director `μ = ε(−Δd + f(d))`.
    pub fn chemical_potential(&self, phi: &OrderField) -> Result<OrderField> {
        let eps = self.params.epsilon;
        let mut mu = laplacian(&self.grid, phi);
        let (lap_coef, f_coef) = if self.is_vector() {
            (-eps, eps)
        } else {
            (-eps, 1.0 / eps)
        };
        for c in &mut mu {
            *c = c.scaled(lap_coef);
        }
        for (m, f) in mu.iter_mut().zip(self.ws.potential_force(phi)?) {
            m.add_scaled(&f, f_coef);
        }
        Ok(mu)
    }

    /// Factor `m` in the dissipation `m‖μ‖²`.
    fn mobility(&self) -> f64 {
        if self.is_vector() {
            self.params.el_gamma / self.params.epsilon
        } else {
            1.0
        }
    }

    pub fn energy_parts(&self, state: &State) -> EnergyParts {
        let g = &self.grid;
        let eps = self.params.epsilon;
        let kinetic = 0.5 * inner(&state.u, &apply_table(&state.u, &self.pairing));
        let grad_sq: f64 = state
            .phi
            .iter()
            .map(|c| l2_norm(&gradient(g, c)).powi(2))
            .sum();
        let dirichlet = 0.5 * eps * grad_sq;
        let potential = if state.phi.is_empty() {
            0.0
        } else {
            let samples: Vec<Vec<f64>> = state.phi.iter().map(|c| g.inverse(c)).collect();
            let integral = if self.is_vector() {
                let mut d = vec![0.0; samples.len()];
                (0..g.len())
                    .map(|x| {
                        for (dc, s) in d.iter_mut().zip(&samples) {
                            *dc = s[x];
                        }
                        potential_big_f_vec(&self.params, &d)
                    })
                    .sum::<f64>()
            } else {
                samples[0]
                    .iter()
                    .map(|&r| potential_big_f(&self.params, r))
                    .sum::<f64>()
            } * g.cell_area();
            if self.is_vector() {
                eps * integral
            } else {
                integral / eps
            }
        };
        EnergyParts {
            kinetic,
            dirichlet,
            potential,
        }
    }

    pub fn energy(&self, state: &State) -> f64 {
        self.energy_parts(state).total()
    }

    /// `½⟨u, Eu⟩`
    pub fn pairing_energy(&self, u: &SpectralVector) -> f64 {
        0.5 * inner(u, &apply_table(u, &self.pairing))
    }

    /// Defect of the energy identity
    /// `d𝓔/dt + ⟨A₀u, Eu⟩ + m‖μ‖² = ⟨g, Eu⟩` over one step, with the
    /// dissipation at the new state and the forcing at the old one.
    pub fn energy_law_residual(
        &self,
        prev: &State,
        next: &State,
        dt: f64,
        forcing: &dyn Forcing,
    ) -> Result<f64> {
        let de = (self.energy(next) - self.energy(prev)) / dt;
        let eu = apply_table(&next.u, &self.pairing);
        let viscous = inner(&apply_table(&next.u, &self.a0), &eu);
        let mu = self.chemical_potential(&next.phi)?;
        let mu_sq: f64 = mu.iter().map(|c| l2_norm(c).powi(2)).sum();
        let work = forcing
            .momentum(prev.t)
            .map_or(0.0, |gm| inner(&gm, &apply_table(&prev.u, &self.pairing)));
        Ok((de + viscous + self.mobility() * mu_sq - work).abs())
    }

    /// `Υ = ‖u‖_{θ−θ₂} + ‖A₁φ + f(φ)‖_{L²}`.
    pub fn stationarity_residual(&self, state: &State) -> Result<f64> {
        let p = &self.params;
        let flow = sobolev_norm(&self.grid, &state.u, p.theta - p.theta2);
        let phase = if state.phi.is_empty() {
            0.0
        } else {
            l2_norm(&self.equilibrium_operator(&state.phi)?)
        };
        Ok(flow + phase)
    }

    /// `max_x |φ|`, or `max_x |d|` for a director; zero without an order
    /// parameter.
    pub fn max_abs_phi(&self, state: &State) -> f64 {
        let g = &self.grid;
        if state.phi.is_empty() {
            return 0.0;
        }
        let samples: Vec<Vec<f64>> = state.phi.iter().map(|c| g.inverse(c)).collect();
        (0..g.len())
            .map(|x| samples.iter().map(|s| s[x] * s[x]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// `max_x |φ| − 1`.
    pub fn max_principle_slack(&self, state: &State) -> f64 {
        self.max_abs_phi(state) - 1.0
    }

    /// Full sample at `state`; `prev` (one step earlier) enables the
    /// energy-law residual, otherwise it is reported as zero.
    pub fn record(&self, state: &State, prev: Option<&State>, forcing: &dyn Forcing, dt: f64) -> DiagRecord {
        let parts = self.energy_parts(state);
        let nan_on_err = |r: Result<f64>| r.unwrap_or(f64::NAN);
        let mu_norm = nan_on_err(
            self.chemical_potential(&state.phi)
                .map(|mu| mu.iter().map(|c| l2_norm(c).powi(2)).sum::<f64>().sqrt()),
        );
        DiagRecord {
            t: state.t,
            energy: parts.total(),
            kinetic: parts.kinetic,
            dirichlet: parts.dirichlet,
            potential: parts.potential,
            mu_norm,
            u_neg_norm: sobolev_norm(&self.grid, &state.u, -self.params.theta2),
            max_abs_phi: self.max_abs_phi(state),
            upsilon: nan_on_err(self.stationarity_residual(state)),
            energy_residual: prev.map_or(0.0, |p| {
                nan_on_err(self.energy_law_residual(p, state, dt, forcing))
            }),
        }
    }
}

/// Chemical potential of `phi` for model `p` on `grid`.
pub fn chemical_potential(grid: &Grid, p: &ModelParams, phi: &OrderField) -> Result<OrderField> {
    Diagnostics::new(grid, p).chemical_potential(phi)
}

pub fn energy(grid: &Grid, p: &ModelParams, state: &State) -> f64 {
    Diagnostics::new(grid, p).energy(state)
}

pub fn stationarity_residual(grid: &Grid, p: &ModelParams, state: &State) -> Result<f64> {
    Diagnostics::new(grid, p).stationarity_residual(state)
}

pub fn max_principle_slack(grid: &Grid, p: &ModelParams, state: &State) -> f64 {
    Diagnostics::new(grid, p).max_principle_slack(state)
}

/// Algebraic decay exponent `ξ` of a series `(t, value)`, from the
/// least-squares slope of `ln value` against `ln(1 + t)` over the trailing
/// half of the samples.
pub fn decay_rate_fit(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 10 {
        return Err(Error::Fit(format!(
            "need at least 10 samples, got {}",
            series.len()
        )));
    }
    if let Some(&(t, v)) = series.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::Fit(format!("non-positive value {v} at t = {t}")));
    }
    let tail = &series[series.len() / 2..];
    let pts: Vec<(f64, f64)> = tail.iter().map(|&(t, v)| ((1.0 + t).ln(), v.ln())).collect();
    let m = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    if sxx == 0.0 {
        return Err(Error::Fit("degenerate time axis".into()));
    }
    Ok(-sxy / sxx)
}
