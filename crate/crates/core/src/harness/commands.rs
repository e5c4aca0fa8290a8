//! Experiment drivers behind the `regalpha` subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use super::config::{ConfigError, RunConfig};
use super::init::{random_forcing_profile, random_order_param, random_velocity};
use super::snapshot::{snapshot_read, snapshot_write, Snapshot, SnapshotError};
use crate::diagnostics::{decay_rate_fit, DiagRecord, Diagnostics};
use crate::models::{ModelParams, Preset};
use crate::spectral::{l2_norm, sobolev_norm, Grid, SpectralVector};
use crate::timestepper::{
    cfl_suggest, run_with, Envelope, ForcingSpec, State, Stepper, StepperConfig,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("numerical blow-up at t = {t}: {message}")]
    BlowUp { t: f64, message: String },
}

impl HarnessError {
    /// Process exit status: 2 for a numerical blow-up, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::BlowUp { .. } => 2,
            _ => 1,
        }
    }
}

type HResult<T> = std::result::Result<T, HarnessError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn create_dir(path: &Path) -> HResult<()> {
    fs::create_dir_all(path).map_err(io_err(path))
}

/// Writes `records` as CSV with the [`DiagRecord`] header.
pub fn write_diagnostics(path: &Path, records: &[DiagRecord]) -> HResult<()> {
    let csv_err = |source| HarnessError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    if records.is_empty() {
        w.write_record(DiagRecord::HEADER).map_err(csv_err)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Grid, initial state, forcing and time step shared by every run derived
/// from one configuration.
#[derive(Clone, Debug)]
pub struct Setup {
    pub config: RunConfig,
    pub grid: Grid,
    pub state0: State,
    pub forcing: ForcingSpec,
    pub dt: f64,
}

impl Setup {
    pub fn stepper_config(&self, model: &ModelParams) -> StepperConfig {
        let mut cfg = StepperConfig::new(self.dt, self.config.scheme, model);
        if let Some(s) = self.config.sigma {
            cfg.sigma_stab = s;
        }
        cfg
    }

    pub fn stepper(&self, model: &ModelParams) -> HResult<Stepper> {
        Ok(Stepper::new(&self.grid, model, &self.stepper_config(model))?)
    }
}

/// Builds the initial condition and forcing described by `config`.
pub fn prepare(config: &RunConfig) -> HResult<Setup> {
    let grid = Grid::new(config.n)?;
    let components = config.model.order_param.components();
    let state0 = match &config.initial_snapshot {
        Some(path) => snapshot_read(path, &grid, components)?,
        None => State::new(
            &grid,
            0.0,
            random_velocity(&grid, config.seed, config.u_amplitude),
            random_order_param(
                &grid,
                config.seed,
                components,
                config.phi_amplitude,
                config.phi_mean,
            ),
        )?,
    };
    let forcing = match config.forcing.envelope {
        Envelope::Zero => ForcingSpec::zero(&grid),
        envelope => {
            let g0 = match &config.forcing.profile_snapshot {
                Some(path) => {
                    let snap = Snapshot::read(path)?;
                    if snap.n != grid.n() {
                        return Err(SnapshotError::GridMismatch {
                            snapshot: snap.n,
                            config: grid.n(),
                        }
                        .into());
                    }
                    if snap.components.len() < 2 {
                        return Err(SnapshotError::ComponentMismatch {
                            expected: 2,
                            found: snap.components.len(),
                        }
                        .into());
                    }
                    SpectralVector::new(
                        grid.forward(&snap.components[0])?,
                        grid.forward(&snap.components[1])?,
                    )
                }
                None => random_forcing_profile(&grid, config.seed, config.forcing.amplitude),
            };
            ForcingSpec::new(&grid, g0, envelope)?
        }
    };
    let dt = config
        .dt
        .unwrap_or_else(|| cfl_suggest(&state0, &grid, &config.model));
    Ok(Setup {
        config: config.clone(),
        grid,
        state0,
        forcing,
        dt,
    })
}

/// Outcome of a completed `run`.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub steps: usize,
    pub dt: f64,
    pub final_state: State,
    pub records: Vec<DiagRecord>,
    pub csv_path: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

struct Member {
    state: State,
    records: Vec<DiagRecord>,
    snapshots: Vec<PathBuf>,
    pairing: Vec<f64>,
}

/// Runs `model` from the shared setup into `out`, writing
/// `diagnostics.csv` (kept even on blow-up). With `write_snapshots` it also
/// writes `final.rgac` and, when `snapshot_every > 0`, periodic snapshots.
fn run_member(setup: &Setup, model: &ModelParams, out: &Path, write_snapshots: bool) -> HResult<Member> {
    create_dir(out)?;
    let mut stepper = setup.stepper(model)?;
    let diag = Diagnostics::new(&setup.grid, model);
    let cfg = &setup.config;
    let every = cfg.snapshot_every;
    let mut snapshots = Vec::new();
    let mut snap_err = None;
    let mut pairing = vec![diag.pairing_energy(&setup.state0.u)];
    let result = run_with(
        &mut stepper,
        setup.state0.clone(),
        &setup.forcing,
        cfg.t_end,
        cfg.sample_every,
        |k, s| {
            if k % cfg.sample_every == 0 {
                pairing.push(diag.pairing_energy(&s.u));
            }
            if write_snapshots && every > 0 && k % every == 0 && snap_err.is_none() {
                let path = out.join(format!("snapshot_{k:08}.rgac"));
                match snapshot_write(&path, &setup.grid, s) {
                    Ok(()) => snapshots.push(path),
                    Err(e) => snap_err = Some(e),
                }
            }
        },
    );
    let csv_path = out.join("diagnostics.csv");
    match result {
        Ok(output) => {
            write_diagnostics(&csv_path, &output.records)?;
            if let Some(e) = snap_err {
                return Err(e.into());
            }
            pairing.push(diag.pairing_energy(&output.state.u));
            if write_snapshots {
                let path = out.join("final.rgac");
                snapshot_write(&path, &setup.grid, &output.state)?;
                snapshots.push(path);
            }
            Ok(Member {
                state: output.state,
                records: output.records,
                snapshots,
                pairing,
            })
        }
        Err(failure) => {
            write_diagnostics(&csv_path, &failure.records)?;
            Err(HarnessError::BlowUp {
                t: failure.t,
                message: failure.error_message,
            })
        }
    }
}

fn step_count(setup: &Setup) -> usize {
    (setup.config.t_end / setup.dt).round() as usize
}

/// Single run of the configured model.
pub fn cmd_run(config: &RunConfig) -> HResult<RunSummary> {
    let setup = prepare(config)?;
    let member = run_member(&setup, &config.model, &config.output, true)?;
    Ok(RunSummary {
        steps: step_count(&setup),
        dt: setup.dt,
        final_state: member.state,
        records: member.records,
        csv_path: config.output.join("diagnostics.csv"),
        snapshots: member.snapshots,
    })
}

/// `‖u_a − u_b‖_{L²}` and `‖φ_a − φ_b‖_{H¹}`.
pub fn state_errors(grid: &Grid, a: &State, b: &State) -> (f64, f64) {
    let du = l2_norm(&a.u.sub(&b.u));
    let dphi = a
        .phi
        .iter()
        .zip(&b.phi)
        .map(|(x, y)| sobolev_norm(grid, &x.sub(y), 1.0).powi(2))
        .sum::<f64>()
        .sqrt();
    (du, dphi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// The swept parameter value (α or ν).
    pub value: f64,
    pub u_err: f64,
    pub phi_err: f64,
    /// `ok`, or `blow_up` with errors reported as NaN.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    /// Column name of the swept parameter.
    pub parameter: &'static str,
    pub rows: Vec<SweepRow>,
    /// Largest pairing energy `½⟨u, Eu⟩` sampled along the reference run.
    pub reference_max_pairing: f64,
    pub reference_initial_pairing: f64,
    pub reference_final_pairing: f64,
    pub csv_path: PathBuf,
}

impl SweepTable {
    pub fn blew_up(&self) -> bool {
        self.rows.iter().any(|r| r.status != "ok")
    }

    /// Whether both error columns decrease strictly down the table.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].u_err < w[0].u_err && w[1].phi_err < w[0].phi_err)
    }

    /// Largest successive ratio over both error columns.
    pub fn max_ratio(&self) -> f64 {
        self.rows
            .windows(2)
            .flat_map(|w| [w[1].u_err / w[0].u_err, w[1].phi_err / w[0].phi_err])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn write(&self) -> HResult<()> {
        let path = &self.csv_path;
        let csv_err = |source| HarnessError::Csv {
            path: path.display().to_string(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record([self.parameter, "u_err", "phi_err", "status"])
            .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.value.to_string(),
                r.u_err.to_string(),
                r.phi_err.to_string(),
                r.status.clone(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(io_err(path))
    }
}

fn sweep(
    setup: &Setup,
    parameter: &'static str,
    reference: &ModelParams,
    members: Vec<(f64, ModelParams)>,
) -> HResult<SweepTable> {
    let out = &setup.config.output;
    create_dir(out)?;
    let reference_run = run_member(setup, reference, &out.join("reference"), false)?;
    let rows = members
        .par_iter()
        .map(|(value, model)| {
            let dir = out.join(format!("{parameter}_{value}"));
            match run_member(setup, model, &dir, false) {
                Ok(m) => {
                    let (u_err, phi_err) = state_errors(&setup.grid, &m.state, &reference_run.state);
                    Ok(SweepRow {
                        value: *value,
                        u_err,
                        phi_err,
                        status: "ok".into(),
                    })
                }
                Err(HarnessError::BlowUp { .. }) => Ok(SweepRow {
                    value: *value,
                    u_err: f64::NAN,
                    phi_err: f64::NAN,
                    status: "blow_up".into(),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<HResult<Vec<_>>>()?;
    let table = SweepTable {
        parameter,
        rows,
        reference_max_pairing: reference_run.pairing.iter().copied().fold(0.0, f64::max),
        reference_initial_pairing: reference_run.pairing[0],
        reference_final_pairing: *reference_run.pairing.last().unwrap_or(&f64::NAN),
        csv_path: out.join(format!("sweep_{parameter}.csv")),
    };
    table.write()?;
    Ok(table)
}

fn strictly_descending(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// α → 0 study: the configured α-model at each `config.alphas` against
/// NSE-AC with the same data, grid and time step.
pub fn cmd_sweep_alpha(config: &RunConfig) -> HResult<SweepTable> {
    if config.alphas.len() < 3 || !strictly_descending(&config.alphas) {
        return Err(HarnessError::Invalid(
            "`alphas` needs at least 3 strictly descending values".into(),
        ));
    }
    let setup = prepare(config)?;
    let m = &config.model;
    let mut reference = Preset::NseAc.params(m.alpha, m.nu, m.epsilon, m.gamma3);
    reference.order_param = m.order_param;
    reference.el_gamma = m.el_gamma;
    let members = config
        .alphas
        .iter()
        .map(|&a| (a, ModelParams { alpha: a, ..m.clone() }))
        .collect();
    sweep(&setup, "alpha", &reference, members)
}

/// ν → 0 study against the inviscid run of the same model.
pub fn cmd_sweep_nu(config: &RunConfig) -> HResult<SweepTable> {
    match config.preset {
        Some(Preset::SbmAc | Preset::LerayAcAlpha | Preset::NsvAc) => {}
        _ => {
            return Err(HarnessError::Invalid(
                "sweep-nu needs preset SBM-AC, Leray-AC-alpha or NSV-AC".into(),
            ))
        }
    }
    if config.nus.last() != Some(&0.0) || !strictly_descending(&config.nus) {
        return Err(HarnessError::Invalid(
            "`nus` must be strictly descending and end at 0".into(),
        ));
    }
    let setup = prepare(config)?;
    let reference = ModelParams {
        nu: 0.0,
        ..config.model.clone()
    };
    let members = config
        .nus
        .iter()
        .map(|&v| (v, ModelParams { nu: v, ..config.model.clone() }))
        .collect();
    sweep(&setup, "nu", &reference, members)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumStatus {
    /// Positive fitted decay exponent.
    Converging,
    /// Every sampled distance is zero: the initial state is an equilibrium.
    Stationary,
    /// Fitted exponent `≤ 0`.
    NotDecaying,
    /// Too few positive samples for a fit.
    FitFailed,
}

impl EquilibriumStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumStatus::Converging => "converging",
            EquilibriumStatus::Stationary => "stationary",
            EquilibriumStatus::NotDecaying => "warning: not decaying",
            EquilibriumStatus::FitFailed => "warning: fit failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EquilibriumSummary {
    pub xi: f64,
    pub upsilon: f64,
    pub slack: f64,
    pub u_neg_norm: f64,
    pub status: EquilibriumStatus,
    /// `(t, ‖u‖_{−θ₂} + ‖φ − φ_final‖_{H¹})` at every sample but the last.
    pub series: Vec<(f64, f64)>,
    pub records: Vec<DiagRecord>,
    pub final_state: State,
}

/// Long run towards a single equilibrium with a decaying or zero force.
pub fn cmd_equilibrium(config: &RunConfig) -> HResult<EquilibriumSummary> {
    if matches!(config.forcing.envelope, Envelope::Constant) {
        return Err(HarnessError::Invalid(
            "equilibrium needs forcing = zero or power_decay".into(),
        ));
    }
    let setup = prepare(config)?;
    let out = &config.output;
    create_dir(out)?;
    let model = &config.model;
    let mut stepper = setup.stepper(model)?;
    let diag = Diagnostics::new(&setup.grid, model);
    let steps = step_count(&setup);
    let every = config.sample_every;
    let mut sampled_phi = vec![setup.state0.phi.clone()];
    let result = run_with(
        &mut stepper,
        setup.state0.clone(),
        &setup.forcing,
        config.t_end,
        every,
        |k, s| {
            if k % every == 0 || k == steps {
                sampled_phi.push(s.phi.clone());
            }
        },
    );
    let csv_path = out.join("diagnostics.csv");
    let output = match result {
        Ok(o) => o,
        Err(failure) => {
            write_diagnostics(&csv_path, &failure.records)?;
            return Err(HarnessError::BlowUp {
                t: failure.t,
                message: failure.error_message,
            });
        }
    };
    write_diagnostics(&csv_path, &output.records)?;
    snapshot_write(&out.join("equilibrium.rgac"), &setup.grid, &output.state)?;

    let final_phi = &output.state.phi;
    let series: Vec<(f64, f64)> = output
        .records
        .iter()
        .zip(&sampled_phi)
        .take(output.records.len().saturating_sub(1))
        .map(|(r, phi)| {
            let dphi = phi
                .iter()
                .zip(final_phi)
                .map(|(a, b)| sobolev_norm(&setup.grid, &a.sub(b), 1.0).powi(2))
                .sum::<f64>()
                .sqrt();
            (r.t, r.u_neg_norm + dphi)
        })
        .collect();
    let (xi, status) = if series.iter().all(|(_, v)| *v == 0.0) {
        (0.0, EquilibriumStatus::Stationary)
    } else {
        match decay_rate_fit(&series) {
            Ok(xi) if xi > 0.0 => (xi, EquilibriumStatus::Converging),
            Ok(xi) => (xi, EquilibriumStatus::NotDecaying),
            Err(_) => (f64::NAN, EquilibriumStatus::FitFailed),
        }
    };
    let upsilon = diag.stationarity_residual(&output.state)?;
    let slack = diag.max_principle_slack(&output.state);
    let u_neg_norm = sobolev_norm(&setup.grid, &output.state.u, -model.theta2);
    let summary_path = out.join("equilibrium.txt");
    fs::write(
        &summary_path,
        format!(
            "xi = {xi}\nupsilon = {upsilon}\nmax_principle_slack = {slack}\nu_neg_norm = {u_neg_norm}\nstatus = {}\n",
            status.as_str()
        ),
    )
    .map_err(io_err(&summary_path))?;
    Ok(EquilibriumSummary {
        xi,
        upsilon,
        slack,
        u_neg_norm,
        status,
        series,
        records: output.records,
        final_state: output.state,
    })
}
