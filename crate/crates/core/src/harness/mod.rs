//! Configuration, experiment drivers and file I/O.

pub mod commands;
pub mod config;
pub mod init;
pub mod snapshot;

pub use commands::{
    cmd_equilibrium, cmd_run, cmd_sweep_alpha, cmd_sweep_nu, prepare, state_errors,
    write_diagnostics, EquilibriumStatus, EquilibriumSummary, HarnessError, RunSummary, Setup,
    SweepRow, SweepTable,
};
pub use config::{parse_config, ConfigError, Entries, ForcingConfig, RunConfig};
pub use snapshot::{snapshot_read, snapshot_write, Snapshot, SnapshotError};
