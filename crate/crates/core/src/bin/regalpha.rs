use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use regalpha::harness::{
    cmd_equilibrium, cmd_run, cmd_sweep_alpha, cmd_sweep_nu, ConfigError, Entries, HarnessError,
    RunConfig,
};

#[derive(Parser)]
#[command(name = "regalpha", version, about = "Regularized Navier-Stokes/Allen-Cahn simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run: diagnostics CSV and snapshots
    Run(Common),
    /// Compare an alpha-model with NSE-AC for decreasing alpha
    SweepAlpha(Common),
    /// Compare viscous runs with the inviscid one for decreasing nu
    SweepNu(Common),
    /// Long run towards equilibrium with a decay-rate fit
    Equilibrium(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, HarnessError> {
        let text = fs::read_to_string(&self.config).map_err(|source| HarnessError::Io {
            path: self.config.display().to_string(),
            source,
        })?;
        let mut entries = Entries::parse(&text)?;
        let overrides = [
            ("output", self.out.as_ref().map(|p| p.display().to_string())),
            ("preset", self.preset.clone()),
            ("n", self.n.map(|v| v.to_string())),
            ("dt", self.dt.map(|v| v.to_string())),
            ("t_end", self.tend.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                entries.set(key, v)?;
            }
        }
        Ok(RunConfig::from_entries(&entries).map_err(ConfigError::from)?)
    }
}

fn execute(command: &Command) -> Result<(), HarnessError> {
    match command {
        Command::Run(c) => {
            let s = cmd_run(&c.load()?)?;
            println!(
                "completed {} steps (dt = {}); diagnostics in {}",
                s.steps,
                s.dt,
                s.csv_path.display()
            );
        }
        Command::SweepAlpha(c) | Command::SweepNu(c) => {
            let config = c.load()?;
            let table = if matches!(command, Command::SweepAlpha(_)) {
                cmd_sweep_alpha(&config)?
            } else {
                cmd_sweep_nu(&config)?
            };
            println!("{:>10} {:>14} {:>14}  status", table.parameter, "u_err", "phi_err");
            for r in &table.rows {
                println!("{:>10} {:>14.6e} {:>14.6e}  {}", r.value, r.u_err, r.phi_err, r.status);
            }
            println!("table written to {}", table.csv_path.display());
            if table.blew_up() {
                return Err(HarnessError::BlowUp {
                    t: f64::NAN,
                    message: "a sweep member blew up".into(),
                });
            }
        }
        Command::Equilibrium(c) => {
            let s = cmd_equilibrium(&c.load()?)?;
            println!("xi = {}", s.xi);
            println!("upsilon = {:e}", s.upsilon);
            println!("max_principle_slack = {:e}", s.slack);
            println!("u_neg_norm = {:e}", s.u_neg_norm);
            println!("status = {}", s.status.as_str());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
