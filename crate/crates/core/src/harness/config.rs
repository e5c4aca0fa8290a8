//! `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Unknown keys and
//! repeated keys are rejected. Values given on the command line replace
//! file values and are reported as line 0.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::models::{A0Family, ModelParams, OrderParam, Preset};
use crate::timestepper::{Envelope, Scheme};

#[derive(Debug, Error, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

const KEYS: &[&str] = &[
    "preset",
    "theta",
    "theta1",
    "theta2",
    "chi",
    "a0_family",
    "alpha",
    "nu",
    "epsilon",
    "gamma3",
    "el_gamma",
    "order_param",
    "n",
    "dt",
    "scheme",
    "sigma",
    "t_end",
    "sample_every",
    "snapshot_every",
    "seed",
    "u_amplitude",
    "phi_amplitude",
    "phi_mean",
    "initial_snapshot",
    "forcing",
    "forcing_amplitude",
    "delta",
    "forcing_snapshot",
    "alphas",
    "nus",
    "output",
];

/// Raw assignments with their source line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Entries(BTreeMap<String, (usize, String)>);

impl Entries {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return err(line, format!("expected `key = value`, found `{content}`"));
            };
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return err(line, format!("unknown key `{key}`"));
            }
            if let Some((first, _)) = map.get(&key) {
                return err(line, format!("`{key}` already set on line {first}"));
            }
            map.insert(key, (line, value.trim().to_string()));
        }
        Ok(Self(map))
    }

    /// Command-line override.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return err(0, format!("unknown key `{key}`"));
        }
        self.0.insert(key.to_string(), (0, value.into()));
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<(usize, T)>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(|x| Some((*line, x)))
                .or_else(|e| err(*line, format!("malformed value for `{key}`: `{v}` ({e})"))),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |(l, _)| *l)
    }

    fn number(&self, key: &str, default: f64, check: impl Fn(f64) -> bool, rule: &str) -> Result<f64, ConfigError> {
        match self.get::<f64>(key)? {
            None => Ok(default),
            Some((line, v)) if !v.is_finite() || !check(v) => {
                err(line, format!("`{key}` = {v} violates {rule}"))
            }
            Some((_, v)) => Ok(v),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        match self.0.get(key) {
            None => Ok(Vec::new()),
            Some((line, v)) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().or_else(|_| {
                        err(*line, format!("malformed number `{}` in `{key}`", s.trim()))
                    })
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForcingConfig {
    pub envelope: Envelope,
    /// `‖g₀‖_{L²}` of the seeded profile.
    pub amplitude: f64,
    /// Profile read from the velocity components of a snapshot instead of
    /// the seeded one.
    pub profile_snapshot: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub model: ModelParams,
    pub n: usize,
    /// `None`: chosen by the CFL rule from the initial state.
    pub dt: Option<f64>,
    pub scheme: Scheme,
    /// `None`: the model's default stabilization.
    pub sigma: Option<f64>,
    pub t_end: f64,
    pub sample_every: usize,
    /// Steps between snapshots; 0 writes only the final one.
    pub snapshot_every: usize,
    pub seed: u64,
    pub u_amplitude: f64,
    pub phi_amplitude: f64,
    pub phi_mean: f64,
    pub initial_snapshot: Option<PathBuf>,
    pub forcing: ForcingConfig,
    pub alphas: Vec<f64>,
    pub nus: Vec<f64>,
    pub output: PathBuf,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_entries(&Entries::parse(text)?)
}

impl RunConfig {
    pub fn from_entries(e: &Entries) -> Result<Self, ConfigError> {
        let alpha = e.number("alpha", 0.2, |v| v > 0.0, "alpha > 0")?;
        let nu = e.number("nu", 0.05, |v| v >= 0.0, "nu >= 0")?;
        let epsilon = e.number("epsilon", 0.1, |v| v > 0.0, "epsilon > 0")?;
        let gamma3 = e.number("gamma3", 1.0, |v| v > 0.0, "gamma3 > 0")?;
        let el_gamma = e.number("el_gamma", 1.0, |v| v > 0.0, "el_gamma > 0")?;
        let theta = e.get::<f64>("theta")?;
        if let Some((line, t)) = theta {
            if !(t >= 0.0) || !t.is_finite() {
                return err(line, format!("`theta` = {t} violates theta >= 0"));
            }
        }
        let theta1 = e.get::<f64>("theta1")?;
        let theta2 = e.get::<f64>("theta2")?;
        let chi = match e.get::<u8>("chi")? {
            None => None,
            Some((_, c @ (0 | 1))) => Some(c == 1),
            Some((line, c)) => return err(line, format!("`chi` must be 0 or 1, got {c}")),
        };
        let a0_family = e.get::<A0Family>("a0_family")?.map(|(_, f)| f);

        let preset = e.get::<Preset>("preset")?.map(|(_, p)| p);
        let preset = match preset {
            Some(Preset::NsAcAlphaLike { .. }) => Some(Preset::NsAcAlphaLike {
                theta: theta.map_or(1.0, |(_, t)| t),
                theta2: theta2.map_or(1.0, |(_, t)| t),
            }),
            other => other,
        };
        let mut model = match preset {
            Some(p) => {
                let mut m = p.params(alpha, nu, epsilon, gamma3);
                if !matches!(p, Preset::NsAcAlphaLike { .. }) {
                    if let Some((_, t)) = theta {
                        m.theta = t;
                    }
                    if let Some((_, t)) = theta2 {
                        m.theta2 = t;
                    }
                }
                if let Some((_, t)) = theta1 {
                    m.theta1 = t;
                }
                if let Some(c) = chi {
                    m.chi = c;
                }
                if let Some(f) = a0_family {
                    m.a0_family = f;
                }
                m
            }
            None => match (theta, theta1, theta2, chi) {
                (Some((_, t)), Some((_, t1)), Some((_, t2)), Some(c)) => ModelParams {
                    theta: t,
                    theta1: t1,
                    theta2: t2,
                    chi: c,
                    alpha,
                    nu,
                    epsilon,
                    gamma3,
                    a0_family: a0_family.unwrap_or(A0Family::Fractional),
                    order_param: OrderParam::Scalar,
                    el_gamma,
                },
                _ => {
                    return err(
                        0,
                        "`preset` is required unless theta, theta1, theta2 and chi are all given",
                    )
                }
            },
        };
        model.el_gamma = el_gamma;
        if let Some((_, o)) = e.get::<OrderParam>("order_param")? {
            model.order_param = o;
        }
        if let Err(m) = model.validate() {
            return err(0, m.to_string());
        }

        let n = match e.get::<usize>("n")? {
            None => 64,
            Some((_, n)) if n >= 8 && n % 2 == 0 => n,
            Some((line, n)) => return err(line, format!("`n` = {n} must be even and >= 8")),
        };
        let dt = match e.get::<f64>("dt")? {
            None => None,
            Some((_, v)) if v > 0.0 && v.is_finite() => Some(v),
            Some((line, v)) => return err(line, format!("`dt` = {v} violates dt > 0")),
        };
        let scheme = e.get::<Scheme>("scheme")?.map_or(Scheme::ImexBdf2, |(_, s)| s);
        let sigma = match e.get::<f64>("sigma")? {
            None => None,
            Some((_, v)) if v >= 0.0 && v.is_finite() => Some(v),
            Some((line, v)) => return err(line, format!("`sigma` = {v} violates sigma >= 0")),
        };
        let t_end = e.number("t_end", 1.0, |v| v >= 0.0, "t_end >= 0")?;
        let sample_every = match e.get::<usize>("sample_every")? {
            None => 10,
            Some((line, 0)) => return err(line, "`sample_every` must be >= 1"),
            Some((_, v)) => v,
        };
        let snapshot_every = e.get::<usize>("snapshot_every")?.map_or(0, |(_, v)| v);
        let seed = e.get::<u64>("seed")?.map_or(0, |(_, v)| v);
        let u_amplitude = e.number("u_amplitude", 0.5, |v| v >= 0.0, "u_amplitude >= 0")?;
        let phi_amplitude = e.number("phi_amplitude", 0.9, |v| v >= 0.0, "phi_amplitude >= 0")?;
        let phi_mean = e.number("phi_mean", 0.0, |v| v.abs() <= 0.9, "|phi_mean| <= 0.9")?;

        let envelope = match e.0.get("forcing").map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "zero")) => Envelope::Zero,
            Some((_, "constant")) => Envelope::Constant,
            Some((_, "power_decay")) => Envelope::PowerDecay {
                delta: e.number("delta", 1.0, |v| v > 0.0, "delta > 0")?,
            },
            Some((line, other)) => {
                return err(line, format!("unknown forcing `{other}` (zero|constant|power_decay)"))
            }
        };
        let forcing = ForcingConfig {
            envelope,
            amplitude: e.number("forcing_amplitude", 1.0, |v| v >= 0.0, "forcing_amplitude >= 0")?,
            profile_snapshot: e.0.get("forcing_snapshot").map(|(_, v)| PathBuf::from(v)),
        };

        let alphas = e.list("alphas")?;
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0)) {
            return err(e.line("alphas"), format!("alpha {a} must be > 0"));
        }
        let nus = e.list("nus")?;
        if let Some(v) = nus.iter().find(|v| !(**v >= 0.0)) {
            return err(e.line("nus"), format!("nu {v} must be >= 0"));
        }

        Ok(Self {
            preset,
            model,
            n,
            dt,
            scheme,
            sigma,
            t_end,
            sample_every,
            snapshot_every,
            seed,
            u_amplitude,
            phi_amplitude,
            phi_mean,
            initial_snapshot: e.0.get("initial_snapshot").map(|(_, v)| PathBuf::from(v)),
            forcing,
            alphas,
            nus,
            output: e
                .0
                .get("output")
                .map_or_else(|| PathBuf::from("out"), |(_, v)| PathBuf::from(v)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_with_alpha() {
        let c = parse_config("preset = NSV-AC\nalpha = 0.25").unwrap();
        assert_eq!((c.model.theta, c.model.theta1, c.model.theta2), (0.0, 1.0, 1.0));
        assert_eq!(c.model.alpha, 0.25);
        assert_eq!(c.model.a0_family, A0Family::Voigt);
        assert_eq!(c.n, 64);
        assert_eq!(c.scheme, Scheme::ImexBdf2);
        assert_eq!(c.model.epsilon, 0.1);
        assert_eq!(c.model.gamma3, 1.0);
        assert_eq!(c.dt, None);
    }

    #[test]
    fn preset_required() {
        let e = parse_config("").unwrap_err();
        assert!(e.message.contains("preset"));
        let e = parse_config("# only a comment\n\n").unwrap_err();
        assert!(e.message.contains("preset"));
    }

    #[test]
    fn invariant_violations_carry_lines() {
        let e = parse_config("preset = NSE-AC\ntheta = -1").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("preset = NSE-AC\n\nalpha = 0").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_config("preset = NSE-AC\nn = 7").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("preset = NSE-AC\nwibble = 3").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.to_string().contains("unknown key"));
        let e = parse_config("preset = NSE-AC\nepsilon = abc").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("preset = NSE-AC\nnot an assignment").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("preset = NSE-AC\npreset = SBM-AC").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("preset = NSE-AC\nchi = 2").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn explicit_family() {
        let c = parse_config(
            "theta = 0.5\ntheta1 = 0.25\ntheta2 = 1 # comment\nchi = 1\na0_family = voight\norder_param = vector3",
        )
        .unwrap();
        assert_eq!(c.preset, None);
        assert_eq!((c.model.theta, c.model.theta1, c.model.theta2, c.model.chi), (0.5, 0.25, 1.0, true));
        assert_eq!(c.model.order_param, OrderParam::Vector(3));
    }

    #[test]
    fn like_preset_takes_user_exponents() {
        let c = parse_config("preset = NS-AC-alpha-like\ntheta = 0.5\ntheta2 = 2").unwrap();
        assert_eq!((c.model.theta, c.model.theta1, c.model.theta2), (0.5, 2.0, 0.0));
        assert!(c.model.chi);
    }

    #[test]
    fn sweep_lists_and_forcing() {
        let c = parse_config(
            "preset = SBM-AC\nnus = 0.1, 0.05,0.025 , 0\nforcing = power_decay\ndelta = 2\nforcing_amplitude = 0.01",
        )
        .unwrap();
        assert_eq!(c.nus, vec![0.1, 0.05, 0.025, 0.0]);
        assert_eq!(c.forcing.envelope, Envelope::PowerDecay { delta: 2.0 });
        assert_eq!(c.forcing.amplitude, 0.01);
        assert!(parse_config("preset = SBM-AC\nalphas = 0.1, x").is_err());
        assert!(parse_config("preset = SBM-AC\nforcing = sometimes").is_err());
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut e = Entries::parse("preset = NSE-AC\nn = 32").unwrap();
        e.set("n", "16").unwrap();
        e.set("preset", "SBM-AC").unwrap();
        let c = RunConfig::from_entries(&e).unwrap();
        assert_eq!(c.n, 16);
        assert_eq!(c.preset, Some(Preset::SbmAc));
        assert!(e.set("bogus", "1").is_err());
    }
}
