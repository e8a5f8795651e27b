//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys not listed in the file take the defaults of [`RunConfig::default`].

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dynamics::{InitialCondition, NumericsParams, SystemParams};
use crate::error::{Error, Result};
use crate::random::BandLimited;
use crate::spectral::Grid;

/// Named initial-data families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Zero,
    TaylorGreen,
    Layered,
    Random,
    Blob,
    Vortices,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Zero => "zero",
            Preset::TaylorGreen => "taylor_green",
            Preset::Layered => "layered",
            Preset::Random => "random",
            Preset::Blob => "blob",
            Preset::Vortices => "vortices",
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "zero" => Preset::Zero,
            "taylor_green" => Preset::TaylorGreen,
            "layered" => Preset::Layered,
            "random" => Preset::Random,
            "blob" => Preset::Blob,
            "vortices" => Preset::Vortices,
            _ => {
                return Err(format!(
                    "unknown preset `{s}` (expected zero, taylor_green, layered, random, blob or vortices)"
                ))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub t_end: f64,
    pub dt_max: f64,
    pub cfl_factor: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub nu: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
    pub init_preset: Preset,
    pub init_seed: u64,
    /// Vorticity amplitude (rms for seeded fields, peak for Taylor–Green and bumps).
    pub init_amplitude: f64,
    /// Temperature amplitude (rms for seeded fields, peak otherwise).
    pub init_theta_amplitude: f64,
    pub init_kmax: u32,
    pub init_slope: f64,
    pub init_width: f64,
    pub init_mode: u32,
    pub init_count: u32,
    pub q_norm: f64,
    pub dealias: bool,
    /// Empty means no files are written.
    pub output_dir: Option<PathBuf>,
    pub snapshot_interval: f64,
    pub series_interval: f64,
    pub blowup_cap: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 128,
            t_end: 1.0,
            dt_max: 0.01,
            cfl_factor: 0.4,
            sigma: 0.0,
            gamma: 0.0,
            nu: 1.0,
            kappa: 0.0,
            alpha: 1.0,
            beta: 1.0,
            init_preset: Preset::Random,
            init_seed: 1,
            init_amplitude: 1.0,
            init_theta_amplitude: 1.0,
            init_kmax: 8,
            init_slope: 1.0,
            init_width: 0.8,
            init_mode: 1,
            init_count: 6,
            q_norm: 3.0,
            dealias: true,
            output_dir: None,
            snapshot_interval: 1.0,
            series_interval: 0.01,
            blowup_cap: 1e6,
        }
    }
}

pub const CONFIG_KEYS: [&str; 25] = [
    "n",
    "t_end",
    "dt_max",
    "cfl_factor",
    "sigma",
    "gamma",
    "nu",
    "kappa",
    "alpha",
    "beta",
    "init_preset",
    "init_seed",
    "init_amplitude",
    "init_theta_amplitude",
    "init_kmax",
    "init_slope",
    "init_width",
    "init_mode",
    "init_count",
    "q_norm",
    "dealias",
    "output_dir",
    "snapshot_interval",
    "series_interval",
    "blowup_cap",
];

fn parse_value<T: FromStr>(raw: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| format!("cannot parse `{raw}`: {e}"))
}

fn parse_bool(raw: &str) -> std::result::Result<bool, String> {
    match raw {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(format!("expected a boolean, got `{raw}`")),
    }
}

impl RunConfig {
    fn assign(&mut self, key: &str, raw: &str) -> std::result::Result<(), String> {
        match key {
            "n" => self.n = parse_value(raw)?,
            "t_end" => self.t_end = parse_value(raw)?,
            "dt_max" => self.dt_max = parse_value(raw)?,
            "cfl_factor" => self.cfl_factor = parse_value(raw)?,
            "sigma" => self.sigma = parse_value(raw)?,
            "gamma" => self.gamma = parse_value(raw)?,
            "nu" => self.nu = parse_value(raw)?,
            "kappa" => self.kappa = parse_value(raw)?,
            "alpha" => self.alpha = parse_value(raw)?,
            "beta" => self.beta = parse_value(raw)?,
            "init_preset" => self.init_preset = raw.parse()?,
            "init_seed" => self.init_seed = parse_value(raw)?,
            "init_amplitude" => self.init_amplitude = parse_value(raw)?,
            "init_theta_amplitude" => self.init_theta_amplitude = parse_value(raw)?,
            "init_kmax" => self.init_kmax = parse_value(raw)?,
            "init_slope" => self.init_slope = parse_value(raw)?,
            "init_width" => self.init_width = parse_value(raw)?,
            "init_mode" => self.init_mode = parse_value(raw)?,
            "init_count" => self.init_count = parse_value(raw)?,
            "q_norm" => self.q_norm = parse_value(raw)?,
            "dealias" => self.dealias = parse_bool(raw)?,
            "output_dir" => {
                self.output_dir = if raw.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(raw))
                }
            }
            "snapshot_interval" => self.snapshot_interval = parse_value(raw)?,
            "series_interval" => self.series_interval = parse_value(raw)?,
            "blowup_cap" => self.blowup_cap = parse_value(raw)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Range checks; returns the offending key and message.
    fn check(&self) -> std::result::Result<(), (&'static str, String)> {
        if Grid::new(self.n).is_err() {
            return Err(("n", format!("{} is not a power of two >= 8", self.n)));
        }
        let positive = [
            ("t_end", self.t_end),
            ("dt_max", self.dt_max),
            ("cfl_factor", self.cfl_factor),
            ("snapshot_interval", self.snapshot_interval),
            ("series_interval", self.series_interval),
            ("blowup_cap", self.blowup_cap),
            ("init_width", self.init_width),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err((key, format!("must be positive and finite, got {v}")));
            }
        }
        let nonneg = [
            ("sigma", self.sigma),
            ("gamma", self.gamma),
            ("nu", self.nu),
            ("kappa", self.kappa),
            ("init_amplitude", self.init_amplitude),
            ("init_theta_amplitude", self.init_theta_amplitude),
            ("init_slope", self.init_slope),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err((key, format!("out of range: must be finite and >= 0, got {v}")));
            }
        }
        for (key, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err((key, format!("out of range: must lie in (0, 1], got {v}")));
            }
        }
        if !(self.q_norm >= 2.0 && self.q_norm.is_finite()) {
            return Err(("q_norm", format!("must be finite and >= 2, got {}", self.q_norm)));
        }
        let nyq = (self.n / 2) as u32;
        if matches!(self.init_preset, Preset::Random | Preset::Blob)
            && (self.init_kmax == 0 || self.init_kmax >= nyq)
        {
            return Err(("init_kmax", format!("must lie in 1..{nyq}, got {}", self.init_kmax)));
        }
        if self.init_preset == Preset::Layered && (self.init_mode == 0 || self.init_mode >= nyq) {
            return Err(("init_mode", format!("must lie in 1..{nyq}, got {}", self.init_mode)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check().map_err(|(key, message)| Error::Config {
            line: 0,
            key: key.into(),
            message,
        })
    }

    pub fn system_params(&self) -> SystemParams {
        SystemParams {
            nu: self.nu,
            alpha: self.alpha,
            kappa: self.kappa,
            beta: self.beta,
            sigma: self.sigma,
            gamma: self.gamma,
        }
    }

    pub fn numerics(&self) -> NumericsParams {
        NumericsParams {
            n: self.n,
            dt_max: self.dt_max,
            cfl_factor: self.cfl_factor,
            t_end: self.t_end,
            dealias: self.dealias,
        }
    }

    pub fn initial_condition(&self) -> InitialCondition {
        let band = |rms| BandLimited {
            k_max: self.init_kmax,
            slope: self.init_slope,
            rms,
        };
        match self.init_preset {
            Preset::Zero => InitialCondition::Zero,
            Preset::TaylorGreen => InitialCondition::TaylorGreen {
                amplitude: self.init_amplitude,
            },
            Preset::Layered => InitialCondition::Layered {
                amplitude: self.init_theta_amplitude,
                mode: self.init_mode,
            },
            Preset::Random => InitialCondition::Random {
                seed: self.init_seed,
                omega: band(self.init_amplitude),
                theta: band(self.init_theta_amplitude),
            },
            Preset::Blob => InitialCondition::Blob {
                seed: self.init_seed,
                omega: band(self.init_amplitude),
                theta_amplitude: self.init_theta_amplitude,
                width: self.init_width,
            },
            Preset::Vortices => InitialCondition::Vortices {
                seed: self.init_seed,
                count: self.init_count,
                amplitude: self.init_amplitude,
                width: self.init_width,
            },
        }
    }

    /// Serializes every key; `parse_config(cfg.to_text())` returns `cfg`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("n", self.n.to_string());
        line("t_end", format!("{:?}", self.t_end));
        line("dt_max", format!("{:?}", self.dt_max));
        line("cfl_factor", format!("{:?}", self.cfl_factor));
        line("sigma", format!("{:?}", self.sigma));
        line("gamma", format!("{:?}", self.gamma));
        line("nu", format!("{:?}", self.nu));
        line("kappa", format!("{:?}", self.kappa));
        line("alpha", format!("{:?}", self.alpha));
        line("beta", format!("{:?}", self.beta));
        line("init_preset", self.init_preset.name().into());
        line("init_seed", self.init_seed.to_string());
        line("init_amplitude", format!("{:?}", self.init_amplitude));
        line("init_theta_amplitude", format!("{:?}", self.init_theta_amplitude));
        line("init_kmax", self.init_kmax.to_string());
        line("init_slope", format!("{:?}", self.init_slope));
        line("init_width", format!("{:?}", self.init_width));
        line("init_mode", self.init_mode.to_string());
        line("init_count", self.init_count.to_string());
        line("q_norm", format!("{:?}", self.q_norm));
        line("dealias", self.dealias.to_string());
        line(
            "output_dir",
            self.output_dir
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        line("snapshot_interval", format!("{:?}", self.snapshot_interval));
        line("series_interval", format!("{:?}", self.series_interval));
        line("blowup_cap", format!("{:?}", self.blowup_cap));
        s
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<(String, usize)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config {
                line: line_no,
                key: content.into(),
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
            return Err(Error::Config {
                line: line_no,
                key: key.into(),
                message: format!("duplicate key (first set on line {first})"),
            });
        }
        cfg.assign(key, value).map_err(|message| Error::Config {
            line: line_no,
            key: key.into(),
            message,
        })?;
        seen.push((key.into(), line_no));
    }
    cfg.check().map_err(|(key, message)| Error::Config {
        line: seen
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, l)| *l)
            .unwrap_or(0),
        key: key.into(),
        message,
    })?;
    Ok(cfg)
}
