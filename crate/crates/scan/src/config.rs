//! Run configuration: a JSON file and command-line flags share one set of
//! optional fields; flags win, and whatever is still unset falls back to
//! per-command defaults.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::{usage, Result, ScanError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    G0,
    G1,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::G0 => "g0",
            SweepAxis::G1 => "g1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Evolve,
    Average,
    PhaseDiagram,
    Oracle,
    Selftest,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Evolve => "evolve",
            CommandKind::Average => "average",
            CommandKind::PhaseDiagram => "phase-diagram",
            CommandKind::Oracle => "oracle",
            CommandKind::Selftest => "selftest",
        }
    }
}

/// Every field is optional so that a config file and the flags can be
/// layered.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// Exchange coupling J [default: 0.01*Omega]
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Static transverse field [default: ell*Omega/4]
    #[arg(long)]
    pub g0: Option<f64>,
    /// Driving amplitude [default: Omega]
    #[arg(long)]
    pub g1: Option<f64>,
    /// Driving frequency [default: 1, or pi for `average`]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Number of sites, even [default: 1000, or 8 for `oracle`]
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub sites: Option<usize>,
    /// Resonance index [default: 2]
    #[arg(long)]
    pub ell: Option<u32>,

    /// Detunings from the resonance, comma separated; one output column each
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub dg0: Option<Vec<f64>>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time samples including t = 0
    #[arg(long)]
    pub t_steps: Option<usize>,

    #[arg(long, value_enum)]
    pub sweep_axis: Option<SweepAxis>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_max: Option<f64>,
    #[arg(long)]
    pub sweep_steps: Option<usize>,
    /// Averaging horizon in driving periods [default: 1000]
    #[arg(long)]
    pub periods: Option<u32>,
    #[arg(long)]
    pub samples_per_period: Option<u32>,

    #[arg(long, allow_negative_numbers = true)]
    pub g0_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g0_max: Option<f64>,
    #[arg(long)]
    pub g0_steps: Option<usize>,
    #[arg(long)]
    pub g1_min: Option<f64>,
    #[arg(long)]
    pub g1_max: Option<f64>,
    #[arg(long)]
    pub g1_steps: Option<usize>,

    /// Ladder of Omega/J values for `oracle`, comma separated
    #[arg(long, value_delimiter = ',')]
    pub omega_over_j: Option<Vec<f64>>,
    /// RK4 step [default: min(T/200, 0.01/lambda_max)]
    #[arg(long)]
    pub dt: Option<f64>,
    /// Lift the L <= 32 limit of `oracle`
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub allow_large: Option<bool>,

    /// Worker threads [default: available cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Seed for sampled checks
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),* $(,)?) => {
        ConfigLayer { $($f: $top.$f.or($base.$f),)* }
    };
}

impl ConfigLayer {
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ScanError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| ScanError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, path)
    }

    /// Fields set in `self` take precedence over `base`.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        overlay!(
            self,
            base,
            j,
            g0,
            g1,
            omega,
            sites,
            ell,
            dg0,
            t_max,
            t_steps,
            sweep_axis,
            sweep_min,
            sweep_max,
            sweep_steps,
            periods,
            samples_per_period,
            g0_min,
            g0_max,
            g0_steps,
            g1_min,
            g1_max,
            g1_steps,
            omega_over_j,
            dt,
            allow_large,
            workers,
            seed,
            out,
        )
    }
}

/// Evenly spaced values, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    fn checked(name: &str, min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return usage(format!("{name}: range must be finite"));
        }
        if steps == 0 {
            return usage(format!("{name}: steps must be at least 1"));
        }
        if steps == 1 && min != max {
            return usage(format!("{name}: a single step needs min == max"));
        }
        if steps >= 2 && !(min < max) {
            return usage(format!("{name}: empty range [{min}, {max}]"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / n)
                }
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        if self.steps < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub j: f64,
    pub g0: f64,
    pub g1: f64,
    pub omega: f64,
    pub sites: usize,
    pub ell: u32,
    pub dg0: Vec<f64>,
    pub t_max: f64,
    pub t_steps: usize,
    pub sweep_axis: SweepAxis,
    pub sweep: GridAxis,
    pub periods: u32,
    pub samples_per_period: u32,
    pub g0_grid: GridAxis,
    pub g1_grid: GridAxis,
    pub omega_over_j: Vec<f64>,
    pub dt: Option<f64>,
    pub allow_large: bool,
    pub workers: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20_240_607;

impl RunConfig {
    /// Fill unset fields with the defaults of `command` and validate ranges.
    pub fn resolve(command: CommandKind, layer: ConfigLayer) -> Result<Self> {
        let omega = layer.omega.unwrap_or(match command {
            CommandKind::Average => PI,
            _ => 1.0,
        });
        let j = layer.j.unwrap_or(0.01 * omega);
        let ell = layer.ell.unwrap_or(2);
        let res = ell as f64 * omega / 4.0;
        let g1 = layer.g1.unwrap_or(omega);
        let sites = layer.sites.unwrap_or(match command {
            CommandKind::Oracle => 8,
            _ => 1000,
        });
        let g0 = layer.g0.unwrap_or(match command {
            CommandKind::Oracle => res + j,
            _ => res,
        });
        let dg0 = match (&layer.dg0, layer.g0, command) {
            (Some(list), _, _) => list.clone(),
            (None, None, CommandKind::Evolve) => vec![0.0, j, 2.0 * j],
            (None, None, CommandKind::Oracle) => vec![j],
            (None, _, _) => vec![g0 - res],
        };
        if dg0.is_empty() {
            return usage("dg0: list must not be empty");
        }
        if command == CommandKind::Oracle && dg0.len() != 1 {
            return usage("oracle takes a single dg0");
        }
        let t_max = layer.t_max.unwrap_or(20.0 / j);
        let t_steps = layer.t_steps.unwrap_or(match command {
            CommandKind::Oracle => 201,
            _ => 2001,
        });
        if !(t_max > 0.0 && t_max.is_finite()) {
            return usage(format!("t-max must be positive, got {t_max}"));
        }
        if t_steps < 2 {
            return usage(format!("t-steps must be at least 2, got {t_steps}"));
        }
        let sweep_axis = layer.sweep_axis.unwrap_or(SweepAxis::G0);
        let (smin, smax, ssteps) = match sweep_axis {
            SweepAxis::G0 => (res - 2.0 * j, res + 2.0 * j, 81),
            SweepAxis::G1 => (omega, 2.5 * omega, 61),
        };
        let sweep = GridAxis::checked(
            "sweep",
            layer.sweep_min.unwrap_or(smin),
            layer.sweep_max.unwrap_or(smax),
            layer.sweep_steps.unwrap_or(ssteps),
        )?;
        let g0_grid = GridAxis::checked(
            "g0 grid",
            layer.g0_min.unwrap_or(res - 3.0 * j),
            layer.g0_max.unwrap_or(res + 3.0 * j),
            layer.g0_steps.unwrap_or(121),
        )?;
        let g1_grid = GridAxis::checked(
            "g1 grid",
            layer.g1_min.unwrap_or(0.0),
            layer.g1_max.unwrap_or(4.0 * omega),
            layer.g1_steps.unwrap_or(401),
        )?;
        let omega_over_j = layer.omega_over_j.clone().unwrap_or_default();
        if omega_over_j.iter().any(|r| !(*r > 0.0)) {
            return usage("omega-over-j values must be positive");
        }
        if let Some(dt) = layer.dt {
            if !(dt > 0.0) {
                return usage(format!("dt must be positive, got {dt}"));
            }
        }
        let workers = layer
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers < 1 {
            return usage("workers must be at least 1");
        }
        Ok(Self {
            command,
            j,
            g0,
            g1,
            omega,
            sites,
            ell,
            dg0,
            t_max,
            t_steps,
            sweep_axis,
            sweep,
            periods: layer.periods.unwrap_or(1000),
            samples_per_period: layer.samples_per_period.unwrap_or(64),
            g0_grid,
            g1_grid,
            omega_over_j,
            dt: layer.dt,
            allow_large: layer.allow_large.unwrap_or(false),
            workers,
            seed: layer.seed.unwrap_or(DEFAULT_SEED),
            out: layer.out,
        })
    }

    pub fn resonant_field(&self) -> f64 {
        self.ell as f64 * self.omega / 4.0
    }

    pub fn times(&self) -> Vec<f64> {
        GridAxis {
            min: 0.0,
            max: self.t_max,
            steps: self.t_steps,
        }
        .values()
    }

    /// `key=value` pairs describing the run. The worker count is left out
    /// so that output does not depend on it.
    pub fn header(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("command".to_string(), self.command.as_str().to_string()),
            ("J".to_string(), num(self.j)),
            ("omega".to_string(), num(self.omega)),
            ("L".to_string(), self.sites.to_string()),
            ("ell".to_string(), self.ell.to_string()),
        ];
        let mut push = |k: &str, v: String| h.push((k.to_string(), v));
        match self.command {
            CommandKind::Evolve => {
                push("g1", num(self.g1));
                push("dg0", list(&self.dg0));
                push("t_max", num(self.t_max));
                push("t_steps", self.t_steps.to_string());
            }
            CommandKind::Average => {
                push("g0", num(self.g0));
                push("g1", num(self.g1));
                push("sweep_axis", self.sweep_axis.as_str().to_string());
                push("sweep_min", num(self.sweep.min));
                push("sweep_max", num(self.sweep.max));
                push("sweep_steps", self.sweep.steps.to_string());
                push("periods", self.periods.to_string());
                push("samples_per_period", self.samples_per_period.to_string());
            }
            CommandKind::PhaseDiagram => {
                push("g0_min", num(self.g0_grid.min));
                push("g0_max", num(self.g0_grid.max));
                push("g0_steps", self.g0_grid.steps.to_string());
                push("g1_min", num(self.g1_grid.min));
                push("g1_max", num(self.g1_grid.max));
                push("g1_steps", self.g1_grid.steps.to_string());
            }
            CommandKind::Oracle => {
                push("g1", num(self.g1));
                push("dg0", list(&self.dg0));
                push("omega_over_j", list(&self.omega_over_j));
                push("t_max", num(self.t_max));
                push("t_steps", self.t_steps.to_string());
                push("dt", self.dt.map_or("default".to_string(), num));
            }
            CommandKind::Selftest => {
                push("seed", self.seed.to_string());
            }
        }
        h
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn average_defaults_use_pi() {
        let c = RunConfig::resolve(CommandKind::Average, ConfigLayer::default()).unwrap();
        assert_eq!(c.omega, PI);
        assert_eq!(c.j, 0.01 * PI);
        assert_eq!(c.g1, PI);
        assert_eq!(c.g0, 0.5 * PI);
        assert_eq!(c.sites, 1000);
        assert_eq!(c.periods, 1000);
    }

    #[test]
    fn evolve_defaults_to_three_detunings() {
        let c = RunConfig::resolve(CommandKind::Evolve, ConfigLayer::default()).unwrap();
        assert_eq!(c.dg0, vec![0.0, 0.01, 0.02]);
    }

    #[test]
    fn flags_win_over_file() {
        let file = ConfigLayer::from_json(r#"{"J": 0.5, "L": 10, "g1": 2.0}"#, Path::new("x.json")).unwrap();
        let flags = ConfigLayer {
            sites: Some(20),
            ..Default::default()
        };
        let c = RunConfig::resolve(CommandKind::Evolve, flags.over(file)).unwrap();
        assert_eq!((c.j, c.sites, c.g1), (0.5, 20, 2.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ConfigLayer::from_json(r#"{"Jay": 1}"#, Path::new("x.json")).is_err());
    }

    #[test]
    fn ranges_are_checked() {
        let bad = |layer: ConfigLayer| RunConfig::resolve(CommandKind::Average, layer).is_err();
        assert!(bad(ConfigLayer {
            sweep_min: Some(1.0),
            sweep_max: Some(0.5),
            ..Default::default()
        }));
        assert!(bad(ConfigLayer {
            sweep_steps: Some(0),
            ..Default::default()
        }));
        assert!(bad(ConfigLayer {
            workers: Some(0),
            ..Default::default()
        }));
        assert!(bad(ConfigLayer {
            t_steps: Some(1),
            ..Default::default()
        }));
    }

    #[test]
    fn grid_values_hit_both_ends() {
        let g = GridAxis::checked("x", 0.1, 0.7, 7).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
        assert_eq!(GridAxis::checked("x", 2.0, 2.0, 1).unwrap().values(), vec![2.0]);
    }
}
