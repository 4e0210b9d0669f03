//! `oracle`: high-frequency solution against direct RK4 integration of the
//! lab-frame Bogoliubov-de Gennes equations.

use floquet_complexity::complexity::complexity_t;
use floquet_complexity::dynamics::{default_dt, evolve_ode_samples};
use floquet_complexity::model::{brillouin_momenta, EffectiveParams, ModelParams, Validity};
use rayon::prelude::*;

use crate::config::{num, RunConfig};
use crate::error::{usage, Result};
use crate::output::Table;

/// Largest chain accepted unless explicitly allowed.
pub const MAX_SITES: usize = 32;
/// Tolerated `| |u|²+|v|² - 1 |` of the integrator.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub t: f64,
    pub analytic: f64,
    pub ode: f64,
    pub diff: f64,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub params: ModelParams,
    pub dt: f64,
    pub rows: Vec<OracleRow>,
    pub max_dev: f64,
    pub norm_drift: f64,
    pub validity: Validity,
}

pub fn run(cfg: &RunConfig) -> Result<Vec<OracleRun>> {
    if cfg.sites > MAX_SITES && !cfg.allow_large {
        return usage(format!(
            "oracle is limited to L <= {MAX_SITES} (got {}); pass --allow-large to override",
            cfg.sites
        ));
    }
    let dg0 = cfg.dg0[0];
    let params = if cfg.omega_over_j.is_empty() {
        vec![ModelParams::at_detuning(
            cfg.j, dg0, cfg.g1, cfg.omega, cfg.sites, cfg.ell,
        )?]
    } else {
        // g1 follows Omega unless it was pinned relative to the base frequency
        let g1_ratio = cfg.g1 / cfg.omega;
        cfg.omega_over_j
            .iter()
            .map(|&r| {
                let omega = r * cfg.j;
                ModelParams::at_detuning(cfg.j, dg0, g1_ratio * omega, omega, cfg.sites, cfg.ell)
            })
            .collect::<floquet_complexity::Result<Vec<_>>>()?
    };
    let times = cfg.times();
    params.par_iter().map(|p| compare(p, &times, cfg.dt)).collect()
}

fn compare(p: &ModelParams, times: &[f64], dt: Option<f64>) -> Result<OracleRun> {
    let eff = EffectiveParams::new(p)?;
    let dt = dt.unwrap_or_else(|| default_dt(p));
    let modes = brillouin_momenta(p.sites, p.j)?;
    let states = modes
        .par_iter()
        .map(|m| evolve_ode_samples(m, p, times, dt))
        .collect::<floquet_complexity::Result<Vec<_>>>()?;
    let mut norm_drift = 0.0f64;
    let rows: Vec<OracleRow> = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let analytic = complexity_t(&eff, t);
            let ode: f64 = states.iter().map(|s| s[i].theta()).sum();
            for s in &states {
                norm_drift = norm_drift.max((s[i].norm_sqr() - 1.0).abs());
            }
            OracleRow {
                t,
                analytic,
                ode,
                diff: (analytic - ode).abs(),
            }
        })
        .collect();
    let max_dev = rows.iter().map(|r| r.diff).fold(0.0, f64::max);
    Ok(OracleRun {
        params: *p,
        dt,
        rows,
        max_dev,
        norm_drift,
        validity: eff.validity(),
    })
}

pub fn to_table(cfg: &RunConfig, runs: &[OracleRun]) -> Table {
    let mut table = Table::new(
        cfg.header(),
        &[
            "omega",
            "t",
            "c_analytic",
            "c_ode",
            "diff",
            "valid",
            "detuning_ratio",
            "omega_eff_ratio",
        ],
    );
    for (i, run) in runs.iter().enumerate() {
        table.push_meta(
            format!("summary.{i}"),
            format!(
                "omega={} omega_over_j={} dt={} max_dev={} norm_drift={}",
                num(run.params.omega),
                num(run.params.omega / run.params.j),
                num(run.dt),
                num(run.max_dev),
                num(run.norm_drift)
            ),
        );
    }
    for run in runs {
        for r in &run.rows {
            table.push_row(vec![
                run.params.omega.into(),
                r.t.into(),
                r.analytic.into(),
                r.ode.into(),
                r.diff.into(),
                run.validity.valid.into(),
                run.validity.detuning_ratio.into(),
                run.validity.omega_eff_ratio.into(),
            ]);
        }
    }
    table
}

/// The first run whose integrator drifted off the unit sphere, if any.
pub fn drift_violation(runs: &[OracleRun]) -> Option<String> {
    runs.iter().find(|r| r.norm_drift > NORM_DRIFT_TOL).map(|r| {
        format!(
            "norm drift {:e} > {NORM_DRIFT_TOL:e} at omega={} (dt={})",
            r.norm_drift, r.params.omega, r.dt
        )
    })
}
