//! `average`: time-averaged complexity along a sweep of g0 or g1.

use floquet_complexity::complexity::{average_record, sweep_derivatives, AverageRecord};
use floquet_complexity::model::{EffectiveParams, ModelParams, PhaseLabel, Validity, DEFAULT_PHASE_TOL};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepAxis};
use crate::error::Result;
use crate::output::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub g0: f64,
    pub g1: f64,
    pub dg0: f64,
    pub gamma: f64,
    pub average: AverageRecord,
    /// `dC̄/dx` and `d²C̄/dx²`; NaN for sweeps shorter than three points.
    pub d1: f64,
    pub d2: f64,
    pub phase: PhaseLabel,
    pub validity: Validity,
}

pub const COLUMNS: [&str; 15] = [
    "value",
    "g0",
    "g1",
    "dg0",
    "gamma",
    "c_bar",
    "c_minus",
    "c_plus",
    "dc_bar",
    "d2c_bar",
    "phase",
    "valid",
    "detuning_ratio",
    "omega_eff_ratio",
    "periods",
];

/// One record for each value of the sweep axis, ascending.
pub fn run(cfg: &RunConfig) -> Result<Vec<SweepRecord>> {
    let params = cfg
        .sweep
        .values()
        .into_iter()
        .map(|x| {
            let (g0, g1) = match cfg.sweep_axis {
                SweepAxis::G0 => (x, cfg.g1),
                SweepAxis::G1 => (cfg.g0, x),
            };
            Ok((x, ModelParams::new(cfg.j, g0, g1, cfg.omega, cfg.sites, cfg.ell)?))
        })
        .collect::<Result<Vec<_>>>()?;
    sweep(&params, cfg.periods, cfg.samples_per_period)
}

/// Average over an explicit list of `(axis value, parameters)` points, which
/// must be evenly spaced for the derivative columns to be filled.
pub fn sweep(points: &[(f64, ModelParams)], periods: u32, samples_per_period: u32) -> Result<Vec<SweepRecord>> {
    let mut records = points
        .par_iter()
        .map(|&(x, p)| {
            let eff = EffectiveParams::new(&p)?;
            let average = average_record(&eff, x, periods, samples_per_period)?;
            Ok(SweepRecord {
                value: x,
                g0: p.g0,
                g1: p.g1,
                dg0: eff.dg0,
                gamma: eff.gamma,
                average,
                d1: f64::NAN,
                d2: f64::NAN,
                phase: eff.phase(DEFAULT_PHASE_TOL),
                validity: eff.validity(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.value.total_cmp(&b.value));
    if records.len() >= 3 {
        let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.value, r.average.c_bar)).collect();
        let d1 = sweep_derivatives(&pts, 1)?;
        let d2 = sweep_derivatives(&pts, 2)?;
        for (r, (a, b)) in records.iter_mut().zip(d1.iter().zip(&d2)) {
            r.d1 = a.1;
            r.d2 = b.1;
        }
    }
    Ok(records)
}

pub fn to_table(cfg: &RunConfig, records: &[SweepRecord]) -> Table {
    let mut table = Table::new(cfg.header(), &COLUMNS);
    for r in records {
        table.push_row(vec![
            r.value.into(),
            r.g0.into(),
            r.g1.into(),
            r.dg0.into(),
            r.gamma.into(),
            r.average.c_bar.into(),
            r.average.c_minus.into(),
            r.average.c_plus.into(),
            r.d1.into(),
            r.d2.into(),
            r.phase.as_str().into(),
            r.validity.valid.into(),
            r.validity.detuning_ratio.into(),
            r.validity.omega_eff_ratio.into(),
            Cell::Int(r.average.n_periods as i64),
        ]);
    }
    table
}
