//! `evolve`: C(t) for one or more detunings.

use floquet_complexity::complexity::{complexity_series, early_slope, equilibration_time};
use floquet_complexity::model::{EffectiveParams, ModelParams, DEFAULT_PHASE_TOL};
use rayon::prelude::*;

use crate::config::{num, RunConfig};
use crate::error::Result;
use crate::output::{Cell, Table};

#[derive(Debug, Clone)]
pub struct Series {
    pub dg0: f64,
    pub eff: EffectiveParams,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    /// `2J|γ|/sin(π/L)`, shared by all detunings.
    pub slope: f64,
}

pub fn run(cfg: &RunConfig) -> Result<EvolveResult> {
    let times = cfg.times();
    let effs = cfg
        .dg0
        .iter()
        .map(|&dg| {
            let p = ModelParams::at_detuning(cfg.j, dg, cfg.g1, cfg.omega, cfg.sites, cfg.ell)?;
            Ok((dg, EffectiveParams::new(&p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let series = effs
        .into_par_iter()
        .map(|(dg0, eff)| {
            let values = complexity_series(&eff, &times).values;
            Series { dg0, eff, values }
        })
        .collect::<Vec<_>>();
    let slope = early_slope(&series[0].eff);
    Ok(EvolveResult { times, series, slope })
}

impl EvolveResult {
    pub fn to_table(&self, cfg: &RunConfig) -> Table {
        let mut columns = vec!["t".to_string()];
        columns.extend((0..self.series.len()).map(|i| format!("C_{i}")));
        columns.push("slope_t".to_string());
        let mut table = Table {
            meta: cfg.header(),
            columns,
            rows: Vec::with_capacity(self.times.len()),
        };
        table.push_meta("early_slope", num(self.slope));
        for (i, s) in self.series.iter().enumerate() {
            let v = s.eff.validity();
            table.push_meta(format!("C_{i}.dg0"), num(s.dg0));
            table.push_meta(format!("C_{i}.gamma"), num(s.eff.gamma));
            table.push_meta(format!("C_{i}.phase"), s.eff.phase(DEFAULT_PHASE_TOL).as_str());
            table.push_meta(format!("C_{i}.t_star"), num(equilibration_time(&s.eff.params)));
            table.push_meta(format!("C_{i}.valid"), v.valid.to_string());
            table.push_meta(format!("C_{i}.detuning_ratio"), num(v.detuning_ratio));
            table.push_meta(format!("C_{i}.omega_eff_ratio"), num(v.omega_eff_ratio));
        }
        for (r, &t) in self.times.iter().enumerate() {
            let mut row: Vec<Cell> = vec![t.into()];
            row.extend(self.series.iter().map(|s| Cell::Num(s.values[r])));
            row.push((self.slope * t).into());
            table.push_row(row);
        }
        table
    }
}
