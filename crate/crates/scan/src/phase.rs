//! `phase-diagram`: phase labels on a (g0, g1) grid and the critical lines
//! found between cells.

use floquet_complexity::model::{EffectiveParams, ModelParams, PhaseLabel, Validity, DEFAULT_PHASE_TOL};
use rayon::prelude::*;

use crate::config::{num, RunConfig};
use crate::error::Result;
use crate::output::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCell {
    pub g0: f64,
    pub g1: f64,
    pub dg0: f64,
    pub gamma: f64,
    pub phase: PhaseLabel,
    pub validity: Validity,
}

#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub g0s: Vec<f64>,
    pub g1s: Vec<f64>,
    /// Row-major in `(g0, g1)`: index `i * g1s.len() + j`.
    pub cells: Vec<PhaseCell>,
    /// Ising-like transitions, vertical lines at fixed `g0`.
    pub critical_g0: Vec<f64>,
    /// Anisotropic transitions, horizontal lines at fixed `g1`.
    pub critical_g1: Vec<f64>,
}

pub fn run(cfg: &RunConfig) -> Result<PhaseDiagram> {
    let g0s = cfg.g0_grid.values();
    let g1s = cfg.g1_grid.values();
    let points: Vec<(f64, f64)> = g0s.iter().flat_map(|&a| g1s.iter().map(move |&b| (a, b))).collect();
    let cells = points
        .par_iter()
        .map(|&(g0, g1)| {
            let p = ModelParams::new(cfg.j, g0, g1, cfg.omega, cfg.sites, cfg.ell)?;
            let eff = EffectiveParams::new(&p)?;
            Ok(PhaseCell {
                g0,
                g1,
                dg0: eff.dg0,
                gamma: eff.gamma,
                phase: eff.phase(DEFAULT_PHASE_TOL),
                validity: eff.validity(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (critical_g0, critical_g1) = critical_lines(&g0s, &g1s, &cells, cfg.j);
    Ok(PhaseDiagram {
        g0s,
        g1s,
        cells,
        critical_g0,
        critical_g1,
    })
}

/// Positions where the label class flips between neighbouring classified
/// cells. Cells labelled critical are skipped, so a line that falls on a
/// grid point is reported at that point.
fn flips(xs: &[f64], class: impl Fn(usize) -> Option<bool>) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for i in 0..xs.len() {
        if let Some(c) = class(i) {
            if let Some((k, prev)) = last {
                if prev != c {
                    out.push(0.5 * (xs[k] + xs[i]));
                }
            }
            last = Some((i, c));
        }
    }
    out
}

/// Sorted distinct values, merging those closer than `tol`.
fn distinct(mut xs: Vec<f64>, tol: f64) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in xs {
        if out.last().is_none_or(|&y| x - y > tol) {
            out.push(x);
        }
    }
    out
}

fn critical_lines(g0s: &[f64], g1s: &[f64], cells: &[PhaseCell], j: f64) -> (Vec<f64>, Vec<f64>) {
    let n1 = g1s.len();
    let at = |a: usize, b: usize| &cells[a * n1 + b];
    let mut vertical = Vec::new();
    for b in 0..n1 {
        vertical.extend(flips(g0s, |a| match at(a, b).phase {
            PhaseLabel::Pm => Some(true),
            PhaseLabel::Fmz | PhaseLabel::Fmy | PhaseLabel::AnisotropicCritical => Some(false),
            PhaseLabel::IsingCritical => None,
        }));
    }
    let mut horizontal = Vec::new();
    for a in 0..g0s.len() {
        if at(a, 0).dg0.abs() >= j {
            continue;
        }
        horizontal.extend(flips(g1s, |b| match at(a, b).phase {
            PhaseLabel::Fmz => Some(true),
            PhaseLabel::Fmy => Some(false),
            _ => None,
        }));
    }
    let step = |xs: &[f64]| if xs.len() > 1 { (xs[1] - xs[0]) * 0.5 } else { 0.0 };
    (distinct(vertical, step(g0s)), distinct(horizontal, step(g1s)))
}

impl PhaseDiagram {
    pub fn to_table(&self, cfg: &RunConfig) -> Table {
        let mut table = Table::new(
            cfg.header(),
            &[
                "g0",
                "g1",
                "dg0",
                "gamma",
                "phase",
                "valid",
                "detuning_ratio",
                "omega_eff_ratio",
            ],
        );
        let join = |xs: &[f64]| xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";");
        table.push_meta("critical_g0", join(&self.critical_g0));
        table.push_meta("critical_g1", join(&self.critical_g1));
        for c in &self.cells {
            table.push_row(vec![
                c.g0.into(),
                c.g1.into(),
                c.dg0.into(),
                c.gamma.into(),
                c.phase.as_str().into(),
                c.validity.valid.into(),
                c.validity.detuning_ratio.into(),
                c.validity.omega_eff_ratio.into(),
            ]);
        }
        table
    }
}
