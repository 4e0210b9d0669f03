//! Circuit complexity observables.
//!
//! The optimal SU(2) circuit from the reference `(0, 1)` to a sector state
//! `(e^{iβ} sin Θ, cos Θ)` has depth `|Θ|`, so the complexity of the chain is
//! `C(t) = Σ_k Θ_k(t)`. For the high-frequency solution this is
//! `Σ_k |arcsin(Δ_k γ sin(ε_k t) / ε_k)|`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::dynamics::FloquetBranch;
use crate::error::{domain, Result};
use crate::model::{EffectiveParams, ModelParams};
use crate::quadrature::GaussLegendre;

/// Default averaging horizon, in driving periods.
pub const DEFAULT_PERIODS: u32 = 1000;
pub const DEFAULT_SAMPLES_PER_PERIOD: u32 = 64;

/// Below this value of `ε t` the ratio `sin(εt)/ε` is replaced by its
/// Taylor expansion `t (1 - (εt)²/6)`.
const SMALL_PHASE: f64 = 1e-4;

/// `|arcsin(b sin(εt)/ε)|` for one sector, `b = Δ_k γ`.
#[inline]
fn sector_complexity(b: f64, eps: f64, t: f64) -> f64 {
    let x = eps * t;
    let ratio = if x < SMALL_PHASE {
        b * t * (1.0 - x * x / 6.0)
    } else {
        b * (x.sin() / eps)
    };
    ratio.clamp(-1.0, 1.0).asin().abs()
}

/// `C(t)` summed over all positive momenta.
pub fn complexity_t(eff: &EffectiveParams, t: f64) -> f64 {
    let gamma = eff.gamma;
    eff.modes
        .iter()
        .map(|ms| sector_complexity(ms.mode.delta_k * gamma, ms.eps, t))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub params: ModelParams,
}

/// `C(t)` at each of `times`, evaluated in parallel over time stamps.
pub fn complexity_series(eff: &EffectiveParams, times: &[f64]) -> ComplexitySeries {
    let values = times.par_iter().map(|&t| complexity_t(eff, t)).collect();
    ComplexitySeries {
        times: times.to_vec(),
        values,
        params: eff.params,
    }
}

/// Early-time growth rate `2J|γ| / sin(π/L)`.
pub fn early_slope(eff: &EffectiveParams) -> f64 {
    let p = &eff.params;
    2.0 * p.j * eff.gamma.abs() / (PI / p.sites as f64).sin()
}

/// Estimated end of the universal linear regime, `1/(2|δg0| + 2J)`.
pub fn equilibration_time(p: &ModelParams) -> f64 {
    1.0 / (2.0 * p.detuning().abs() + 2.0 * p.j)
}

/// Trapezoidal average of `C(t)` over `n_periods` driving periods sampled
/// `samples_per_period` times per period.
pub fn time_average(eff: &EffectiveParams, n_periods: u32, samples_per_period: u32) -> Result<f64> {
    if n_periods < 1 {
        return domain("time_average: need at least one period");
    }
    if samples_per_period < 4 {
        return domain(format!(
            "time_average: need at least 4 samples per period, got {samples_per_period}"
        ));
    }
    let n = n_periods as u64 * samples_per_period as u64;
    let h = n_periods as f64 * eff.params.period() / n as f64;
    let gamma = eff.gamma;
    // one partial sum per sector, combined in a fixed order
    let per_mode: Vec<f64> = eff
        .modes
        .par_iter()
        .map(|ms| {
            let b = ms.mode.delta_k * gamma;
            if b == 0.0 {
                return 0.0;
            }
            let ends = 0.5 * (sector_complexity(b, ms.eps, 0.0) + sector_complexity(b, ms.eps, n as f64 * h));
            let inner: f64 = (1..n).map(|i| sector_complexity(b, ms.eps, i as f64 * h)).sum();
            ends + inner
        })
        .collect();
    Ok(per_mode.iter().sum::<f64>() / n as f64)
}

/// Complexity of the time-independent Floquet modes:
/// `C⁻ = Σ|ϑ_k|`, `C⁺ = Σ|ϑ_k - π/2|`.
pub fn floquet_complexity(eff: &EffectiveParams, branch: FloquetBranch) -> f64 {
    eff.modes
        .iter()
        .map(|ms| match branch {
            FloquetBranch::Minus => ms.theta.abs(),
            FloquetBranch::Plus => (ms.theta - FRAC_PI_2).abs(),
        })
        .sum()
}

/// Time average and Floquet-mode complexities at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageRecord {
    pub param_value: f64,
    pub c_bar: f64,
    pub c_minus: f64,
    pub c_plus: f64,
    pub n_periods: u32,
}

pub fn average_record(
    eff: &EffectiveParams,
    param_value: f64,
    n_periods: u32,
    samples_per_period: u32,
) -> Result<AverageRecord> {
    Ok(AverageRecord {
        param_value,
        c_bar: time_average(eff, n_periods, samples_per_period)?,
        c_minus: floquet_complexity(eff, FloquetBranch::Minus),
        c_plus: floquet_complexity(eff, FloquetBranch::Plus),
        n_periods,
    })
}

/// Finite-difference derivatives of samples on a uniform grid: second-order
/// central differences inside, one-sided at the ends.
pub fn sweep_derivatives(points: &[(f64, f64)], order: u8) -> Result<Vec<(f64, f64)>> {
    let n = points.len();
    if n < 3 {
        return domain(format!("sweep_derivatives: need at least 3 points, got {n}"));
    }
    let h = points[1].0 - points[0].0;
    if !(h > 0.0) {
        return domain("sweep_derivatives: grid must be strictly increasing");
    }
    for w in points.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-6 * h {
            return domain(format!(
                "sweep_derivatives: non-uniform grid (step {} vs {h})",
                w[1].0 - w[0].0
            ));
        }
    }
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let d = |i: usize| -> f64 {
        match order {
            1 => {
                if i == 0 {
                    (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
                } else if i == n - 1 {
                    (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h)
                } else {
                    (y[i + 1] - y[i - 1]) / (2.0 * h)
                }
            }
            _ => {
                let h2 = h * h;
                if i == 0 {
                    if n >= 4 {
                        (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2
                    } else {
                        (y[0] - 2.0 * y[1] + y[2]) / h2
                    }
                } else if i == n - 1 {
                    if n >= 4 {
                        (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / h2
                    } else {
                        (y[n - 1] - 2.0 * y[n - 2] + y[n - 3]) / h2
                    }
                } else {
                    (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h2
                }
            }
        }
    };
    if order != 1 && order != 2 {
        return domain(format!("sweep_derivatives: order must be 1 or 2, got {order}"));
    }
    Ok((0..n).map(|i| (points[i].0, d(i))).collect())
}

/// Derivatives of `C̄` along a sweep.
pub fn record_derivatives(records: &[AverageRecord], order: u8) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.param_value, r.c_bar)).collect();
    sweep_derivatives(&pts, order)
}

/// Number of dyadic panels `[π 2^{-i-1}, π 2^{-i}]` used by
/// [`ising_ground_complexity`]; the leftover `[0, π 2^{-PANELS}]` is
/// integrated as one more panel.
const ISING_PANELS: i32 = 52;

/// Ground-state complexity of the undriven infinite Ising chain relative to
/// the fully polarized reference,
/// `C = (1/2π) ∫_0^π |η_k| dk`, `η_k = ½ atan2(sin k, g0/J - cos k)`.
///
/// Integrated with `n_quad`-point Gauss-Legendre on panels that halve in
/// width towards `k = 0`, where the integrand varies on the scale
/// `|g0/J - 1|`.
pub fn ising_ground_complexity(g0: f64, j: f64, n_quad: usize) -> Result<f64> {
    if !(j > 0.0) || !g0.is_finite() || !j.is_finite() {
        return domain(format!(
            "ising_ground_complexity: need finite g0 and J > 0, got g0={g0}, J={j}"
        ));
    }
    if n_quad < 64 {
        return domain(format!("ising_ground_complexity: n_quad must be >= 64, got {n_quad}"));
    }
    let g = g0 / j;
    let rule = GaussLegendre::new(n_quad);
    let eta = |k: f64| (0.5 * k.sin().atan2(g - k.cos())).abs();
    let mut total = 0.0;
    let mut hi = PI;
    for _ in 0..ISING_PANELS {
        let lo = 0.5 * hi;
        total += rule.integrate(lo, hi, eta);
        hi = lo;
    }
    total += rule.integrate(0.0, hi, eta);
    Ok(total / (2.0 * PI))
}
