//! `selftest`: sampled invariant checks with per-suite counts.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use clap::ValueEnum;
use floquet_complexity::complexity::{complexity_t, floquet_complexity};
use floquet_complexity::dynamics::{evolve_analytic, DriveFrame, FloquetBranch};
use floquet_complexity::model::{EffectiveParams, ModelParams};
use floquet_complexity::specfun::{bessel_j, bessel_zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

pub const NORMALIZATION_SAMPLES: usize = 10_000;
pub const SYMMETRY_SAMPLES: usize = 500;
pub const IDENTITY_SAMPLES: usize = 500;
const TOL: f64 = 1e-12;
const BESSEL_RESIDUAL: f64 = 1e-11;

/// Deliberate defects for checking that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Drop the absolute value in the complexity sum whenever `γ < 0`.
    GammaSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub observed: f64,
    pub expected: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub total: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    fn check(&mut self, check: impl FnOnce() -> String, observed: f64, expected: f64, tol: f64) {
        self.total += 1;
        if !((observed - expected).abs() <= tol) {
            self.failures.push(Failure {
                check: check(),
                observed,
                expected,
                tol,
            });
        }
    }

    pub fn passed(&self) -> usize {
        self.total - self.failures.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.failures.is_empty() { "PASS" } else { "FAIL" };
            writeln!(f, "[{status}] {}: {}/{} passed", s.name, s.passed(), s.total)?;
            for x in s.failures.iter().take(10) {
                writeln!(
                    f,
                    "    {}: observed {:e}, expected {:e} (tol {:e})",
                    x.check, x.observed, x.expected, x.tol
                )?;
            }
            if s.failures.len() > 10 {
                writeln!(f, "    ... {} more", s.failures.len() - 10)?;
            }
        }
        let total: usize = self.suites.iter().map(|s| s.total).sum();
        let passed: usize = self.suites.iter().map(|s| s.passed()).sum();
        write!(f, "total: {passed}/{total} passed")
    }
}

pub fn run(seed: u64, fault: Option<Fault>) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(SelftestReport {
        suites: vec![
            bessel()?,
            normalization(&mut rng)?,
            symmetry(&mut rng, fault)?,
            identities(&mut rng)?,
        ],
    })
}

fn bessel() -> Result<SuiteReport> {
    let mut s = SuiteReport::new("bessel");
    for order in 0..=5 {
        let mut prev = 0.0;
        for i in 1..=20 {
            let z = bessel_zero(order, i)?;
            s.check(
                || format!("J_{order}(z_{i}) residual"),
                bessel_j(order, z)?.abs(),
                0.0,
                BESSEL_RESIDUAL,
            );
            s.check(
                || format!("z_{i} of J_{order} increasing"),
                f64::from(z > prev),
                1.0,
                0.0,
            );
            prev = z;
        }
    }
    for i in 10..=20 {
        let gap = bessel_zero(2, i + 1)? - bessel_zero(2, i)?;
        s.check(|| format!("J_2 zero spacing at index {i}"), gap, PI, 0.01);
    }
    for order in 1..=6 {
        for z in [0.5, 3.3, 17.0, 48.25] {
            let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
            s.check(
                || format!("parity J_-{order}({z})"),
                bessel_j(-order, z)?,
                sign * bessel_j(order, z)?,
                0.0,
            );
        }
    }
    Ok(s)
}

/// Random parameters in the high-frequency regime with `Ω = 1`.
fn sample_params(rng: &mut ChaCha8Rng) -> Result<ModelParams> {
    let j = rng.gen_range(0.002..0.02);
    let dg0 = rng.gen_range(-3.0..3.0) * j;
    let g1 = rng.gen_range(0.0..4.0);
    let sites = 2 * rng.gen_range(1..=32);
    let ell = rng.gen_range(0..=4);
    Ok(ModelParams::at_detuning(j, dg0, g1, 1.0, sites, ell)?)
}

fn normalization(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut s = SuiteReport::new("normalization");
    for n in 0..NORMALIZATION_SAMPLES {
        let p = sample_params(rng)?;
        let eff = EffectiveParams::new(&p)?;
        let ms = &eff.modes[rng.gen_range(0..eff.modes.len())];
        let t = rng.gen_range(0.0..1e4);
        let state = evolve_analytic(ms, &DriveFrame::new(&p), t);
        s.check(|| format!("sample {n}: |u|^2+|v|^2"), state.norm_sqr(), 1.0, TOL);
    }
    Ok(s)
}

fn faulty_complexity(eff: &EffectiveParams, t: f64, fault: Option<Fault>) -> f64 {
    match fault {
        Some(Fault::GammaSign) if eff.gamma < 0.0 => eff
            .modes
            .iter()
            .map(|ms| {
                (ms.mode.delta_k * eff.gamma * (ms.eps * t).sin() / ms.eps)
                    .clamp(-1.0, 1.0)
                    .asin()
            })
            .sum(),
        _ => complexity_t(eff, t),
    }
}

fn symmetry(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<SuiteReport> {
    let mut s = SuiteReport::new("symmetry");
    for n in 0..SYMMETRY_SAMPLES {
        let p = sample_params(rng)?;
        let gamma = rng.gen_range(0.0..0.6);
        let t = rng.gen_range(0.0..1e4);
        let plus = faulty_complexity(&EffectiveParams::with_gamma(&p, gamma)?, t, fault);
        let minus = faulty_complexity(&EffectiveParams::with_gamma(&p, -gamma)?, t, fault);
        s.check(|| format!("sample {n}: C(t; -gamma)"), minus, plus, TOL * plus.max(1.0));
    }
    Ok(s)
}

fn identities(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut s = SuiteReport::new("identities");
    for n in 0..IDENTITY_SAMPLES {
        let p = sample_params(rng)?;
        let eff = EffectiveParams::new(&p)?;
        let frame = DriveFrame::new(&p);
        let t = rng.gen_range(0.0..1e4);
        let direct: f64 = eff.modes.iter().map(|ms| evolve_analytic(ms, &frame, t).theta()).sum();
        let closed = complexity_t(&eff, t);
        s.check(
            || format!("sample {n}: C(t) vs sum of arcsin|u|"),
            closed,
            direct,
            TOL * direct.max(1.0),
        );
    }
    let mut tested = 0;
    while tested < IDENTITY_SAMPLES {
        let p = sample_params(rng)?;
        let eff = EffectiveParams::new(&p)?;
        if !eff.modes.iter().all(|m| (0.0..=FRAC_PI_2).contains(&m.theta)) {
            continue;
        }
        tested += 1;
        let sum = floquet_complexity(&eff, FloquetBranch::Plus) + floquet_complexity(&eff, FloquetBranch::Minus);
        let want = p.sites as f64 * PI / 4.0;
        s.check(|| format!("C+ + C- at L={}", p.sites), sum, want, TOL * want);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let r = run(7, None).unwrap();
        assert!(r.ok(), "{r}");
        assert_eq!(r.suites.len(), 4);
        assert_eq!(r.suites[1].total, NORMALIZATION_SAMPLES);
    }

    #[test]
    fn injected_fault_breaks_symmetry_only() {
        let r = run(7, Some(Fault::GammaSign)).unwrap();
        assert!(!r.ok());
        for s in &r.suites {
            assert_eq!(s.failures.is_empty(), s.name != "symmetry", "{}", s.name);
        }
    }

    #[test]
    fn report_lists_counts() {
        let text = run(1, None).unwrap().to_string();
        assert!(text.contains("[PASS] normalization: 10000/10000 passed"));
        assert!(text.ends_with("passed"));
    }
}
