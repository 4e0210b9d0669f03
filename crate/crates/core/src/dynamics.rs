//! Time evolution of a single momentum sector.
//!
//! Each sector is a two-level system in the Nambu basis
//! `{|1_{-k} 1_k⟩, |0_{-k} 0_k⟩}`; a state is the spinor `(u, v)`. The system
//! starts in the paramagnetic reference `(0, 1)`.
//!
//! Two routes are provided: the closed-form high-frequency solution built
//! from the Floquet modes of the effective XY chain, and a fixed-step RK4
//! integration of the full driven Bogoliubov-de Gennes Hamiltonian
//! `H_k(t) = (2g(t) - ω_k) σᶻ + Δ_k σˣ - ω_k`.
//!
//! Phase conventions: with the m = 0 quasienergies `ε±` the analytic state is
//! `Σ_± A± e^{-i ε± t} Φ±(t)` up to a global phase, i.e. each Floquet mode
//! carries `e^{-iεt}`. Only the relative phase `e^{-2iεt}` between the two
//! terms is observable, and it fixes that sign.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::model::{ModeSpectrum, ModelParams, MomentumMode};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Normalized two-component Nambu spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorState {
    /// Amplitude of the occupied pair `|1_{-k} 1_k⟩`.
    pub u: C64,
    /// Amplitude of the pair vacuum `|0_{-k} 0_k⟩`.
    pub v: C64,
}

impl SpinorState {
    pub const REFERENCE: SpinorState = SpinorState {
        u: C64 { re: 0.0, im: 0.0 },
        v: C64 { re: 1.0, im: 0.0 },
    };

    pub fn new(u: C64, v: C64) -> Self {
        Self { u, v }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &SpinorState) -> C64 {
        self.u.conj() * other.u + self.v.conj() * other.v
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(c * self.u, c * self.v)
    }

    /// Polar form `(Θ, β)`; see [`polar_decompose`].
    pub fn polar(&self) -> Result<Polar> {
        polar_decompose(self)
    }

    /// `Θ = arcsin|u|` without the normalization check.
    pub fn theta(&self) -> f64 {
        self.u.norm().clamp(0.0, 1.0).asin()
    }
}

/// `u = e^{iβ} sin Θ`, `v = cos Θ` after removing the global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    /// `Θ ∈ [0, π/2]`
    pub theta: f64,
    /// `β = arg u - arg v ∈ (-π, π]`, reported as 0 when `u` vanishes.
    pub beta: f64,
}

pub fn polar_decompose(s: &SpinorState) -> Result<Polar> {
    let n = s.norm_sqr();
    if !((n - 1.0).abs() <= 1e-6) {
        return domain(format!("polar_decompose: spinor norm² {n} differs from 1"));
    }
    let theta = s.theta();
    let beta = if s.u.norm() < 1e-14 {
        0.0
    } else {
        wrap_phase(s.u.arg() - s.v.arg())
    };
    Ok(Polar { theta, beta })
}

/// Reduce an angle to `(-π, π]`.
fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Rotating frame of the driving field, `R(t) = exp(-i α(t) σᶻ / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveFrame {
    /// Resonant field `ℓΩ/4`.
    pub g0_res: f64,
    pub g1: f64,
    pub omega: f64,
}

impl DriveFrame {
    pub fn new(p: &ModelParams) -> Self {
        Self {
            g0_res: p.resonant_field(),
            g1: p.g1,
            omega: p.omega,
        }
    }

    /// `α(t) = 4 g̃0 t + (4 g1/Ω) sin Ωt`
    pub fn alpha(&self, t: f64) -> f64 {
        4.0 * self.g0_res * t + 4.0 * self.g1 / self.omega * (self.omega * t).sin()
    }

    /// The frame with `α ≡ 0`.
    pub fn trivial() -> Self {
        Self {
            g0_res: 0.0,
            g1: 0.0,
            omega: 1.0,
        }
    }
}

/// High-frequency solution from the reference state:
/// `u = e^{-iα}(1 - e^{-2iεt}) sin ϑ cos ϑ`, `v = cos²ϑ + e^{-2iεt} sin²ϑ`.
pub fn evolve_analytic(ms: &ModeSpectrum, frame: &DriveFrame, t: f64) -> SpinorState {
    let (s, c) = ms.theta.sin_cos();
    let osc = C64::from_polar(1.0, -2.0 * ms.eps * t);
    let rot = C64::from_polar(1.0, -frame.alpha(t));
    SpinorState::new(rot * (1.0 - osc) * (s * c), c * c + osc * (s * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloquetBranch {
    Plus,
    Minus,
}

/// Floquet mode in the `(e^{iβ} sin Θ, cos Θ)` gauge:
/// `Φ⁻ = (e^{-iα} sin ϑ, cos ϑ)`,
/// `Φ⁺ = (e^{-iα - iπ} sin(ϑ - π/2), cos(ϑ - π/2))`.
pub fn floquet_mode(ms: &ModeSpectrum, frame: &DriveFrame, t: f64, branch: FloquetBranch) -> SpinorState {
    let alpha = frame.alpha(t);
    match branch {
        FloquetBranch::Minus => {
            SpinorState::new(C64::from_polar(ms.theta.sin(), -alpha), C64::new(ms.theta.cos(), 0.0))
        }
        FloquetBranch::Plus => {
            let th = ms.theta - FRAC_PI_2;
            SpinorState::new(C64::from_polar(th.sin(), -alpha - PI), C64::new(th.cos(), 0.0))
        }
    }
}

/// Floquet eigenvectors as they enter the expansion of the solution:
/// `Φ± = diag(e^{-iα}, 1) φ±` with `φ⁺ = (cos ϑ, -sin ϑ)`, `φ⁻ = (sin ϑ, cos ϑ)`.
///
/// These differ from [`floquet_mode`] only by a constant phase on `u` (for
/// `Φ⁺`), which is invisible to the complexity but matters for interference.
pub fn floquet_eigenvector(ms: &ModeSpectrum, frame: &DriveFrame, t: f64, branch: FloquetBranch) -> SpinorState {
    let rot = C64::from_polar(1.0, -frame.alpha(t));
    let (s, c) = ms.theta.sin_cos();
    match branch {
        FloquetBranch::Plus => SpinorState::new(rot * c, C64::new(-s, 0.0)),
        FloquetBranch::Minus => SpinorState::new(rot * s, C64::new(c, 0.0)),
    }
}

/// `Σ_± A± e^{-i ε± t} Φ±(t)`, equal to [`evolve_analytic`] up to the global
/// phase `e^{-i ε⁻ t}`.
pub fn floquet_expansion(ms: &ModeSpectrum, frame: &DriveFrame, t: f64) -> SpinorState {
    let plus = floquet_eigenvector(ms, frame, t, FloquetBranch::Plus)
        .scale(ms.a_plus * C64::from_polar(1.0, -ms.eps_plus * t));
    let minus = floquet_eigenvector(ms, frame, t, FloquetBranch::Minus)
        .scale(ms.a_minus * C64::from_polar(1.0, -ms.eps_minus * t));
    SpinorState::new(plus.u + minus.u, plus.v + minus.v)
}

/// Driven BdG Hamiltonian of one sector.
#[derive(Debug, Clone, Copy)]
struct BdgHamiltonian {
    omega_k: f64,
    delta_k: f64,
    g0: f64,
    g1: f64,
    drive_omega: f64,
}

impl BdgHamiltonian {
    fn new(mode: &MomentumMode, p: &ModelParams) -> Self {
        Self {
            omega_k: mode.omega_k,
            delta_k: mode.delta_k,
            g0: p.g0,
            g1: p.g1,
            drive_omega: p.omega,
        }
    }

    /// `-i H(t) ψ`
    #[inline]
    fn rhs(&self, t: f64, u: C64, v: C64) -> (C64, C64) {
        let z = 2.0 * (self.g0 + self.g1 * (self.drive_omega * t).cos()) - self.omega_k;
        let hu = (z - self.omega_k) * u + self.delta_k * v;
        let hv = self.delta_k * u + (-z - self.omega_k) * v;
        (-I * hu, -I * hv)
    }

    fn rk4_step(&self, t: f64, h: f64, u: C64, v: C64) -> (C64, C64) {
        let (k1u, k1v) = self.rhs(t, u, v);
        let (k2u, k2v) = self.rhs(t + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = self.rhs(t + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = self.rhs(t + h, u + h * k3u, v + h * k3v);
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }
}

/// Default RK4 step: one two-hundredth of a driving period, tightened to
/// `0.01/λ_max` where `λ_max = 2(|g0| + g1) + 2J` bounds the instantaneous
/// level splitting. The second bound keeps the norm drift below 1e-8 over
/// a thousand periods.
pub fn default_dt(p: &ModelParams) -> f64 {
    let lambda_max = 2.0 * (p.g0.abs() + p.g1.abs()) + 2.0 * p.j;
    (p.period() / 200.0).min(0.01 / lambda_max)
}

/// Integrate `i dψ/dt = H_k(t) ψ` from the reference state and return the
/// state at each of the (non-decreasing, non-negative) `times`. Steps are
/// shrunk so that every sample time is hit exactly.
pub fn evolve_ode_samples(mode: &MomentumMode, p: &ModelParams, times: &[f64], dt: f64) -> Result<Vec<SpinorState>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return domain(format!("evolve_ode: step must be positive, got {dt}"));
    }
    let h = BdgHamiltonian::new(mode, p);
    let mut t = 0.0;
    let (mut u, mut v) = (SpinorState::REFERENCE.u, SpinorState::REFERENCE.v);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if !(target >= t) {
            return domain(format!(
                "evolve_ode: sample times must be non-decreasing and >= 0, got {target}"
            ));
        }
        let span = target - t;
        let n = (span / dt).ceil() as u64;
        if n > 0 {
            let step = span / n as f64;
            for i in 0..n {
                (u, v) = h.rk4_step(t + i as f64 * step, step, u, v);
            }
        }
        t = target;
        out.push(SpinorState::new(u, v));
    }
    Ok(out)
}

pub fn evolve_ode(mode: &MomentumMode, p: &ModelParams, t_final: f64, dt: f64) -> Result<SpinorState> {
    Ok(evolve_ode_samples(mode, p, &[t_final], dt)?[0])
}
