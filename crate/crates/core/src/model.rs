//! Static model data: driving parameters, the even-parity momentum grid,
//! rotating-frame effective couplings and the per-mode Floquet spectrum.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use crate::error::{domain, Result};
use crate::specfun::bessel_j;

/// Default relative tolerance for the criticality bands of [`phase_classify`].
pub const DEFAULT_PHASE_TOL: f64 = 1e-9;

/// Advisory bound on `|δg0|/Ω` and `ω_eff/Ω` for the high-frequency
/// description to be trusted.
pub const VALIDITY_RATIO: f64 = 0.1;

/// Lattice and driving parameters, all energies in the same units (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Exchange coupling `J > 0`.
    pub j: f64,
    /// Static transverse field.
    pub g0: f64,
    /// Driving amplitude.
    pub g1: f64,
    /// Driving frequency `Ω > 0`.
    pub omega: f64,
    /// Number of sites `L`, even.
    pub sites: usize,
    /// Resonance index `ℓ >= 0`.
    pub ell: u32,
}

impl ModelParams {
    pub fn new(j: f64, g0: f64, g1: f64, omega: f64, sites: usize, ell: u32) -> Result<Self> {
        let p = Self {
            j,
            g0,
            g1,
            omega,
            sites,
            ell,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `g0` placed at detuning `dg0` from the `ell`-th
    /// resonance.
    pub fn at_detuning(j: f64, dg0: f64, g1: f64, omega: f64, sites: usize, ell: u32) -> Result<Self> {
        Self::new(j, ell as f64 * omega / 4.0 + dg0, g1, omega, sites, ell)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.j, self.g0, self.g1, self.omega].iter().all(|x| x.is_finite());
        if !finite {
            return domain("model parameters must be finite");
        }
        if self.j <= 0.0 {
            return domain(format!("J must be positive, got {}", self.j));
        }
        if self.omega <= 0.0 {
            return domain(format!("Omega must be positive, got {}", self.omega));
        }
        if self.g1 < 0.0 {
            return domain(format!("g1 must be non-negative, got {}", self.g1));
        }
        check_sites(self.sites)
    }

    /// Resonant field `ℓΩ/4`.
    pub fn resonant_field(&self) -> f64 {
        self.ell as f64 * self.omega / 4.0
    }

    /// Detuning `δg0 = g0 - ℓΩ/4`.
    pub fn detuning(&self) -> f64 {
        self.g0 - self.resonant_field()
    }

    /// Driving period `2π/Ω`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Bessel argument `4 g1 / Ω`.
    pub fn drive_ratio(&self) -> f64 {
        4.0 * self.g1 / self.omega
    }
}

fn check_sites(sites: usize) -> Result<()> {
    if sites < 2 || !sites.is_multiple_of(2) {
        return domain(format!("L must be even and >= 2, got {sites}"));
    }
    Ok(())
}

/// One momentum pair `(k, -k)` with `0 < k < π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMode {
    pub k: f64,
    /// `ω_k = 2J cos k`
    pub omega_k: f64,
    /// `Δ_k = 2J sin k`
    pub delta_k: f64,
}

impl MomentumMode {
    pub fn new(k: f64, j: f64) -> Self {
        Self {
            k,
            omega_k: 2.0 * j * k.cos(),
            delta_k: 2.0 * j * k.sin(),
        }
    }
}

/// Positive momenta `k_j = (2j - 1)π/L`, `j = 1..L/2`, of the antiperiodic
/// (even-parity) sector, in increasing order.
pub fn brillouin_momenta(sites: usize, j: f64) -> Result<Vec<MomentumMode>> {
    check_sites(sites)?;
    let l = sites as f64;
    Ok((1..=sites / 2)
        .map(|n| MomentumMode::new((2 * n - 1) as f64 * PI / l, j))
        .collect())
}

/// Per-mode quantities of the effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum {
    pub mode: MomentumMode,
    /// Bogoliubov angle `ϑ_k`.
    pub theta: f64,
    /// Single-particle energy `ε_k >= 0`.
    pub eps: f64,
    /// Quasienergies `ε±_k = -ω_k ± ε_k + ℓΩ/2` (m = 0 representative).
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Overlaps of the reference state `(0, 1)` with the Floquet modes.
    pub a_plus: f64,
    pub a_minus: f64,
}

/// Rotating-frame effective couplings at the `ℓ`-th resonance together with
/// the per-mode spectrum, aligned with [`brillouin_momenta`].
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveParams {
    pub params: ModelParams,
    /// `δg0 = g0 - ℓΩ/4`
    pub dg0: f64,
    /// `γ = (-1)^ℓ J_ℓ(4 g1/Ω)`
    pub gamma: f64,
    /// `ω_eff = J |γ|`
    pub omega_eff: f64,
    /// `J(1 ± γ)/2`
    pub j_plus: f64,
    pub j_minus: f64,
    pub modes: Vec<ModeSpectrum>,
}

impl EffectiveParams {
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        let sign = if p.ell.is_multiple_of(2) { 1.0 } else { -1.0 };
        let gamma = sign * bessel_j(p.ell as i32, p.drive_ratio())?;
        Self::with_gamma(p, gamma)
    }

    /// Build the effective description with an explicit anisotropy in place
    /// of the Bessel-function value.
    pub fn with_gamma(p: &ModelParams, gamma: f64) -> Result<Self> {
        p.validate()?;
        let dg0 = p.detuning();
        let mut eff = Self {
            params: *p,
            dg0,
            gamma,
            omega_eff: p.j * gamma.abs(),
            j_plus: 0.5 * p.j * (1.0 + gamma),
            j_minus: 0.5 * p.j * (1.0 - gamma),
            modes: Vec::new(),
        };
        eff.modes = brillouin_momenta(p.sites, p.j)?
            .into_iter()
            .map(|m| eff.mode_spectrum(m))
            .collect();
        Ok(eff)
    }

    fn mode_spectrum(&self, mode: MomentumMode) -> ModeSpectrum {
        let theta = bogoliubov_angle(&mode, self);
        let (eps, eps_plus, eps_minus) = floquet_spectrum(&mode, self);
        ModeSpectrum {
            mode,
            theta,
            eps,
            eps_plus,
            eps_minus,
            a_plus: -theta.sin(),
            a_minus: theta.cos(),
        }
    }
}

/// Bogoliubov angle solving `tan 2ϑ = Δ_k γ / (2δg0 - ω_k)`.
///
/// The principal branch `ϑ ∈ [-π/4, π/4]` is used, so `ϑ → 0` whenever
/// `γ → 0` and the Floquet mode `Φ⁻` then coincides with the reference
/// state in every sector. At `2δg0 = ω_k` the angle is `±π/4` following the
/// sign of `Δ_k γ`.
pub fn bogoliubov_angle(mode: &MomentumMode, eff: &EffectiveParams) -> f64 {
    let a = 2.0 * eff.dg0 - mode.omega_k;
    let b = mode.delta_k * eff.gamma;
    if a == 0.0 {
        if b == 0.0 {
            0.0
        } else {
            FRAC_PI_4.copysign(b)
        }
    } else {
        0.5 * (b / a).atan()
    }
}

/// `(ε_k, ε⁺_k, ε⁻_k)`.
pub fn floquet_spectrum(mode: &MomentumMode, eff: &EffectiveParams) -> (f64, f64, f64) {
    let a = 2.0 * eff.dg0 - mode.omega_k;
    let b = mode.delta_k * eff.gamma;
    let eps = a.hypot(b);
    let shift = eff.params.ell as f64 * eff.params.omega / 2.0;
    (eps, -mode.omega_k + eps + shift, -mode.omega_k - eps + shift)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhaseLabel {
    Pm,
    Fmz,
    Fmy,
    IsingCritical,
    AnisotropicCritical,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Pm => "PM",
            PhaseLabel::Fmz => "FMZ",
            PhaseLabel::Fmy => "FMY",
            PhaseLabel::IsingCritical => "ISING_CRITICAL",
            PhaseLabel::AnisotropicCritical => "ANISOTROPIC_CRITICAL",
        }
    }

    pub fn is_critical(self) -> bool {
        matches!(self, PhaseLabel::IsingCritical | PhaseLabel::AnisotropicCritical)
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Phase of the effective XY chain. Critical bands of relative width `tol`
/// are checked before the bulk phases.
pub fn phase_classify(dg0: f64, gamma: f64, j: f64, tol: f64) -> PhaseLabel {
    let d = dg0.abs();
    if gamma.abs() <= tol && d < j * (1.0 - tol) {
        PhaseLabel::AnisotropicCritical
    } else if (d - j).abs() <= tol * j {
        PhaseLabel::IsingCritical
    } else if d > j {
        PhaseLabel::Pm
    } else if gamma > 0.0 {
        PhaseLabel::Fmz
    } else {
        PhaseLabel::Fmy
    }
}

impl EffectiveParams {
    pub fn phase(&self, tol: f64) -> PhaseLabel {
        phase_classify(self.dg0, self.gamma, self.params.j, tol)
    }

    pub fn validity(&self) -> Validity {
        let omega = self.params.omega;
        let detuning_ratio = self.dg0.abs() / omega;
        let omega_eff_ratio = self.omega_eff / omega;
        Validity {
            valid: detuning_ratio < VALIDITY_RATIO && omega_eff_ratio < VALIDITY_RATIO,
            detuning_ratio,
            omega_eff_ratio,
        }
    }
}

/// High-frequency validity flags: `|δg0|/Ω` and `ω_eff/Ω`, both required to
/// stay below [`VALIDITY_RATIO`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub valid: bool,
    pub detuning_ratio: f64,
    pub omega_eff_ratio: f64,
}

pub fn validity_check(p: &ModelParams) -> Result<Validity> {
    Ok(EffectiveParams::new(p)?.validity())
}
