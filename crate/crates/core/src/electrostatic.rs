//! Electrostatic sphere–plate force: the exact bispherical image series,
//! its analytic separation derivative, and the harmonic decomposition under
//! an AC bias used by the calibration channel.
//!
//! With cosh α = 1 + d/R, the force at bias V is
//!
//!   F(d, V) = 2πε₀V² Σ_{n≥1} [coth α − n·coth(nα)] / sinh(nα)
//!
//! (negative, i.e. attractive, for any V ≠ 0). In the proximity limit
//! d ≪ R it approaches −πε₀RV²/d. Sign convention matches the Casimir
//! module: attractive force < 0, hence dF/dd > 0.

use crate::constants::VACUUM_PERMITTIVITY;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElectrostaticError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "series converges too slowly at d/R = {aspect:.3e} (achieved {achieved:.3e} \
         relative after {terms} terms)"
    )]
    SlowConvergence {
        aspect: f64,
        achieved: f64,
        terms: usize,
    },
}

/// Relative size of the last series term at which summation stops.
pub const SERIES_TOLERANCE: f64 = 1e-8;
/// Hard cap on series terms; d/R below ~1e-6 hits it and errors out.
pub const SERIES_MAX_TERMS: usize = 100_000;

/// AC excitation parameters for the calibration channel.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElectrostaticConfig {
    /// Sphere radius, m.
    pub radius: f64,
    /// AC bias amplitude V_ac, volts.
    pub v_ac_amplitude: f64,
    /// Excitation angular frequency ω₁, rad/s (far below the sensor
    /// resonance).
    pub omega1: f64,
    /// Residual (uncompensated) DC potential ΔV = V₀ − V_comp, volts.
    pub residual_v0: f64,
}

/// Harmonic content of F(t) = G(d)·(ΔV + V_ac·cos ω₁t)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectrostaticHarmonics {
    /// Time-averaged force G·(ΔV² + V_ac²/2), N.
    pub f_dc: f64,
    /// Amplitude of the cos(ω₁t) component, 2G·ΔV·V_ac, N (signed).
    pub f_omega1_amp: f64,
    /// Amplitude of the cos(2ω₁t) component, G·V_ac²/2, N (signed).
    pub f_2omega1_amp: f64,
}

fn check_geometry(radius: f64, d: f64) -> Result<(), ElectrostaticError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(ElectrostaticError::InvalidParameter(format!(
            "radius must be > 0, got {radius}"
        )));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(ElectrostaticError::InvalidParameter(format!(
            "separation must be > 0, got {d}"
        )));
    }
    Ok(())
}

/// coth via expm1: coth x = 1 + 2/(e^{2x} − 1); stable for large x.
fn coth(x: f64) -> f64 {
    if x > 350.0 {
        1.0
    } else {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    }
}

/// Exact sphere–plate electrostatic force at bias `v`, newtons (< 0).
pub fn electrostatic_force_exact(
    radius: f64,
    d: f64,
    v: f64,
) -> Result<f64, ElectrostaticError> {
    check_geometry(radius, d)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    let (sum, _) = image_series(radius, d, |n, alpha, coth_alpha| {
        let na = n * alpha;
        (coth_alpha - n * coth(na)) / sinh_safe(na)
    })?;
    Ok(2.0 * PI * VACUUM_PERMITTIVITY * v * v * sum)
}

/// Analytic ∂F/∂d at bias `v`, N/m (> 0 for the attractive force).
pub fn electrostatic_force_gradient(
    radius: f64,
    d: f64,
    v: f64,
) -> Result<f64, ElectrostaticError> {
    check_geometry(radius, d)?;
    if v == 0.0 {
        return Ok(0.0);
    }
    // dα/dd = 1/(R sinh α); differentiate each term in α.
    let alpha = alpha_of(radius, d);
    let dalpha_dd = 1.0 / (radius * sinh_safe(alpha));
    let (sum, _) = image_series(radius, d, |n, alpha, coth_alpha| {
        let na = n * alpha;
        let sinh_na = sinh_safe(na);
        let coth_na = coth(na);
        let csch2_alpha = csch_sq(alpha);
        let csch2_na = csch_sq(na);
        let a_term = coth_alpha - n * coth_na;
        // d/dα [A/sinh(nα)] = A'/sinh(nα) − A·n·coth(nα)/sinh(nα)
        let da = -csch2_alpha + n * n * csch2_na;
        (da - a_term * n * coth_na) / sinh_na
    })?;
    Ok(2.0 * PI * VACUUM_PERMITTIVITY * v * v * sum * dalpha_dd)
}

/// csch²x = 4·e^{−2x}/(1−e^{−2x})², stable for large x.
fn csch_sq(x: f64) -> f64 {
    if x > 350.0 {
        0.0
    } else {
        let e = (-2.0 * x).exp();
        4.0 * e / ((1.0 - e) * (1.0 - e))
    }
}

/// sinh via exponentials; returns +inf gracefully past overflow.
fn sinh_safe(x: f64) -> f64 {
    if x > 700.0 {
        f64::INFINITY
    } else {
        x.sinh()
    }
}

fn alpha_of(radius: f64, d: f64) -> f64 {
    // cosh α = 1 + d/R; acosh via ln form is fine at our scales.
    (1.0 + d / radius).acosh()
}

/// Shared series driver: Σ_{n≥1} term(n, α), truncated when the last term
/// drops below `SERIES_TOLERANCE` of the partial sum.
fn image_series(
    radius: f64,
    d: f64,
    term: impl Fn(f64, f64, f64) -> f64,
) -> Result<(f64, usize), ElectrostaticError> {
    let alpha = alpha_of(radius, d);
    let coth_alpha = coth(alpha);
    let mut sum = 0.0;
    for n in 1..=SERIES_MAX_TERMS {
        let t = term(n as f64, alpha, coth_alpha);
        sum += t;
        if n > 3 && t.abs() <= SERIES_TOLERANCE * sum.abs() {
            return Ok((sum, n));
        }
    }
    let last = term(SERIES_MAX_TERMS as f64, alpha, coth_alpha);
    Err(ElectrostaticError::SlowConvergence {
        aspect: d / radius,
        achieved: (last / sum).abs(),
        terms: SERIES_MAX_TERMS,
    })
}

/// Force per squared volt, G(d) = F(d, 1 V), N/V² (< 0).
pub fn force_per_volt_squared(radius: f64, d: f64) -> Result<f64, ElectrostaticError> {
    electrostatic_force_exact(radius, d, 1.0)
}

/// Gradient per squared volt, G'(d) = ∂G/∂d, N/(V²·m) (> 0).
pub fn gradient_per_volt_squared(radius: f64, d: f64) -> Result<f64, ElectrostaticError> {
    electrostatic_force_gradient(radius, d, 1.0)
}

/// Harmonic decomposition of the electrostatic force under
/// V(t) = ΔV + V_ac·cos(ω₁t): pure algebra on G(d).
pub fn electrostatic_harmonics(
    cfg: &ElectrostaticConfig,
    d: f64,
) -> Result<ElectrostaticHarmonics, ElectrostaticError> {
    let g = force_per_volt_squared(cfg.radius, d)?;
    let dv = cfg.residual_v0;
    let vac = cfg.v_ac_amplitude;
    Ok(ElectrostaticHarmonics {
        f_dc: g * (dv * dv + 0.5 * vac * vac),
        f_omega1_amp: 2.0 * g * dv * vac,
        f_2omega1_amp: 0.5 * g * vac * vac,
    })
}

/// Proximity-limit force magnitude πε₀RV²/d (for checks and initial
/// guesses; the exact series approaches −this as d/R → 0).
pub fn pfa_force_magnitude(radius: f64, d: f64, v: f64) -> f64 {
    PI * VACUUM_PERMITTIVITY * radius * v * v / d
}
