//! Squeeze-film hydrodynamic drag between the sphere and the plate.
//!
//! Reynolds lubrication limit of the sphere–plate drag:
//!
//!   F = −6πηR²·v/d · f_slip(d)
//!
//! where v is the plate velocity toward the sphere and f_slip = 1 without
//! slip. The force opposes relative motion and is linear in v, so under a
//! sinusoidal distance modulation δd·cos(ω₂t) it appears at ω₂ in
//! quadrature with the displacement. Used as a material-independent
//! consistency probe, not as an absolute gas-dynamics model; an optional
//! first-order slip length is provided for exploration.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HydrodynamicError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Air dynamic viscosity near 300 K, Pa·s.
pub const AIR_VISCOSITY_300K: f64 = 1.85e-5;

/// Slip correction applied to the Reynolds drag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum SlipModel {
    /// No-slip boundary condition, f_slip = 1.
    #[default]
    None,
    /// First-order slip with length b on both surfaces:
    /// f_slip = 1/(1 + 6b/d).
    FirstOrder { slip_length: f64 },
}

impl SlipModel {
    pub fn factor(&self, d: f64) -> f64 {
        match self {
            SlipModel::None => 1.0,
            SlipModel::FirstOrder { slip_length } => 1.0 / (1.0 + 6.0 * slip_length / d),
        }
    }
}

/// Distance-modulation channel parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HydroConfig {
    /// Gas dynamic viscosity, Pa·s.
    pub viscosity: f64,
    pub slip_model: SlipModel,
    /// Modulation angular frequency ω₂, rad/s.
    pub omega2: f64,
    /// Modulation amplitude δd, m.
    pub modulation_amplitude: f64,
}

impl HydroConfig {
    pub fn validate(&self) -> Result<(), HydrodynamicError> {
        if !(self.viscosity.is_finite() && self.viscosity > 0.0) {
            return Err(HydrodynamicError::InvalidParameter(format!(
                "viscosity must be > 0, got {}",
                self.viscosity
            )));
        }
        if !(self.modulation_amplitude.is_finite() && self.modulation_amplitude >= 0.0) {
            return Err(HydrodynamicError::InvalidParameter(
                "modulation amplitude must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Peak plate velocity ω₂·δd of the sinusoidal modulation, m/s.
    pub fn peak_velocity(&self) -> f64 {
        self.omega2 * self.modulation_amplitude
    }
}

/// Drag force on the sphere for plate velocity `v` (positive = closing),
/// newtons. Opposes the motion: sign is −sign(v).
pub fn hydrodynamic_force(
    cfg: &HydroConfig,
    radius: f64,
    d: f64,
    plate_velocity: f64,
) -> Result<f64, HydrodynamicError> {
    cfg.validate()?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(HydrodynamicError::InvalidParameter(format!(
            "radius must be > 0, got {radius}"
        )));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(HydrodynamicError::InvalidParameter(format!(
            "separation must be > 0, got {d}"
        )));
    }
    if !plate_velocity.is_finite() {
        return Err(HydrodynamicError::InvalidParameter(
            "plate velocity must be finite".into(),
        ));
    }
    Ok(-6.0 * PI * cfg.viscosity * radius * radius * plate_velocity / d * cfg.slip_model.factor(d))
}

/// Amplitude 6πηR²·ω₂·δd/d·f_slip of the quadrature force under the
/// sinusoidal modulation, newtons (≥ 0).
pub fn quadrature_amplitude(
    cfg: &HydroConfig,
    radius: f64,
    d: f64,
) -> Result<f64, HydrodynamicError> {
    Ok(hydrodynamic_force(cfg, radius, d, cfg.peak_velocity())?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn paper_cfg() -> HydroConfig {
        HydroConfig {
            viscosity: AIR_VISCOSITY_300K,
            slip_model: SlipModel::None,
            omega2: 2.0 * PI * 119.0,
            modulation_amplitude: 3.85e-9,
        }
    }

    #[test]
    fn zero_velocity_means_zero_force() {
        assert_eq!(hydrodynamic_force(&paper_cfg(), 100e-6, 100e-9, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_at_measurement_scale() {
        // v = ω₂·δd = 2π·119·3.85e-9 ≈ 2.88e-6 m/s; |F| = 6πηR²v/d ≈ 1.0e-10 N.
        let cfg = paper_cfg();
        let v = cfg.peak_velocity();
        assert!((v - 2.878e-6).abs() / v < 1e-3, "v = {v:.4e}");
        let f = quadrature_amplitude(&cfg, 100e-6, 100e-9).unwrap();
        let direct = 6.0 * PI * cfg.viscosity * 1e-8 * v / 100e-9;
        assert!((f - direct).abs() / direct < 1e-12);
        assert!((f - 1.0e-10).abs() / 1.0e-10 < 0.05, "F = {f:.4e}");
    }

    #[test]
    fn inverse_distance_law() {
        let cfg = paper_cfg();
        let f1 = hydrodynamic_force(&cfg, 100e-6, 100e-9, 1e-6).unwrap();
        let f2 = hydrodynamic_force(&cfg, 100e-6, 200e-9, 1e-6).unwrap();
        assert!(((f1 / f2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn slip_reduces_drag() {
        let no_slip = paper_cfg();
        let slip = HydroConfig {
            slip_model: SlipModel::FirstOrder { slip_length: 68e-9 },
            ..no_slip
        };
        let d = 100e-9;
        let f0 = quadrature_amplitude(&no_slip, 100e-6, d).unwrap();
        let f1 = quadrature_amplitude(&slip, 100e-6, d).unwrap();
        assert!(f1 < f0);
        assert!((f1 / f0 - 1.0 / (1.0 + 6.0 * 68.0 / 100.0)).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Drag is odd in v and always opposes the motion.
        #[test]
        fn odd_in_velocity(v in 1e-9f64..1e-3, d_nm in 20.0f64..2000.0) {
            let cfg = paper_cfg();
            let d = d_nm * 1e-9;
            let fwd = hydrodynamic_force(&cfg, 100e-6, d, v).unwrap();
            let bwd = hydrodynamic_force(&cfg, 100e-6, d, -v).unwrap();
            prop_assert_eq!(fwd, -bwd);
            prop_assert!(fwd < 0.0);
        }
    }
}
