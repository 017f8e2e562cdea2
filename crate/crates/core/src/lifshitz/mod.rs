//! Finite-temperature Casimir pressure and free energy between layered
//! mirrors across a vacuum gap, and the proximity-force mapping to the
//! sphere–plate geometry.
//!
//! The pressure between two parallel mirrors at separation `d` is the
//! Matsubara sum
//!
//!   P(d) = −(k_B T/π) Σ'_{l≥0} ∫₀^∞ k·q_l Σ_p (r₁r₂)_p e^(−2q_l d)
//!          / (1 − (r₁r₂)_p e^(−2q_l d)) dk
//!
//! with q_l² = k² + ξ_l²/c², ξ_l = 2πk_B T l/ħ, polarisations p ∈ {TE, TM},
//! and the l = 0 term weighted ½ (the prime). The free energy per unit area
//! replaces the integrand by (1/2)·k·ln(1 − (r₁r₂)_p e^(−2q_l d)) and P =
//! −∂E/∂d. Both are negative (attractive) for passive mirrors.
//!
//! The wavevector integral is evaluated after substituting y = 2q_l·d, which
//! maps it onto ∫ e^(−y)·(smooth) with a separation-independent node budget;
//! a Gauss–Laguerre ladder refines until the requested tolerance is met.

mod engine;
mod reflection;

pub use engine::{
    plate_plate_free_energy, plate_plate_pressure, pressure_curve, sphere_plate_force,
    sphere_plate_force_gradient, SpherePlateResult,
};
pub use reflection::reflection_coefficients;

use crate::constants::{BOLTZMANN, HBAR};
use crate::materials::{DielectricModel, MaterialEntry, MaterialError, MaterialLibrary};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LifshitzError {
    #[error("material: {0}")]
    Material(#[from] MaterialError),
    #[error("invalid mirror: {0}")]
    InvalidMirror(String),
    #[error("separation must be within [1 nm, 10 um], got {0:.3e} m")]
    SeparationOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "Matsubara sum not converged: {terms} terms reached the cap with \
         relative tail estimate {tail_estimate:.3e} (target {target:.1e})"
    )]
    MatsubaraNotConverged {
        terms: usize,
        tail_estimate: f64,
        target: f64,
    },
    #[error(
        "wavevector quadrature not converged: achieved {achieved:.3e} \
         relative (target {target:.1e})"
    )]
    QuadratureNotConverged { achieved: f64, target: f64 },
}

/// Handling of the l = 0 Matsubara term, where the Fresnel coefficients of
/// conductors are ambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroFrequencyPolicy {
    /// r_TE(0) = 0 everywhere; r_TM(0) = 1 for conductors, electrostatic
    /// limit (ε(0) − 1)/(ε(0) + 1) recursion otherwise.
    #[default]
    Drude,
    /// As above for TM, but conductors keep a finite TE reflection built
    /// from their plasma frequency: k_m = √(k² + ω_p²/c²).
    Plasma,
}

impl ZeroFrequencyPolicy {
    pub fn name(self) -> &'static str {
        match self {
            ZeroFrequencyPolicy::Drude => "drude",
            ZeroFrequencyPolicy::Plasma => "plasma",
        }
    }
}

/// One finite-thickness film of a layered mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorLayer {
    pub material: DielectricModel,
    /// Film thickness in meters, > 0.
    pub thickness: f64,
}

/// Stack of films (outermost first) on a semi-infinite substrate, facing
/// the vacuum gap.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredMirror {
    layers: Vec<MirrorLayer>,
    substrate: Substrate,
}

#[derive(Debug, Clone, PartialEq)]
enum Substrate {
    Ideal,
    Model(DielectricModel),
}

impl LayeredMirror {
    /// Bare half-space of one material.
    pub fn half_space(material: DielectricModel) -> Result<LayeredMirror, LifshitzError> {
        material.validate()?;
        Ok(LayeredMirror {
            layers: Vec::new(),
            substrate: Substrate::Model(material),
        })
    }

    /// Perfect-reflector sentinel: r_TE = −1, r_TM = +1 at every (ξ, k).
    pub fn ideal_metal() -> LayeredMirror {
        LayeredMirror {
            layers: Vec::new(),
            substrate: Substrate::Ideal,
        }
    }

    /// Film stack on a substrate. Layers are ordered outermost first.
    pub fn stack(
        layers: Vec<MirrorLayer>,
        substrate: DielectricModel,
    ) -> Result<LayeredMirror, LifshitzError> {
        for (i, layer) in layers.iter().enumerate() {
            layer.material.validate()?;
            if !(layer.thickness.is_finite() && layer.thickness > 0.0) {
                return Err(LifshitzError::InvalidMirror(format!(
                    "layer {i}: thickness must be finite and > 0, got {}",
                    layer.thickness
                )));
            }
        }
        substrate.validate()?;
        Ok(LayeredMirror {
            layers,
            substrate: Substrate::Model(substrate),
        })
    }

    /// Resolve a mirror description against a material library: a bare
    /// substrate name plus (material, thickness) films on top.
    pub fn from_library(
        library: &MaterialLibrary,
        films: &[(&str, f64)],
        substrate: &str,
    ) -> Result<LayeredMirror, LifshitzError> {
        match library.get(substrate)? {
            MaterialEntry::IdealMetal => {
                if films.is_empty() {
                    Ok(LayeredMirror::ideal_metal())
                } else {
                    Err(LifshitzError::InvalidMirror(
                        "the ideal-metal sentinel cannot carry films".into(),
                    ))
                }
            }
            MaterialEntry::Model(sub) => {
                let mut layers = Vec::with_capacity(films.len());
                for &(name, thickness) in films {
                    match library.get(name)? {
                        MaterialEntry::IdealMetal => {
                            return Err(LifshitzError::InvalidMirror(
                                "the ideal-metal sentinel cannot be a film".into(),
                            ))
                        }
                        MaterialEntry::Model(m) => layers.push(MirrorLayer {
                            material: m.clone(),
                            thickness,
                        }),
                    }
                }
                LayeredMirror::stack(layers, sub.clone())
            }
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self.substrate, Substrate::Ideal)
    }

    pub fn layers(&self) -> &[MirrorLayer] {
        &self.layers
    }

    pub(crate) fn substrate_model(&self) -> Option<&DielectricModel> {
        match &self.substrate {
            Substrate::Ideal => None,
            Substrate::Model(m) => Some(m),
        }
    }
}

/// Cutoff rule for the Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    /// Stop once the geometric tail extrapolation of the last 5 terms
    /// drops below this fraction of the partial sum.
    pub tail_fraction: f64,
    /// Hard cap on the number of terms. Sized for T = 300 K sweeps
    /// (d = 50 nm needs several hundred terms); cryogenic evaluations must
    /// raise it explicitly.
    pub max_terms: usize,
}

impl Default for CutoffPolicy {
    fn default() -> CutoffPolicy {
        CutoffPolicy {
            tail_fraction: 1e-8,
            max_terms: 2000,
        }
    }
}

/// Matsubara frequencies ξ_l = 2π k_B T l / ħ with an adaptive cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatsubaraGrid {
    temperature: f64,
    cutoff: CutoffPolicy,
}

impl MatsubaraGrid {
    pub fn new(temperature: f64, cutoff: CutoffPolicy) -> Result<MatsubaraGrid, LifshitzError> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(LifshitzError::InvalidParameter(format!(
                "temperature must be > 0, got {temperature}"
            )));
        }
        if !(cutoff.tail_fraction > 0.0 && cutoff.tail_fraction < 1.0) {
            return Err(LifshitzError::InvalidParameter(
                "cutoff tail fraction must be in (0, 1)".into(),
            ));
        }
        if cutoff.max_terms < 2 {
            return Err(LifshitzError::InvalidParameter(
                "cutoff must allow at least 2 terms".into(),
            ));
        }
        Ok(MatsubaraGrid {
            temperature,
            cutoff,
        })
    }

    /// Grid at temperature `t` with the default cutoff policy.
    pub fn at_temperature(t: f64) -> Result<MatsubaraGrid, LifshitzError> {
        MatsubaraGrid::new(t, CutoffPolicy::default())
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn cutoff(&self) -> CutoffPolicy {
        self.cutoff
    }

    /// Spacing 2πk_B T/ħ between consecutive frequencies, rad/s.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * BOLTZMANN * self.temperature / HBAR
    }

    /// ξ_l; ξ_0 = 0 by construction.
    pub fn xi(&self, l: usize) -> f64 {
        self.spacing() * l as f64
    }

    /// The first `count` frequencies, starting at ξ_0 = 0.
    pub fn frequencies(&self, count: usize) -> Vec<f64> {
        (0..count).map(|l| self.xi(l)).collect()
    }
}

/// Construct the grid; mirrors the operation name used by callers.
pub fn matsubara_frequencies(
    temperature: f64,
    cutoff: CutoffPolicy,
) -> Result<MatsubaraGrid, LifshitzError> {
    MatsubaraGrid::new(temperature, cutoff)
}

/// Transverse-wavevector quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Nodes of the first rung of the Gauss–Laguerre ladder (≥ 8).
    pub base_nodes: usize,
    /// Relative tolerance, in (0, 1e-3].
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> QuadratureSpec {
        QuadratureSpec {
            base_nodes: 16,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), LifshitzError> {
        if self.base_nodes < 8 {
            return Err(LifshitzError::InvalidParameter(format!(
                "quadrature needs >= 8 nodes, got {}",
                self.base_nodes
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-3) {
            return Err(LifshitzError::InvalidParameter(format!(
                "quadrature tolerance must be in (0, 1e-3], got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}
