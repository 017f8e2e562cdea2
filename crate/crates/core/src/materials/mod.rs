//! Dielectric functions on the imaginary frequency axis.
//!
//! Every model evaluates to a real permittivity ε(iξ) ≥ 1 that decreases
//! monotonically towards 1 as ξ → ∞. The ξ = 0 point is never evaluated
//! here; the zero-frequency behaviour is a policy decision owned by the
//! Lifshitz engine, which queries the static descriptors below instead.

mod kk;
mod library;
mod nk_table;

pub use kk::{HighFreqExtension, KkEvaluation, LowFreqExtension, TabulatedLoss};
pub use library::{MaterialEntry, MaterialLibrary};
pub use nk_table::{ingest_nk_table, NkColumn};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("imaginary frequency must be > 0, got {0}")]
    NonPositiveFrequency(f64),
    #[error("unknown material '{0}'")]
    UnknownMaterial(String),
    #[error("the ideal-metal sentinel has no dielectric function")]
    IdealMetalHasNoModel,
    #[error("n,k table: {0}")]
    Table(String),
    #[error("n,k table line {line}: {msg}")]
    TableLine { line: usize, msg: String },
    #[error("material config: {0}")]
    Config(String),
}

/// A single Lorentz oscillator, contributing f·ω₀²/(ω₀² + ξ² + Γξ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzPole {
    /// Dimensionless oscillator strength f ≥ 0.
    pub strength: f64,
    /// Resonance angular frequency ω₀ > 0, rad/s.
    pub resonance: f64,
    /// Damping rate Γ ≥ 0, rad/s.
    pub damping: f64,
}

/// Material permittivity representation evaluable on the imaginary axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DielectricModel {
    /// Free carriers: ε(iξ) = 1 + ω_p²/(ξ(ξ + γ)).
    Drude {
        /// Plasma angular frequency, rad/s.
        plasma_frequency: f64,
        /// Relaxation rate γ ≥ 0, rad/s (γ = 0 is the dissipationless
        /// plasma form).
        relaxation_rate: f64,
    },
    /// Bound charges: ε(iξ) = 1 + Σ f·ω₀²/(ω₀² + ξ² + Γξ).
    LorentzPoles { poles: Vec<LorentzPole> },
    /// Tabulated loss spectrum ε''(ω) continued to the imaginary axis by a
    /// Kramers–Kronig integral.
    TabulatedLoss(TabulatedLoss),
    /// Summed susceptibilities: ε = 1 + Σ (ε_term − 1).
    Composite { terms: Vec<DielectricModel> },
}

impl DielectricModel {
    /// Vacuum: ε(iξ) = 1 identically.
    pub fn vacuum() -> DielectricModel {
        DielectricModel::LorentzPoles { poles: Vec::new() }
    }

    /// Validate structural invariants (non-negative strengths, ascending
    /// grids, ...). Evaluation assumes a validated model.
    pub fn validate(&self) -> Result<(), MaterialError> {
        match self {
            DielectricModel::Drude {
                plasma_frequency,
                relaxation_rate,
            } => {
                if !(plasma_frequency.is_finite() && *plasma_frequency >= 0.0) {
                    return Err(MaterialError::InvalidModel(format!(
                        "Drude plasma frequency must be finite and >= 0, got {plasma_frequency}"
                    )));
                }
                if !(relaxation_rate.is_finite() && *relaxation_rate >= 0.0) {
                    return Err(MaterialError::InvalidModel(format!(
                        "Drude relaxation rate must be finite and >= 0, got {relaxation_rate}"
                    )));
                }
                Ok(())
            }
            DielectricModel::LorentzPoles { poles } => {
                for p in poles {
                    if !(p.strength.is_finite() && p.strength >= 0.0) {
                        return Err(MaterialError::InvalidModel(format!(
                            "Lorentz strength must be finite and >= 0, got {}",
                            p.strength
                        )));
                    }
                    if !(p.resonance.is_finite() && p.resonance > 0.0) {
                        return Err(MaterialError::InvalidModel(format!(
                            "Lorentz resonance must be finite and > 0, got {}",
                            p.resonance
                        )));
                    }
                    if !(p.damping.is_finite() && p.damping >= 0.0) {
                        return Err(MaterialError::InvalidModel(format!(
                            "Lorentz damping must be finite and >= 0, got {}",
                            p.damping
                        )));
                    }
                }
                Ok(())
            }
            DielectricModel::TabulatedLoss(tab) => tab.validate(),
            DielectricModel::Composite { terms } => {
                terms.iter().try_for_each(DielectricModel::validate)
            }
        }
    }

    /// ε(iξ) for ξ > 0. The ξ = 0 term of a Matsubara sum must go through
    /// the zero-frequency policy, never through this evaluator.
    pub fn eval_epsilon(&self, xi: f64) -> Result<f64, MaterialError> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(MaterialError::NonPositiveFrequency(xi));
        }
        Ok(self.eval_unchecked(xi))
    }

    pub(crate) fn eval_unchecked(&self, xi: f64) -> f64 {
        match self {
            DielectricModel::Drude {
                plasma_frequency,
                relaxation_rate,
            } => 1.0 + plasma_frequency * plasma_frequency / (xi * (xi + relaxation_rate)),
            DielectricModel::LorentzPoles { poles } => {
                let mut eps = 1.0;
                for p in poles {
                    let w0sq = p.resonance * p.resonance;
                    eps += p.strength * w0sq / (w0sq + xi * xi + p.damping * xi);
                }
                eps
            }
            DielectricModel::TabulatedLoss(tab) => tab.kk_value(xi),
            DielectricModel::Composite { terms } => {
                1.0 + terms.iter().map(|t| t.eval_unchecked(xi) - 1.0).sum::<f64>()
            }
        }
    }

    /// True when the susceptibility diverges as ξ → 0 (free carriers):
    /// the mirror behaves as a conductor in the zero-frequency term.
    pub fn is_conducting(&self) -> bool {
        match self {
            DielectricModel::Drude { plasma_frequency, .. } => *plasma_frequency > 0.0,
            DielectricModel::LorentzPoles { .. } => false,
            DielectricModel::TabulatedLoss(tab) => tab.is_conducting(),
            DielectricModel::Composite { terms } => terms.iter().any(|t| t.is_conducting()),
        }
    }

    /// Static permittivity ε(i0) for non-conducting models.
    pub fn static_epsilon(&self) -> Result<f64, MaterialError> {
        if self.is_conducting() {
            return Err(MaterialError::InvalidModel(
                "static permittivity of a conductor diverges".into(),
            ));
        }
        Ok(match self {
            DielectricModel::Drude { .. } => 1.0, // only reachable with ω_p = 0
            DielectricModel::LorentzPoles { poles } => {
                1.0 + poles.iter().map(|p| p.strength).sum::<f64>()
            }
            DielectricModel::TabulatedLoss(tab) => tab.static_value(),
            DielectricModel::Composite { terms } => {
                1.0 + terms
                    .iter()
                    .map(|t| t.static_epsilon().unwrap_or(1.0) - 1.0)
                    .sum::<f64>()
            }
        })
    }

    /// Combined free-carrier plasma frequency, when one is identifiable
    /// (used by the "plasma" zero-frequency policy). Drude terms combine as
    /// ω_p² sums; tabulated conductors expose no separable ω_p.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            DielectricModel::Drude { plasma_frequency, .. } if *plasma_frequency > 0.0 => {
                Some(*plasma_frequency)
            }
            DielectricModel::Composite { terms } => {
                let sum_sq: f64 = terms
                    .iter()
                    .filter_map(|t| t.plasma_frequency())
                    .map(|w| w * w)
                    .sum();
                (sum_sq > 0.0).then(|| sum_sq.sqrt())
            }
            _ => None,
        }
    }
}

/// eval_epsilon as a free function mirroring the operation name.
pub fn eval_epsilon(model: &DielectricModel, xi: f64) -> Result<f64, MaterialError> {
    model.eval_epsilon(xi)
}
