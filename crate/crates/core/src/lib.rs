//! Surface-force computations between layered mirrors and a virtual
//! force-spectroscopy experiment built on top of them.
//!
//! The crate is organised around the pipeline used by sphere–plate Casimir
//! measurements in air:
//!
//! * [`materials`] — dielectric functions on the imaginary frequency axis,
//!   including Kramers–Kronig continuation of tabulated optical data.
//! * [`lifshitz`] — finite-temperature Casimir pressure and free energy
//!   between layered mirrors, plus the proximity-force mapping to the
//!   sphere–plate geometry.
//! * [`electrostatic`] / [`hydrodynamic`] — the auxiliary sphere–plate
//!   forces used for calibration (AC bias harmonics) and as a
//!   velocity-proportional consistency probe (squeeze-film drag).
//! * [`rig`] — simulation of one calibration/measurement run: stepped piezo
//!   sweep, residual-voltage nulling feedback, distance modulation, dual
//!   lock-in outputs, noise and drift.
//! * [`analysis`] — the experimenter's side: calibration fits, background
//!   subtraction, force-gradient extraction and ensemble statistics.
//!
//! Sign conventions used throughout: attractive forces and pressures are
//! negative, so the force gradient `dF/dd` of an attractive interaction is
//! positive. Quantities plotted "per sphere radius" divide by `R`.

pub mod analysis;
pub mod constants;
pub mod electrostatic;
pub mod hydrodynamic;
pub mod lifshitz;
pub mod materials;
pub mod numerics;
pub mod output;
pub mod rig;

pub use analysis::{CalibrationResult, EnsembleStats, ForceCurve, Provenance};
pub use lifshitz::{LayeredMirror, MatsubaraGrid, QuadratureSpec, ZeroFrequencyPolicy};
pub use materials::{DielectricModel, MaterialLibrary};
pub use rig::{RigConfig, RunRecord, TruthRecord};
