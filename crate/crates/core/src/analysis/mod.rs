//! Placeholder
pub struct CalibrationResult;
pub struct EnsembleStats;
pub struct ForceCurve;
pub struct Provenance;
