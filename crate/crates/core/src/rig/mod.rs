//! Placeholder
pub struct RigConfig;
pub struct RunRecord;
pub struct TruthRecord;
