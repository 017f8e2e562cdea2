//! Named material collection with bundled defaults and a TOML-based
//! configuration format (schema in `docs/formats.md`).
//!
//! Bundled models:
//! * `gold` — Drude with literature-typical ω_p = 9.0 eV, γ = 0.035 eV.
//!   These are conventional film values, not fitted to any specific sample.
//! * `ito` — Drude term sized to the sheet-resistance constraint
//!   ε₀ω_p²/γ ≈ 1/ρ with ρ = 1.6e-4 Ω·cm, plus one UV Lorentz pole for the
//!   interband background of the transparent oxide.
//! * `glass` — single UV pole giving ε(0) ≈ 2.1 (float-glass substrate).
//! * `vacuum` — ε ≡ 1.
//! * `ideal-metal` — sentinel for a perfect reflector; it has no
//!   dielectric function and is special-cased by the reflection engine.

use super::{
    ingest_nk_table, DielectricModel, LorentzPole, LowFreqExtension, MaterialError,
};
use crate::constants::ev_to_rad_s;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::io::BufReader;
use std::path::Path;

/// Library entry: a real model or the perfect-reflector sentinel.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialEntry {
    IdealMetal,
    Model(DielectricModel),
}

/// Named map from material identifier to entry.
#[derive(Debug, Clone, Default)]
pub struct MaterialLibrary {
    entries: BTreeMap<String, MaterialEntry>,
}

/// Nominal ITO resistivity used to size the bundled Drude term, Ω·m.
pub const ITO_RESISTIVITY_OHM_M: f64 = 1.6e-6;

impl MaterialLibrary {
    /// Empty library.
    pub fn new() -> MaterialLibrary {
        MaterialLibrary::default()
    }

    /// Library preloaded with the bundled defaults.
    pub fn with_defaults() -> MaterialLibrary {
        let mut lib = MaterialLibrary::new();
        lib.insert("gold", MaterialEntry::Model(default_gold()));
        lib.insert("ito", MaterialEntry::Model(default_ito()));
        lib.insert("glass", MaterialEntry::Model(default_glass()));
        lib.insert("vacuum", MaterialEntry::Model(DielectricModel::vacuum()));
        lib.insert("ideal-metal", MaterialEntry::IdealMetal);
        lib
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: MaterialEntry) {
        self.entries.insert(name.into(), entry);
    }

    /// Lookup; unknown names fail explicitly.
    pub fn get(&self, name: &str) -> Result<&MaterialEntry, MaterialError> {
        self.entries
            .get(name)
            .ok_or_else(|| MaterialError::UnknownMaterial(name.to_string()))
    }

    /// Lookup that must resolve to an evaluable model (not the sentinel).
    pub fn model(&self, name: &str) -> Result<&DielectricModel, MaterialError> {
        match self.get(name)? {
            MaterialEntry::IdealMetal => Err(MaterialError::IdealMetalHasNoModel),
            MaterialEntry::Model(m) => Ok(m),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Merge definitions from a TOML document (see `docs/formats.md`).
    /// `base_dir` resolves relative `nk-table` paths.
    pub fn load_toml(&mut self, text: &str, base_dir: Option<&Path>) -> Result<(), MaterialError> {
        let doc: MaterialsDoc =
            toml::from_str(text).map_err(|e| MaterialError::Config(e.to_string()))?;
        for (name, spec) in doc.materials {
            let entry = spec.build(base_dir)?;
            if let MaterialEntry::Model(m) = &entry {
                m.validate()?;
            }
            self.entries.insert(name, entry);
        }
        Ok(())
    }
}

fn default_gold() -> DielectricModel {
    DielectricModel::Drude {
        plasma_frequency: ev_to_rad_s(9.0),
        relaxation_rate: ev_to_rad_s(0.035),
    }
}

fn default_ito() -> DielectricModel {
    DielectricModel::Composite {
        terms: vec![
            DielectricModel::Drude {
                plasma_frequency: ev_to_rad_s(1.8),
                relaxation_rate: ev_to_rad_s(0.1),
            },
            DielectricModel::LorentzPoles {
                poles: vec![LorentzPole {
                    strength: 2.8,
                    resonance: ev_to_rad_s(6.5),
                    damping: ev_to_rad_s(0.5),
                }],
            },
        ],
    }
}

fn default_glass() -> DielectricModel {
    DielectricModel::LorentzPoles {
        poles: vec![LorentzPole {
            strength: 1.1,
            resonance: ev_to_rad_s(13.0),
            damping: 0.0,
        }],
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialsDoc {
    materials: BTreeMap<String, ModelSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ModelSpec {
    Vacuum,
    IdealMetal,
    Drude {
        plasma_frequency_ev: f64,
        relaxation_rate_ev: f64,
    },
    Lorentz {
        poles: Vec<PoleSpec>,
    },
    NkTable {
        path: String,
        low_freq_extension: LowFreqSpec,
    },
    Composite {
        terms: Vec<ModelSpec>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoleSpec {
    strength: f64,
    resonance_ev: f64,
    #[serde(default)]
    damping_ev: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum LowFreqSpec {
    Zero,
    InverseOmega,
}

impl ModelSpec {
    fn build(self, base_dir: Option<&Path>) -> Result<MaterialEntry, MaterialError> {
        Ok(match self {
            ModelSpec::Vacuum => MaterialEntry::Model(DielectricModel::vacuum()),
            ModelSpec::IdealMetal => MaterialEntry::IdealMetal,
            ModelSpec::Drude {
                plasma_frequency_ev,
                relaxation_rate_ev,
            } => MaterialEntry::Model(DielectricModel::Drude {
                plasma_frequency: ev_to_rad_s(plasma_frequency_ev),
                relaxation_rate: ev_to_rad_s(relaxation_rate_ev),
            }),
            ModelSpec::Lorentz { poles } => MaterialEntry::Model(DielectricModel::LorentzPoles {
                poles: poles
                    .into_iter()
                    .map(|p| LorentzPole {
                        strength: p.strength,
                        resonance: ev_to_rad_s(p.resonance_ev),
                        damping: ev_to_rad_s(p.damping_ev),
                    })
                    .collect(),
            }),
            ModelSpec::NkTable {
                path,
                low_freq_extension,
            } => {
                let resolved = match base_dir {
                    Some(dir) => dir.join(&path),
                    None => Path::new(&path).to_path_buf(),
                };
                let file = std::fs::File::open(&resolved).map_err(|e| {
                    MaterialError::Config(format!("cannot open {}: {e}", resolved.display()))
                })?;
                let low = match low_freq_extension {
                    LowFreqSpec::Zero => LowFreqExtension::Zero,
                    LowFreqSpec::InverseOmega => LowFreqExtension::InverseOmega,
                };
                MaterialEntry::Model(DielectricModel::TabulatedLoss(ingest_nk_table(
                    BufReader::new(file),
                    low,
                )?))
            }
            ModelSpec::Composite { terms } => {
                let mut models = Vec::with_capacity(terms.len());
                for t in terms {
                    match t.build(base_dir)? {
                        MaterialEntry::Model(m) => models.push(m),
                        MaterialEntry::IdealMetal => {
                            return Err(MaterialError::Config(
                                "ideal-metal cannot be a composite term".into(),
                            ))
                        }
                    }
                }
                MaterialEntry::Model(DielectricModel::Composite { terms: models })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::VACUUM_PERMITTIVITY;

    #[test]
    fn defaults_are_present_and_valid() {
        let lib = MaterialLibrary::with_defaults();
        for name in ["gold", "ito", "glass", "vacuum"] {
            let m = lib.model(name).unwrap();
            m.validate().unwrap();
            assert!(m.eval_epsilon(1e15).unwrap() >= 1.0);
        }
        assert!(matches!(lib.get("ideal-metal").unwrap(), MaterialEntry::IdealMetal));
    }

    #[test]
    fn unknown_lookup_fails() {
        let lib = MaterialLibrary::with_defaults();
        assert!(matches!(
            lib.get("unobtainium"),
            Err(MaterialError::UnknownMaterial(_))
        ));
    }

    #[test]
    fn ideal_metal_has_no_model() {
        let lib = MaterialLibrary::with_defaults();
        assert!(matches!(
            lib.model("ideal-metal"),
            Err(MaterialError::IdealMetalHasNoModel)
        ));
    }

    /// The bundled ITO Drude term must satisfy ε₀ω_p²/γ = 1/ρ within a
    /// factor of 2 of ρ = 1.6e-4 Ω·cm.
    #[test]
    fn ito_satisfies_resistivity_constraint() {
        let lib = MaterialLibrary::with_defaults();
        let ito = lib.model("ito").unwrap();
        let (wp, gamma) = match ito {
            DielectricModel::Composite { terms } => terms
                .iter()
                .find_map(|t| match t {
                    DielectricModel::Drude {
                        plasma_frequency,
                        relaxation_rate,
                    } => Some((*plasma_frequency, *relaxation_rate)),
                    _ => None,
                })
                .expect("ITO default must contain a Drude term"),
            _ => panic!("ITO default must be a composite"),
        };
        let dc_conductivity = VACUUM_PERMITTIVITY * wp * wp / gamma;
        let target = 1.0 / ITO_RESISTIVITY_OHM_M;
        let ratio = dc_conductivity / target;
        assert!(
            (0.5..=2.0).contains(&ratio),
            "σ(0)/ (1/ρ) = {ratio:.3} outside [0.5, 2.0]"
        );
    }

    #[test]
    fn glass_static_epsilon_near_2_1() {
        let lib = MaterialLibrary::with_defaults();
        let eps0 = lib.model("glass").unwrap().static_epsilon().unwrap();
        assert!((eps0 - 2.1).abs() < 0.05, "{eps0}");
    }

    #[test]
    fn toml_config_merges_and_rejects_unknown_keys() {
        let mut lib = MaterialLibrary::with_defaults();
        lib.load_toml(
            r#"
            [materials.custom-metal]
            kind = "drude"
            plasma_frequency_ev = 7.5
            relaxation_rate_ev = 0.05

            [materials.coating]
            kind = "composite"
            [[materials.coating.terms]]
            kind = "drude"
            plasma_frequency_ev = 1.5
            relaxation_rate_ev = 0.08
            [[materials.coating.terms]]
            kind = "lorentz"
            [[materials.coating.terms.poles]]
            strength = 2.0
            resonance_ev = 6.0
            "#,
            None,
        )
        .unwrap();
        assert!(lib.model("custom-metal").is_ok());
        assert!(lib.model("coating").is_ok());

        let err = lib.load_toml(
            r#"
            [materials.bad]
            kind = "drude"
            plasma_frequency_ev = 7.5
            relaxation_rate_ev = 0.05
            unexpected_key = 1
            "#,
            None,
        );
        assert!(err.is_err());
    }
}
