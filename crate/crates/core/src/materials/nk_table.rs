//! Ingestion of published (n, k) optical-constant tables into a
//! [`TabulatedLoss`] spectrum via ε''(ω) = 2nk.
//!
//! Format: UTF-8 text, one record per line, `#` starts a comment, fields
//! separated by commas or whitespace. The first non-comment line is a
//! header naming the columns, drawn from
//! {`wavelength_nm`, `omega_rad_s`, `n`, `k`}; exactly one frequency-like
//! column plus `n` and `k` must be present.

use super::{HighFreqExtension, LowFreqExtension, MaterialError, TabulatedLoss};
use crate::constants::wavelength_nm_to_rad_s;
use std::io::BufRead;

/// Recognised column names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NkColumn {
    WavelengthNm,
    OmegaRadS,
    N,
    K,
}

impl NkColumn {
    fn parse(token: &str) -> Option<NkColumn> {
        match token {
            "wavelength_nm" => Some(NkColumn::WavelengthNm),
            "omega_rad_s" => Some(NkColumn::OmegaRadS),
            "n" => Some(NkColumn::N),
            "k" => Some(NkColumn::K),
            _ => None,
        }
    }
}

/// Parse an n,k table and build the loss spectrum ε''(ω) = 2nk.
///
/// Rows may arrive in any order (descending wavelength is common); the
/// output grid is sorted ascending in ω. Duplicate frequencies and
/// negative n or k are rejected.
pub fn ingest_nk_table(
    source: impl BufRead,
    low_freq_extension: LowFreqExtension,
) -> Result<TabulatedLoss, MaterialError> {
    let mut columns: Option<Vec<NkColumn>> = None;
    let mut rows: Vec<(f64, f64)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| MaterialError::Table(format!("read error: {e}")))?;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();

        let cols = match &columns {
            None => {
                let parsed: Option<Vec<NkColumn>> =
                    fields.iter().map(|f| NkColumn::parse(f)).collect();
                let parsed = parsed.ok_or_else(|| MaterialError::TableLine {
                    line: line_no,
                    msg: format!(
                        "header must declare columns from \
                         {{wavelength_nm, omega_rad_s, n, k}}, got '{trimmed}'"
                    ),
                })?;
                let has_freq = parsed.contains(&NkColumn::WavelengthNm)
                    ^ parsed.contains(&NkColumn::OmegaRadS);
                if !has_freq || !parsed.contains(&NkColumn::N) || !parsed.contains(&NkColumn::K) {
                    return Err(MaterialError::TableLine {
                        line: line_no,
                        msg: "header must name exactly one of wavelength_nm/omega_rad_s \
                              plus n and k"
                            .into(),
                    });
                }
                columns = Some(parsed);
                continue;
            }
            Some(c) => c,
        };

        if fields.len() != cols.len() {
            return Err(MaterialError::TableLine {
                line: line_no,
                msg: format!("expected {} fields, got {}", cols.len(), fields.len()),
            });
        }
        let mut omega = f64::NAN;
        let mut n_val = f64::NAN;
        let mut k_val = f64::NAN;
        for (col, field) in cols.iter().zip(&fields) {
            let value: f64 = field.parse().map_err(|_| MaterialError::TableLine {
                line: line_no,
                msg: format!("cannot parse '{field}' as a number"),
            })?;
            match col {
                NkColumn::WavelengthNm => {
                    if value <= 0.0 {
                        return Err(MaterialError::TableLine {
                            line: line_no,
                            msg: "wavelength must be > 0".into(),
                        });
                    }
                    omega = wavelength_nm_to_rad_s(value);
                }
                NkColumn::OmegaRadS => {
                    if value <= 0.0 {
                        return Err(MaterialError::TableLine {
                            line: line_no,
                            msg: "omega must be > 0".into(),
                        });
                    }
                    omega = value;
                }
                NkColumn::N => n_val = value,
                NkColumn::K => k_val = value,
            }
        }
        if n_val < 0.0 || k_val < 0.0 {
            return Err(MaterialError::TableLine {
                line: line_no,
                msg: format!("n and k must be >= 0, got n={n_val}, k={k_val}"),
            });
        }
        rows.push((omega, 2.0 * n_val * k_val));
    }

    if columns.is_none() {
        return Err(MaterialError::Table(
            "missing header line declaring the column convention".into(),
        ));
    }
    if rows.len() < 2 {
        return Err(MaterialError::Table(format!(
            "need at least 2 data rows, got {}",
            rows.len()
        )));
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(MaterialError::Table("duplicate frequency rows".into()));
    }
    let (omega_grid, eps_imag) = rows.into_iter().unzip();
    TabulatedLoss::new(
        omega_grid,
        eps_imag,
        low_freq_extension,
        HighFreqExtension::InverseCube,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn ingest(text: &str) -> Result<TabulatedLoss, MaterialError> {
        ingest_nk_table(Cursor::new(text), LowFreqExtension::Zero)
    }

    #[test]
    fn lossless_medium_gives_zero_loss() {
        let tab = ingest(
            "# lossless test data\n\
             wavelength_nm n k\n\
             500 1 0\n\
             1000 1 0\n",
        )
        .unwrap();
        // λ = 1000 nm -> ω = 2πc/1e-6; λ = 500 nm -> 2πc/5e-7, ascending in ω.
        let w = tab.omega_grid();
        assert!((w[0] - 1.883_651_567e15).abs() / w[0] < 1e-9);
        assert!((w[1] - 3.767_303_135e15).abs() / w[1] < 1e-9);
        assert_eq!(tab.eps_imag(), &[0.0, 0.0]);
    }

    #[test]
    fn two_nk_converts_to_eps2() {
        let tab = ingest(
            "wavelength_nm n k\n\
             500 2 3\n\
             600 1.5 0.5\n",
        )
        .unwrap();
        // ε'' = 2·2·3 = 12 at ω(500 nm) ≈ 3.77e15 rad/s (the larger ω).
        assert!((tab.eps_imag()[1] - 12.0).abs() < 1e-12);
        assert!((tab.omega_grid()[1] - 3.767e15).abs() / 3.767e15 < 1e-3);
    }

    #[test]
    fn descending_wavelength_input_is_sorted() {
        let fwd = ingest(
            "wavelength_nm n k\n\
             400 1.2 0.3\n\
             700 1.1 0.1\n\
             550 1.15 0.2\n",
        )
        .unwrap();
        let rev = ingest(
            "wavelength_nm n k\n\
             700 1.1 0.1\n\
             550 1.15 0.2\n\
             400 1.2 0.3\n",
        )
        .unwrap();
        assert_eq!(fwd, rev);
        assert!(fwd.omega_grid().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn omega_convention_and_comments() {
        let tab = ingest(
            "# comment\n\
             omega_rad_s, n, k\n\
             1e15, 1.0, 0.5  # trailing comment\n\
             2e15, 1.0, 0.25\n",
        )
        .unwrap();
        assert_eq!(tab.omega_grid(), &[1e15, 2e15]);
        assert_eq!(tab.eps_imag(), &[1.0, 0.5]);
    }

    #[test]
    fn missing_header_is_an_error() {
        let err = ingest("500 1 0\n1000 1 0\n").unwrap_err();
        assert!(err.to_string().contains("header"), "{err}");
    }

    #[test]
    fn negative_k_is_rejected() {
        assert!(ingest("wavelength_nm n k\n500 1 -0.1\n600 1 0\n").is_err());
    }

    #[test]
    fn duplicate_frequency_is_rejected() {
        assert!(ingest("wavelength_nm n k\n500 1 0.1\n500 1 0.2\n600 1 0\n").is_err());
    }

    #[test]
    fn too_few_rows_is_rejected() {
        assert!(ingest("wavelength_nm n k\n500 1 0.1\n").is_err());
    }
}
