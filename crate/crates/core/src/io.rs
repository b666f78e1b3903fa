//! Reading and writing generator matrices.
//!
//! Text format: one matrix row per line, entries separated by whitespace or
//! commas, matrices separated by blank lines, `#` starts a comment. A line
//! `basis: split` or `basis: diagonal` (default) sets the basis of every
//! matrix in the file.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::forms::FormBasis;
use crate::groups::GroupElement;
use crate::{GeometryError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsConfig {
    #[serde(default = "default_basis")]
    pub basis: FormBasis,
    /// Row-major matrices.
    pub generators: Vec<Vec<Vec<f64>>>,
}

fn default_basis() -> FormBasis {
    FormBasis::Diagonal
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let d = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

impl GeneratorsConfig {
    pub fn from_elements(elements: &[GroupElement]) -> Self {
        let basis = elements
            .first()
            .map_or(FormBasis::Diagonal, GroupElement::basis);
        Self {
            basis,
            generators: elements
                .iter()
                .map(|g| matrix_to_rows(g.to_basis(basis).matrix()))
                .collect(),
        }
    }

    /// Validates every matrix as an element of O(2,n).
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.generators
            .iter()
            .map(|rows| GroupElement::validate(rows_to_matrix(rows)?, self.basis))
            .collect()
    }
}

pub fn parse_json(text: &str) -> Result<GeneratorsConfig> {
    serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))
}

pub fn to_json(config: &GeneratorsConfig) -> String {
    serde_json::to_string_pretty(config).expect("plain data serializes")
}

/// Parses the text matrix format.
pub fn parse_matrices(text: &str) -> Result<GeneratorsConfig> {
    let mut basis = FormBasis::Diagonal;
    let mut generators = Vec::new();
    let mut current: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if !current.is_empty() {
                generators.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(tag) = line.strip_prefix("basis:") {
            basis = tag.trim().parse().map_err(|_| {
                GeometryError::Parse(format!(
                    "line {}: unknown basis `{}`",
                    lineno + 1,
                    tag.trim()
                ))
            })?;
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    GeometryError::Parse(format!("line {}: bad number `{s}`", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        current.push(row);
    }
    if !current.is_empty() {
        generators.push(current);
    }
    if generators.is_empty() {
        return Err(GeometryError::Parse("no matrices found".into()));
    }
    for g in &generators {
        rows_to_matrix(g)?;
    }
    Ok(GeneratorsConfig { basis, generators })
}

pub fn format_matrices(config: &GeneratorsConfig) -> String {
    let tag = match config.basis {
        FormBasis::Diagonal => "diagonal",
        FormBasis::Split => "split",
    };
    let mut out = format!("basis: {tag}\n");
    for (k, m) in config.generators.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for row in m {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Accepts either format, choosing JSON when the text starts with `{`.
pub fn parse_generators(text: &str) -> Result<GeneratorsConfig> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_matrices(text)
    }
}
