//! Matrix files: a JSON object `{"matrices": [...], "kind": "spd" | "corr"}`
//! or a CSV file holding one matrix, one row per line.

use std::fs;
use std::path::{Path, PathBuf};

use loglie_core::corr::check_correlation;
use loglie_core::symlin::{check_positive_definite, sym_eig};
use loglie_core::SymMat;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Spd,
    Corr,
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub path: PathBuf,
    pub kind: Option<Kind>,
    pub matrices: Vec<SymMat<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFile {
    matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    kind: Option<Kind>,
}

fn context(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::parse(format!("{}: {msg}", path.display()))
}

fn to_sym(path: &Path, index: usize, rows: &[Vec<f64>]) -> Result<SymMat<f64>, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(context(path, format!("matrix {index} is not square")));
    }
    SymMat::from_rows(rows).map_err(|e| context(path, format!("matrix {index}: {e}")))
}

fn parse_json(path: &Path, text: &str) -> Result<MatrixFile, CliError> {
    let file: JsonFile = serde_json::from_str(text).map_err(|e| context(path, e))?;
    let matrices = file
        .matrices
        .iter()
        .enumerate()
        .map(|(i, rows)| to_sym(path, i, rows))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixFile {
        path: path.to_path_buf(),
        kind: file.kind,
        matrices,
    })
}

fn parse_csv(path: &Path, text: &str) -> Result<MatrixFile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| context(path, e))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| context(path, format!("`{f}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(MatrixFile {
        path: path.to_path_buf(),
        kind: None,
        matrices: vec![to_sym(path, 0, &rows)?],
    })
}

/// Reads a matrix file, choosing the format by extension and falling back to
/// sniffing for a JSON object.
pub fn load(path: &Path) -> Result<MatrixFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| context(path, e))?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let json = match ext.as_deref() {
        Some("json") => true,
        Some("csv") => false,
        _ => text.trim_start().starts_with('{'),
    };
    let file = if json {
        parse_json(path, &text)?
    } else {
        parse_csv(path, &text)?
    };
    file.check_kind()?;
    Ok(file)
}

impl MatrixFile {
    /// Enforces the declared kind, if any.
    pub fn check_kind(&self) -> Result<(), CliError> {
        for (i, m) in self.matrices.iter().enumerate() {
            let outcome = match self.kind {
                None => Ok(()),
                Some(Kind::Spd) => sym_eig(m).and_then(|e| check_positive_definite(&e)),
                Some(Kind::Corr) => check_correlation(m).map(|_| ()),
            };
            outcome.map_err(|e| {
                CliError::Membership(format!("{}: matrix {i}: {e}", self.path.display()))
            })?;
        }
        Ok(())
    }
}

/// Loads and concatenates every input file.
pub fn load_all(paths: &[PathBuf]) -> Result<Vec<SymMat<f64>>, CliError> {
    if paths.is_empty() {
        return Err(CliError::parse("no --input given"));
    }
    let mut out = Vec::new();
    for p in paths {
        out.extend(load(p)?.matrices);
    }
    let n = out.first().map(SymMat::n).unwrap_or(0);
    if out.is_empty() {
        return Err(CliError::parse("inputs contain no matrices"));
    }
    if let Some(m) = out.iter().find(|m| m.n() != n) {
        return Err(CliError::parse(format!(
            "inputs mix matrix sizes {n} and {}",
            m.n()
        )));
    }
    Ok(out)
}
