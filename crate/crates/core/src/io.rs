//! JSON file formats.
//!
//! Matrices are `{"dim": N, "data": [[re, im], ...]}` in row-major order,
//! κ vectors are bare arrays of `[re, im]` pairs. Every float is written with
//! 17 significant digits so that a write/read cycle is bit-exact.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{c64, ComplexMatrix, C64};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

/// A float that serializes with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn format_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_num(self.0))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

pub fn pair(z: C64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

pub fn pairs(values: &[C64]) -> Vec<[Num; 2]> {
    values.iter().copied().map(pair).collect()
}

#[derive(Debug, Serialize)]
pub struct MatrixFileOut {
    pub dim: usize,
    pub data: Vec<[Num; 2]>,
}

impl From<&ComplexMatrix> for MatrixFileOut {
    fn from(m: &ComplexMatrix) -> Self {
        Self { dim: m.dim(), data: pairs(&m.row_major()) }
    }
}

#[derive(Debug, Deserialize)]
struct MatrixFileIn {
    dim: usize,
    data: Vec<[f64; 2]>,
}

/// Pretty JSON with every two-number array kept on one line.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let pretty = serde_json::to_string_pretty(value).expect("serializable");
    let lines: Vec<&str> = pretty.lines().collect();
    let is_number = |l: &str| {
        let t = l.trim().trim_end_matches(',');
        t == "null" || t.parse::<f64>().is_ok()
    };
    let mut out = String::with_capacity(pretty.len());
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        if line.trim_end().ends_with('[')
            && i + 3 < lines.len()
            && is_number(lines[i + 1])
            && lines[i + 1].trim_end().ends_with(',')
            && is_number(lines[i + 2])
            && !lines[i + 2].trim_end().ends_with(',')
            && lines[i + 3].trim_start().starts_with(']')
        {
            out.push_str(line.trim_end());
            out.push_str(lines[i + 1].trim());
            out.push(' ');
            out.push_str(lines[i + 2].trim());
            out.push_str(lines[i + 3].trim_start());
            i += 4;
        } else {
            out.push_str(line);
            i += 1;
        }
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    to_json_pretty(&MatrixFileOut::from(m))
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix, String> {
    let file: MatrixFileIn = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let entries: Vec<C64> = file.data.iter().map(|[re, im]| c64(*re, *im)).collect();
    ComplexMatrix::from_row_major(file.dim, &entries).map_err(|e| e.to_string())
}

pub fn kappa_from_json(text: &str) -> Result<Vec<C64>, String> {
    let data: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(data.iter().map(|[re, im]| c64(*re, *im)).collect())
}

pub fn kappa_to_json(kappa: &[C64]) -> String {
    to_json_pretty(&pairs(kappa))
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, IoError> {
    matrix_from_json(&read(path)?).map_err(|message| IoError::Parse { path: path.to_owned(), message })
}

pub fn read_kappa(path: &Path) -> Result<Vec<C64>, IoError> {
    kappa_from_json(&read(path)?).map_err(|message| IoError::Parse { path: path.to_owned(), message })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write { path: path.to_owned(), source })
}

/// SHA-256 over the exact bit patterns of the given matrices and extra floats.
pub fn fingerprint(matrices: &[&ComplexMatrix], extra: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for m in matrices {
        hasher.update((m.dim() as u64).to_le_bytes());
        for z in m.row_major() {
            hasher.update(z.re.to_bits().to_le_bytes());
            hasher.update(z.im.to_bits().to_le_bytes());
        }
    }
    for x in extra {
        hasher.update(x.to_bits().to_le_bytes());
    }
    hex::encode(hasher.finalize())
}
