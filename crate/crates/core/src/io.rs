//! JSON matrix files: `{"name": str, "rows": int, "cols": int, "data": [[[re, im], ...], ...]}`.
//!
//! Floats are written in shortest round-trip form, so write-then-read is exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Wire form shared by [`ComplexMatrix`] and [`MatrixFile`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        let data = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        MatrixRepr { rows: m.rows(), cols: m.cols(), data }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.rows || r.data.iter().any(|row| row.len() != r.cols) {
            return Err(Error::Parse(format!("data shape does not match {}x{}", r.rows, r.cols)));
        }
        let entries: Vec<C64> = r.data.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_row_slice(r.rows, r.cols, &entries)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        ComplexMatrix::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// A named matrix on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub name: String,
    #[serde(flatten)]
    pub matrix: ComplexMatrix,
}

impl MatrixFile {
    pub fn new(name: impl Into<String>, matrix: ComplexMatrix) -> Self {
        MatrixFile { name: name.into(), matrix }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix files always serialize")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
