//! File formats.
//!
//! Floats are written with 17 significant digits so that every `f64` survives
//! a write/read/write cycle bit for bit, which makes generated files
//! byte-reproducible.

use std::fs;
use std::io;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::operator::HermitianMatrix;
use crate::povm::{Povm, StatisticsVector};

/// Compact JSON with every float printed as `d.dddddddddddddddde±x`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactFloatFormatter;

impl Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` with [`ExactFloatFormatter`], followed by a newline.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloatFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_file<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_string(value)?).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

type Entry = [f64; 2];

fn matrix_rows(t: &HermitianMatrix) -> Vec<Vec<Entry>> {
    let m = t.as_matrix();
    (0..m.nrows()).map(|j| (0..m.ncols()).map(|k| [m[(j, k)].re, m[(j, k)].im]).collect()).collect()
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_rows(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Entry>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
        HermitianMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub fn vector_to_pairs(v: &DVector<Complex64>) -> Vec<Entry> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_pairs(pairs: &[Entry]) -> DVector<Complex64> {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|[re, im]| Complex64::new(*re, *im)))
}

/// On-disk POVM: `{dim, effects, labels, metadata?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmDocument {
    pub dim: usize,
    pub effects: Vec<HermitianMatrix>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl PovmDocument {
    pub fn from_povm(povm: &Povm, metadata: Option<Value>) -> Self {
        Self { dim: povm.dim(), effects: povm.effects().to_vec(), labels: povm.labels().to_vec(), metadata }
    }

    /// Checks the declared dimension and validates the effects.
    pub fn to_povm(&self) -> Result<Povm> {
        if let Some(e) = self.effects.iter().find(|e| e.dim() != self.dim) {
            return Err(Error::DimensionMismatch(self.dim, e.dim()));
        }
        Povm::new(self.effects.clone(), self.labels.clone())
    }
}

pub fn load_povm(path: &Path) -> Result<(Povm, PovmDocument)> {
    let doc: PovmDocument = read_file(path)?;
    Ok((doc.to_povm()?, doc))
}

pub fn save_povm(path: &Path, povm: &Povm, metadata: Option<Value>) -> Result<()> {
    write_file(path, &PovmDocument::from_povm(povm, metadata))
}

/// On-disk outcome statistics: `{povm_ref, probabilities}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticsDocument {
    pub povm_ref: String,
    pub probabilities: Vec<f64>,
}

impl StatisticsDocument {
    pub fn new(povm_ref: impl Into<String>, stats: &StatisticsVector) -> Self {
        Self { povm_ref: povm_ref.into(), probabilities: stats.probabilities.clone() }
    }

    pub fn statistics(&self) -> StatisticsVector {
        StatisticsVector { probabilities: self.probabilities.clone() }
    }
}

/// On-disk state: density matrix, plus amplitudes when the state is pure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateDocument {
    pub dim: usize,
    pub density: HermitianMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Entry>>,
}

impl StateDocument {
    pub fn mixed(rho: &HermitianMatrix) -> Self {
        Self { dim: rho.dim(), density: rho.clone(), amplitudes: None }
    }

    pub fn pure(psi: &DVector<Complex64>) -> Self {
        Self { dim: psi.len(), density: HermitianMatrix::projector(psi), amplitudes: Some(vector_to_pairs(psi)) }
    }

    pub fn vector(&self) -> Option<DVector<Complex64>> {
        self.amplitudes.as_deref().map(vector_from_pairs)
    }
}
