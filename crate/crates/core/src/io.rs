//! JSON encodings for signals, tables, arrays and matrices.
//!
//! Complex data is `{"n", "dim", "re", "im"}` in row-major order, with shape
//! `(n,)^dim`. Arrays whose axes are not all of length `n` carry an explicit
//! `"shape"`. Phase tables are real: `{"n", "dim", "values"}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fio::{PhaseTable, SymbolTable};
use crate::frames::LatticeCoefficients;
use crate::operator::OperatorMatrix;
use crate::signal::{FiniteSignal, TFArray, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexArrayJson {
    pub n: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealArrayJson {
    pub n: usize,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl ComplexArrayJson {
    pub fn from_values(n: usize, dim: usize, shape: Option<Vec<usize>>, values: &[C64]) -> Self {
        Self {
            n,
            dim,
            shape,
            re: values.iter().map(|v| v.re).collect(),
            im: values.iter().map(|v| v.im).collect(),
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.shape.clone().unwrap_or_else(|| vec![self.n; self.dim])
    }

    /// Row-major complex values; a missing `im` means a real array.
    pub fn values(&self) -> Result<Vec<C64>> {
        let len: usize = self.shape().iter().product();
        if self.shape().len() != self.dim {
            return invalid("\"shape\" length must equal \"dim\"");
        }
        if self.re.len() != len || !(self.im.is_empty() || self.im.len() == len) {
            return invalid(format!(
                "array of shape {:?} needs {len} entries, got re: {}, im: {}",
                self.shape(),
                self.re.len(),
                self.im.len()
            ));
        }
        Ok(if self.im.is_empty() {
            self.re.iter().map(|&r| C64::new(r, 0.0)).collect()
        } else {
            self.re
                .iter()
                .zip(&self.im)
                .map(|(&r, &i)| C64::new(r, i))
                .collect()
        })
    }

    pub fn to_signal(&self) -> Result<FiniteSignal> {
        if self
            .shape
            .as_ref()
            .is_some_and(|s| s.iter().any(|&l| l != self.n))
        {
            return invalid("a signal on Z_n^d has all axes of length n");
        }
        FiniteSignal::new(self.n, self.dim, self.values()?)
    }

    pub fn to_operator(&self) -> Result<OperatorMatrix> {
        if self.dim != 2 {
            return invalid(format!("a matrix has dim 2, got {}", self.dim));
        }
        OperatorMatrix::from_row_major(self.n, &self.to_signal()?.into_values())
    }
}

impl From<&FiniteSignal> for ComplexArrayJson {
    fn from(f: &FiniteSignal) -> Self {
        Self::from_values(f.n(), f.dim(), None, f.values())
    }
}

impl From<&SymbolTable> for ComplexArrayJson {
    fn from(s: &SymbolTable) -> Self {
        s.as_signal().into()
    }
}

impl From<&TFArray> for ComplexArrayJson {
    fn from(v: &TFArray) -> Self {
        Self::from_values(v.n(), v.rank(), None, v.values())
    }
}

impl From<&OperatorMatrix> for ComplexArrayJson {
    fn from(a: &OperatorMatrix) -> Self {
        Self::from_values(a.n(), 2, None, &a.to_row_major())
    }
}

impl From<&LatticeCoefficients> for ComplexArrayJson {
    fn from(c: &LatticeCoefficients) -> Self {
        let [rows, cols] = c.shape();
        Self::from_values(rows.max(cols), 2, Some(vec![rows, cols]), c.values())
    }
}

impl From<&PhaseTable> for RealArrayJson {
    fn from(t: &PhaseTable) -> Self {
        Self {
            n: t.n(),
            dim: t.rank(),
            values: t.values().to_vec(),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(Error::from)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_array(path: &Path) -> Result<ComplexArrayJson> {
    read_json(path)
}

pub fn read_signal(path: &Path) -> Result<FiniteSignal> {
    read_array(path)?.to_signal()
}

pub fn read_operator(path: &Path) -> Result<OperatorMatrix> {
    read_array(path)?.to_operator()
}

pub fn read_symbol(path: &Path) -> Result<SymbolTable> {
    SymbolTable::from_signal(read_signal(path)?)
}

pub fn read_phase(path: &Path) -> Result<PhaseTable> {
    let raw: RealArrayJson = read_json(path)?;
    PhaseTable::new(raw.n, raw.dim, raw.values)
}
