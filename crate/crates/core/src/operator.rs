//! Dense operators on `C^n`, the finite stand-in for operators on `L^2`.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::signal::{root_of_unity, FiniteSignal, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return invalid(format!(
                "operator matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            ));
        }
        if entries
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return invalid("operator entries must be finite");
        }
        Ok(Self { entries })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    /// Row-major entries `a[x * n + y] = A(x, y)`.
    pub fn from_row_major(n: usize, values: &[C64]) -> Result<Self> {
        if values.len() != n * n {
            return invalid(format!("{n}x{n} operator needs {} entries", n * n));
        }
        Self::new(DMatrix::from_row_slice(n, n, values))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    /// Unitary DFT matrix `F(xi, t) = n^{-1/2} omega^{-xi t}`.
    pub fn dft(n: usize) -> Result<Self> {
        let scale = 1.0 / (n as f64).sqrt();
        Self::from_fn(n, |xi, t| root_of_unity(n, -((xi * t) as i64)) * scale)
    }

    /// Rank-one operator `f -> <f, v> u`.
    pub fn outer(u: &FiniteSignal, v: &FiniteSignal) -> Result<Self> {
        u.check_same_domain(v)?;
        let n = u.len();
        Self::from_fn(n, |i, j| u.values()[i] * v.values()[j].conj())
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.n();
        (0..n * n).map(|i| self.entries[(i / n, i % n)]).collect()
    }

    pub fn apply(&self, f: &FiniteSignal) -> Result<FiniteSignal> {
        if f.len() != self.n() {
            return invalid(format!(
                "operator of size {} applied to signal of length {}",
                self.n(),
                f.len()
            ));
        }
        let v = nalgebra::DVector::from_column_slice(f.values());
        let out = &self.entries * v;
        FiniteSignal::new(f.n(), f.dim(), out.as_slice().to_vec())
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_size(rhs)?;
        Self::new(&self.entries * &rhs.entries)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_size(rhs)?;
        Self::new(&self.entries + &rhs.entries)
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            entries: self.entries.map(|v| v * alpha),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        self.check_size(rhs)?;
        Ok(self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_size(&self, rhs: &Self) -> Result<()> {
        if self.n() != rhs.n() {
            return invalid(format!(
                "operator sizes differ: {} vs {}",
                self.n(),
                rhs.n()
            ));
        }
        Ok(())
    }
}
