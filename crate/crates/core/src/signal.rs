//! Signals on `Z_n^d` and their time-frequency representations.
//!
//! Multi-indices are stored row-major: the first coordinate varies slowest.
//! The DFT and the STFT both carry the prefactor `n^{-d/2}`, which makes the
//! DFT unitary and the STFT satisfy the Moyal identity with constant one.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{invalid, Result};

pub type C64 = Complex<f64>;

/// `exp(2 pi i m / n)` with the exponent reduced modulo `n` first, so that
/// equal residues give bit-identical roots.
pub fn root_of_unity(n: usize, m: i64) -> C64 {
    let r = m.rem_euclid(n as i64) as f64;
    let (s, c) = (2.0 * PI * r / n as f64).sin_cos();
    C64::new(c, s)
}

/// `exp(2 pi i phase)` for a phase measured in cycles.
pub fn cis_cycles(phase: f64) -> C64 {
    let (s, c) = (2.0 * PI * phase.rem_euclid(1.0)).sin_cos();
    C64::new(c, s)
}

/// Row-major digits of `flat` in base `n` with `dim` digits.
pub(crate) fn digits(mut flat: usize, n: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0; dim];
    for slot in out.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    out
}

pub(crate) fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// A complex-valued function on `Z_n^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSignal {
    n: usize,
    dim: usize,
    values: Vec<C64>,
}

impl FiniteSignal {
    pub fn new(n: usize, dim: usize, values: Vec<C64>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return invalid("group size and dimension must be positive");
        }
        let len = checked_len(n, dim)?;
        if values.len() != len {
            return invalid(format!(
                "signal on Z_{n}^{dim} needs {len} values, got {}",
                values.len()
            ));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return invalid("signal values must be finite");
        }
        Ok(Self { n, dim, values })
    }

    pub fn zeros(n: usize, dim: usize) -> Result<Self> {
        Self::new(n, dim, vec![C64::new(0.0, 0.0); checked_len(n, dim)?])
    }

    /// The constant signal with value `value`.
    pub fn constant(n: usize, dim: usize, value: C64) -> Result<Self> {
        Self::new(n, dim, vec![value; checked_len(n, dim)?])
    }

    /// Unit impulse at `at`.
    pub fn delta(n: usize, dim: usize, at: &[usize]) -> Result<Self> {
        if at.len() != dim || at.iter().any(|&a| a >= n) {
            return invalid("impulse position must be a point of Z_n^d");
        }
        let mut s = Self::zeros(n, dim)?;
        s.values[flatten(at, n)] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_fn(n: usize, dim: usize, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let len = checked_len(n, dim)?;
        let values = (0..len).map(|i| f(&digits(i, n, dim))).collect();
        Self::new(n, dim, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn at(&self, idx: &[usize]) -> C64 {
        self.values[flatten(idx, self.n)]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `<self, other> = sum self(t) conj(other(t))`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_domain(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            n: self.n,
            dim: self.dim,
            values: self.values.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            dim: self.dim,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_domain(other)?;
        Ok(Self {
            n: self.n,
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Tensor product `(self ⊗ other)(s, t) = self(s) other(t)` on
    /// `Z_n^{d1 + d2}`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return invalid("tensor factors must live on the same group");
        }
        let mut values = Vec::with_capacity(self.len() * other.len());
        for a in &self.values {
            values.extend(other.values.iter().map(|b| a * b));
        }
        Self::new(self.n, self.dim + other.dim, values)
    }

    /// `self ⊗ self ⊗ ... ⊗ self` with `power` factors.
    pub fn tensor_power(&self, power: usize) -> Result<Self> {
        if power == 0 {
            return invalid("tensor power must be positive");
        }
        let mut out = self.clone();
        for _ in 1..power {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    pub(crate) fn check_same_domain(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.dim != other.dim {
            return invalid(format!(
                "domain mismatch: Z_{}^{} vs Z_{}^{}",
                self.n, self.dim, other.n, other.dim
            ));
        }
        Ok(())
    }
}

fn checked_len(n: usize, dim: usize) -> Result<usize> {
    u32::try_from(dim)
        .ok()
        .and_then(|d| n.checked_pow(d))
        .map_or_else(|| invalid("domain too large"), Ok)
}

/// Sampled short-time Fourier transform values `V(x_1..x_m, xi_1..xi_m)`.
///
/// Shape is `(n,)^{2m}`, row-major, with every time axis before every
/// frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TFArray {
    n: usize,
    m: usize,
    values: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisRole {
    /// Time coordinate `x_i`, zero-based.
    Time(usize),
    /// Frequency coordinate `xi_i`, zero-based.
    Freq(usize),
}

impl TFArray {
    pub fn new(n: usize, m: usize, values: Vec<C64>) -> Result<Self> {
        let len = checked_len(n, 2 * m)?;
        if m == 0 || values.len() != len {
            return invalid(format!("TF array over Z_{n}^{m} needs {len} values"));
        }
        Ok(Self { n, m, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of underlying group factors; the array has `2m` axes.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        2 * self.m
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; 2 * self.m]
    }

    pub fn axis_roles(&self) -> Vec<AxisRole> {
        (0..self.m)
            .map(AxisRole::Time)
            .chain((0..self.m).map(AxisRole::Freq))
            .collect()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, x: &[usize], xi: &[usize]) -> C64 {
        let row = flatten(x, self.n);
        let col = flatten(xi, self.n);
        self.values[row * self.n.pow(self.m as u32) + col]
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Plans forward or inverse transforms of length `n` along every axis of a
/// row-major cube.
pub(crate) struct AxisFft {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    line: Vec<C64>,
    scratch: Vec<C64>,
}

impl AxisFft {
    pub(crate) fn new(n: usize, direction: FftDirection) -> Self {
        let fft = FftPlanner::new().plan_fft(n, direction);
        let scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Self {
            n,
            fft,
            line: vec![C64::new(0.0, 0.0); n],
            scratch,
        }
    }

    /// Unnormalized transform along all `dim` axes of `buf`.
    pub(crate) fn apply(&mut self, buf: &mut [C64], dim: usize) {
        let n = self.n;
        let total = buf.len();
        for axis in 0..dim {
            let stride = n.pow((dim - 1 - axis) as u32);
            if stride == 1 {
                for chunk in buf.chunks_exact_mut(n) {
                    self.fft.process_with_scratch(chunk, &mut self.scratch);
                }
                continue;
            }
            let block = stride * n;
            for start in (0..total).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (j, slot) in self.line.iter_mut().enumerate() {
                        *slot = buf[base + j * stride];
                    }
                    self.fft
                        .process_with_scratch(&mut self.line, &mut self.scratch);
                    for (j, v) in self.line.iter().enumerate() {
                        buf[base + j * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Time-frequency shift `M_l T_k f(t) = omega^{l·t} f(t - k)`.
pub fn tf_shift(f: &FiniteSignal, k: &[usize], l: &[usize]) -> Result<FiniteSignal> {
    let (n, dim) = (f.n, f.dim);
    if k.len() != dim || l.len() != dim {
        return invalid(format!(
            "shift vectors must have length {dim}, got {} and {}",
            k.len(),
            l.len()
        ));
    }
    FiniteSignal::from_fn(n, dim, |t| {
        let src: Vec<usize> = t
            .iter()
            .zip(k)
            .map(|(&ti, &ki)| (ti + n - ki % n) % n)
            .collect();
        let phase: i64 = t.iter().zip(l).map(|(&ti, &li)| (ti * li) as i64).sum();
        root_of_unity(n, phase) * f.at(&src)
    })
}

/// Unitary DFT `f^(xi) = n^{-d/2} sum_t f(t) omega^{-t·xi}`.
pub fn dft(f: &FiniteSignal) -> FiniteSignal {
    transform(f, FftDirection::Forward)
}

/// Inverse of [`dft`].
pub fn idft(f: &FiniteSignal) -> FiniteSignal {
    transform(f, FftDirection::Inverse)
}

fn transform(f: &FiniteSignal, direction: FftDirection) -> FiniteSignal {
    let mut values = f.values.clone();
    AxisFft::new(f.n, direction).apply(&mut values, f.dim);
    let scale = (f.n as f64).powf(-(f.dim as f64) / 2.0);
    values.iter_mut().for_each(|v| *v *= scale);
    FiniteSignal {
        n: f.n,
        dim: f.dim,
        values,
    }
}

/// Short-time Fourier transform
/// `V_g f(k, l) = n^{-d/2} sum_t f(t) conj(g(t - k)) omega^{-l·t}`.
pub fn stft(f: &FiniteSignal, g: &FiniteSignal) -> Result<TFArray> {
    f.check_same_domain(g)?;
    let (n, dim) = (f.n, f.dim);
    let len = f.len();
    let scale = (n as f64).powf(-(dim as f64) / 2.0);
    let window_conj: Vec<C64> = g.values.iter().map(|v| v.conj()).collect();
    let coords: Vec<Vec<usize>> = (0..len).map(|i| digits(i, n, dim)).collect();
    let strides: Vec<usize> = (0..dim).map(|a| n.pow((dim - 1 - a) as u32)).collect();

    let mut fft = AxisFft::new(n, FftDirection::Forward);
    let mut out = Vec::with_capacity(len * len);
    let mut buf = vec![C64::new(0.0, 0.0); len];
    for k in &coords {
        for (t, slot) in buf.iter_mut().enumerate() {
            let shifted: usize = coords[t]
                .iter()
                .zip(k)
                .zip(&strides)
                .map(|((&ti, &ki), &s)| ((ti + n - ki) % n) * s)
                .sum();
            *slot = f.values[t] * window_conj[shifted];
        }
        fft.apply(&mut buf, dim);
        out.extend(buf.iter().map(|v| v * scale));
    }
    TFArray::new(n, dim, out)
}

/// Discrete Wiener amalgam norm: the sum over blocks of side `block_len` of
/// the block-wise maximum of `|f|`.
pub fn wiener_amalgam_norm(f: &FiniteSignal, block_len: usize) -> Result<f64> {
    let n = f.n;
    if block_len == 0 || !n.is_multiple_of(block_len) {
        return invalid(format!("block length {block_len} does not divide {n}"));
    }
    let per_axis = n / block_len;
    let mut block_max = vec![0.0f64; per_axis.pow(f.dim as u32)];
    for (i, v) in f.values.iter().enumerate() {
        let block: Vec<usize> = digits(i, n, f.dim)
            .into_iter()
            .map(|c| c / block_len)
            .collect();
        let b = flatten(&block, per_axis);
        block_max[b] = block_max[b].max(v.norm());
    }
    Ok(block_max.iter().sum())
}
