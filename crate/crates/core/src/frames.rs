//! Gabor systems `{M_l T_k g : k ∈ aZ_n, l ∈ bZ_n}` on separable lattices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rustfft::FftDirection;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::mixed::{mixed_modulation_norm, mixed_norm, ExponentVector, Permutation};
use crate::operator::OperatorMatrix;
use crate::signal::{root_of_unity, tf_shift, AxisFft, FiniteSignal, C64};

/// Relative eigenvalue floor: a system whose frame operator has
/// `lower <= FRAME_FLOOR * upper` is treated as not spanning.
pub const FRAME_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: FiniteSignal,
    a: usize,
    b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_frame(&self) -> bool {
        self.upper > 0.0 && self.lower > FRAME_FLOOR * self.upper
    }
}

impl GaborSystem {
    pub fn new(window: FiniteSignal, a: usize, b: usize) -> Result<Self> {
        let n = window.n();
        if window.dim() != 1 {
            return invalid("Gabor systems are built on Z_n (d = 1)");
        }
        if a == 0 || b == 0 || !n.is_multiple_of(a) || !n.is_multiple_of(b) {
            return invalid(format!(
                "lattice steps a = {a}, b = {b} must divide n = {n}"
            ));
        }
        if window.max_abs() == 0.0 {
            return invalid("window must be nonzero");
        }
        Ok(Self { window, a, b })
    }

    /// Full lattice `a = b = 1`.
    pub fn full(window: FiniteSignal) -> Result<Self> {
        Self::new(window, 1, 1)
    }

    pub fn window(&self) -> &FiniteSignal {
        &self.window
    }

    pub fn n(&self) -> usize {
        self.window.n()
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn time_len(&self) -> usize {
        self.n() / self.a
    }

    pub fn freq_len(&self) -> usize {
        self.n() / self.b
    }

    /// Same lattice, different window.
    pub fn with_window(&self, window: FiniteSignal) -> Result<Self> {
        if window.n() != self.n() {
            return invalid("replacement window lives on a different group");
        }
        Self::new(window, self.a, self.b)
    }

    /// Lattice points `(k, l)`, time-major.
    pub fn lattice(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n)
            .step_by(self.a)
            .flat_map(move |k| (0..n).step_by(self.b).map(move |l| (k, l)))
    }

    /// The atom `M_l T_k g`.
    pub fn atom(&self, k: usize, l: usize) -> FiniteSignal {
        tf_shift(&self.window, &[k], &[l]).expect("window is one-dimensional")
    }
}

/// Coefficients indexed by the lattice, shape `(n/a, n/b)`, time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCoefficients {
    time_len: usize,
    freq_len: usize,
    values: Vec<C64>,
}

impl LatticeCoefficients {
    pub fn new(time_len: usize, freq_len: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != time_len * freq_len {
            return invalid("coefficient count does not match the lattice shape");
        }
        Ok(Self {
            time_len,
            freq_len,
            values,
        })
    }

    pub fn zeros_for(sys: &GaborSystem) -> Self {
        Self {
            time_len: sys.time_len(),
            freq_len: sys.freq_len(),
            values: vec![C64::new(0.0, 0.0); sys.time_len() * sys.freq_len()],
        }
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.time_len, self.freq_len]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Coefficient at lattice index `(i, j)`, i.e. point `(i a, j b)`.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.freq_len + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.values[i * self.freq_len + j] = v;
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn mixed_norm(&self, c: &Permutation, exps: &ExponentVector) -> Result<f64> {
        mixed_norm(&self.values, &self.shape(), c, exps)
    }
}

/// `S f = sum_λ <f, π_λ g> π_λ g` as a dense matrix.
pub fn frame_operator(sys: &GaborSystem) -> OperatorMatrix {
    let n = sys.n();
    let mut s = DMatrix::<C64>::zeros(n, n);
    for (k, l) in sys.lattice() {
        let atom = sys.atom(k, l);
        let v = atom.values();
        for i in 0..n {
            let vi = v[i];
            for j in 0..n {
                s[(i, j)] += vi * v[j].conj();
            }
        }
    }
    OperatorMatrix::new(s).expect("frame operator of a finite window is finite")
}

struct Spectral {
    eigenvalues: Vec<f64>,
    vectors: DMatrix<C64>,
}

fn hermitian_eigen(op: &OperatorMatrix) -> Spectral {
    let eig = SymmetricEigen::new(op.entries().clone());
    Spectral {
        eigenvalues: eig.eigenvalues.iter().copied().collect(),
        vectors: eig.eigenvectors,
    }
}

fn bounds_of(spec: &Spectral) -> FrameBounds {
    let lower = spec
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let upper = spec.eigenvalues.iter().copied().fold(0.0, f64::max);
    FrameBounds {
        lower: lower.max(0.0),
        upper,
    }
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
pub fn frame_bounds(sys: &GaborSystem) -> FrameBounds {
    bounds_of(&hermitian_eigen(&frame_operator(sys)))
}

/// Applies `S^{power}` to the window through the eigendecomposition of `S`.
fn frame_power_window(sys: &GaborSystem, power: f64) -> Result<FiniteSignal> {
    let spec = hermitian_eigen(&frame_operator(sys));
    let bounds = bounds_of(&spec);
    if !bounds.is_frame() {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let g = DVector::from_column_slice(sys.window().values());
    let coords = spec.vectors.adjoint() * g;
    let scaled = DVector::from_iterator(
        coords.len(),
        coords
            .iter()
            .zip(&spec.eigenvalues)
            .map(|(c, &lam)| c * lam.powf(power)),
    );
    let out = &spec.vectors * scaled;
    FiniteSignal::new(sys.n(), 1, out.as_slice().to_vec())
}

/// Canonical dual window `S^{-1} g`.
pub fn dual_window(sys: &GaborSystem) -> Result<FiniteSignal> {
    frame_power_window(sys, -1.0)
}

/// Canonical tight window `S^{-1/2} g`; its Gabor system is Parseval.
pub fn canonical_tight_window(sys: &GaborSystem) -> Result<FiniteSignal> {
    frame_power_window(sys, -0.5)
}

/// Analysis coefficients `<f, M_l T_k g>` on the lattice.
pub fn analyze(sys: &GaborSystem, f: &FiniteSignal) -> Result<LatticeCoefficients> {
    f.check_same_domain(sys.window())?;
    let n = sys.n();
    let g = sys.window().values();
    let mut fft = AxisFft::new(n, FftDirection::Forward);
    let mut out = LatticeCoefficients::zeros_for(sys);
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for (i, k) in (0..n).step_by(sys.a()).enumerate() {
        for (t, slot) in buf.iter_mut().enumerate() {
            *slot = f.values()[t] * g[(t + n - k) % n].conj();
        }
        fft.apply(&mut buf, 1);
        for j in 0..sys.freq_len() {
            out.set(i, j, buf[j * sys.b()]);
        }
    }
    Ok(out)
}

/// Synthesis `sum_λ c_λ M_l T_k g`, the adjoint of [`analyze`].
pub fn synthesize(sys: &GaborSystem, coeffs: &LatticeCoefficients) -> Result<FiniteSignal> {
    if coeffs.shape() != [sys.time_len(), sys.freq_len()] {
        return invalid(format!(
            "coefficients of shape {:?} do not fit a lattice of shape {:?}",
            coeffs.shape(),
            [sys.time_len(), sys.freq_len()]
        ));
    }
    let n = sys.n();
    let g = sys.window().values();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, k) in (0..n).step_by(sys.a()).enumerate() {
        for (j, l) in (0..n).step_by(sys.b()).enumerate() {
            let c = coeffs.get(i, j);
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for (t, slot) in out.iter_mut().enumerate() {
                *slot += c * root_of_unity(n, (l * t) as i64) * g[(t + n - k) % n];
            }
        }
    }
    FiniteSignal::new(n, 1, out)
}

/// Extreme values over `testset` of
/// `||analyze(sys, f) ∘ c||_{l^exps} / ||full-lattice coefficients of f ∘ c||_{l^exps}`.
///
/// The denominator is the mixed modulation norm of `f` with the system's
/// window, rescaled by `sqrt(n)` so that it equals the mixed norm of the
/// analysis coefficients on the full lattice.
pub fn banach_frame_equivalence(
    sys: &GaborSystem,
    c: &Permutation,
    exps: &ExponentVector,
    testset: &[FiniteSignal],
) -> Result<(f64, f64)> {
    let bounds = frame_bounds(sys);
    if !bounds.is_frame() {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    if c.len() != 2 || exps.len() != 2 {
        return invalid("a Gabor system on Z_n has two coefficient axes");
    }
    if testset.is_empty() {
        return invalid("test set is empty");
    }
    let scale = (sys.n() as f64).sqrt();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for f in testset {
        let num = analyze(sys, f)?.mixed_norm(c, exps)?;
        let den = scale * mixed_modulation_norm(f, sys.window(), c, exps)?;
        if den == 0.0 {
            return invalid("test signal with vanishing norm");
        }
        let r = num / den;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}
