//! Discretized Fourier integral operators on `Z_n`.
//!
//! Two forms are supported. The symbol form takes `a(x, xi)` and `phi(x, xi)`
//! and acts through the unitary DFT, `A f(x) = sum_xi a e^{2 pi i phi} f^(xi)`.
//! The kernel form takes `b(x, y, xi)` and `psi(x, y, xi)` with kernel
//! `k(x, y) = n^{-1/2} sum_xi b e^{2 pi i psi}`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::frames::{analyze, dual_window, GaborSystem, LatticeCoefficients};
use crate::operator::OperatorMatrix;
use crate::signal::{cis_cycles, digits, root_of_unity, FiniteSignal, C64};

fn check_rank(rank: usize) -> Result<()> {
    if rank != 2 && rank != 3 {
        return invalid(format!("tables have rank 2 or 3, got {rank}"));
    }
    Ok(())
}

/// Complex table of shape `(n,)^rank`, `rank` in {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    signal: FiniteSignal,
}

impl SymbolTable {
    pub fn new(n: usize, rank: usize, values: Vec<C64>) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            signal: FiniteSignal::new(n, rank, values)?,
        })
    }

    pub fn from_signal(signal: FiniteSignal) -> Result<Self> {
        check_rank(signal.dim())?;
        Ok(Self { signal })
    }

    pub fn from_fn(n: usize, rank: usize, f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            signal: FiniteSignal::from_fn(n, rank, f)?,
        })
    }

    pub fn constant(n: usize, rank: usize, value: C64) -> Result<Self> {
        Self::from_fn(n, rank, |_| value)
    }

    pub fn n(&self) -> usize {
        self.signal.n()
    }

    pub fn rank(&self) -> usize {
        self.signal.dim()
    }

    pub fn values(&self) -> &[C64] {
        self.signal.values()
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.signal.at(idx)
    }

    /// The table viewed as a signal on `Z_n^rank`, the form mixed modulation
    /// norms act on.
    pub fn as_signal(&self) -> &FiniteSignal {
        &self.signal
    }

    /// Pointwise `self * e^{2 pi i psi}`.
    pub fn modulated(&self, psi: &PhaseTable) -> Result<Self> {
        self.check_shape(psi)?;
        let values = self
            .values()
            .iter()
            .zip(psi.values())
            .map(|(v, &ph)| v * cis_cycles(ph))
            .collect();
        Self::new(self.n(), self.rank(), values)
    }

    fn check_shape(&self, psi: &PhaseTable) -> Result<()> {
        if self.n() != psi.n() || self.rank() != psi.rank() {
            return invalid(format!(
                "symbol of shape ({},)^{} does not match phase of shape ({},)^{}",
                self.n(),
                self.rank(),
                psi.n(),
                psi.rank()
            ));
        }
        Ok(())
    }
}

/// Real phase table in cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    n: usize,
    rank: usize,
    values: Vec<f64>,
}

impl PhaseTable {
    pub fn new(n: usize, rank: usize, values: Vec<f64>) -> Result<Self> {
        check_rank(rank)?;
        if n == 0 || values.len() != n.pow(rank as u32) {
            return invalid(format!(
                "phase table of rank {rank} on Z_{n} needs {} entries, got {}",
                n.pow(rank as u32),
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("phase entries must be finite");
        }
        Ok(Self { n, rank, values })
    }

    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = n.pow(rank as u32);
        let values = (0..len).map(|i| f(&digits(i, n, rank))).collect();
        Self::new(n, rank, values)
    }

    pub fn zeros(n: usize, rank: usize) -> Result<Self> {
        Self::new(n, rank, vec![0.0; n.pow(rank as u32)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[crate::signal::flatten(idx, self.n)]
    }

    /// `e^{2 pi i psi}` as a signal on `Z_n^rank`.
    pub fn cis(&self) -> FiniteSignal {
        FiniteSignal::new(
            self.n,
            self.rank,
            self.values.iter().map(|&v| cis_cycles(v)).collect(),
        )
        .expect("shape already validated")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.rank != other.rank {
            return invalid("phase tables of different shapes");
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b).rem_euclid(1.0))
            .collect();
        Self::new(self.n, self.rank, values)
    }
}

/// `psi(w) = c0 + (q . w) / n + (w . M w) / (2n)` on `Z_n^r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQuadraticPhase", into = "RawQuadraticPhase")]
pub struct QuadraticPhase {
    c0: f64,
    q: Vec<i64>,
    m: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawQuadraticPhase {
    c0: f64,
    q: Vec<i64>,
    #[serde(rename = "M")]
    m: Vec<Vec<i64>>,
}

impl TryFrom<RawQuadraticPhase> for QuadraticPhase {
    type Error = crate::error::Error;

    fn try_from(raw: RawQuadraticPhase) -> Result<Self> {
        Self::new(raw.c0, raw.q, raw.m)
    }
}

impl From<QuadraticPhase> for RawQuadraticPhase {
    fn from(qp: QuadraticPhase) -> Self {
        Self {
            c0: qp.c0,
            q: qp.q,
            m: qp.m,
        }
    }
}

fn check_symmetric(m: &[Vec<i64>], r: usize) -> Result<()> {
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return invalid(format!("second-order matrix must be {r}x{r}"));
    }
    for i in 0..r {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return invalid(format!(
                    "second-order matrix is not symmetric at ({i}, {j})"
                ));
            }
        }
    }
    Ok(())
}

fn check_parity(m: &[Vec<i64>], n: usize) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        if (n as i64 * row[i]).rem_euclid(2) != 0 {
            return invalid(format!(
                "chirp is not well defined on Z_{n}: n * M[{i}][{i}] = {} is odd",
                n as i64 * row[i]
            ));
        }
    }
    Ok(())
}

/// `w . M w mod 2n`.
fn quadratic_form_mod(m: &[Vec<i64>], w: &[usize], n: usize) -> i64 {
    let modulus = 2 * n as i64;
    let mut acc = 0i64;
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate() {
            let term = mij.rem_euclid(modulus) * (w[i] as i64 * w[j] as i64 % modulus);
            acc = (acc + term % modulus) % modulus;
        }
    }
    acc
}

impl QuadraticPhase {
    pub fn new(c0: f64, q: Vec<i64>, m: Vec<Vec<i64>>) -> Result<Self> {
        if !c0.is_finite() {
            return invalid("constant term must be finite");
        }
        check_symmetric(&m, q.len())?;
        Ok(Self { c0, q, m })
    }

    pub fn zero(r: usize) -> Self {
        Self {
            c0: 0.0,
            q: vec![0; r],
            m: vec![vec![0; r]; r],
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn q(&self) -> &[i64] {
        &self.q
    }

    pub fn m(&self) -> &[Vec<i64>] {
        &self.m
    }

    pub fn is_affine(&self) -> bool {
        self.m.iter().flatten().all(|&v| v == 0)
    }

    pub fn check_well_defined(&self, n: usize) -> Result<()> {
        check_parity(&self.m, n)
    }
}

/// Tabulates a quadratic phase, reduced mod 1.
pub fn quadratic_phase_table(qp: &QuadraticPhase, n: usize, rank: usize) -> Result<PhaseTable> {
    check_rank(rank)?;
    if qp.dim() != rank {
        return invalid(format!(
            "quadratic phase in {} variables cannot fill a rank-{rank} table",
            qp.dim()
        ));
    }
    qp.check_well_defined(n)?;
    let modulus = 2 * n as i64;
    PhaseTable::from_fn(n, rank, |w| {
        let linear: i64 =
            qp.q.iter()
                .zip(w)
                .map(|(&qi, &wi)| qi.rem_euclid(modulus) * wi as i64 % modulus)
                .sum();
        let numerator = (2 * linear + quadratic_form_mod(&qp.m, w, n)).rem_euclid(modulus);
        (qp.c0 + numerator as f64 / modulus as f64).rem_euclid(1.0)
    })
}

/// Splits `qp` into its affine part (`M = 0`) and its pure quadratic part.
pub fn taylor_split(qp: &QuadraticPhase) -> (QuadraticPhase, QuadraticPhase) {
    let r = qp.dim();
    let affine = QuadraticPhase {
        c0: qp.c0,
        q: qp.q.clone(),
        m: vec![vec![0; r]; r],
    };
    let quadratic = QuadraticPhase {
        c0: 0.0,
        q: vec![0; r],
        m: qp.m.clone(),
    };
    (affine, quadratic)
}

/// `S_M f(t) = e^{pi i t . M t / n} f(t)`.
pub fn apply_chirp(f: &FiniteSignal, m: &[Vec<i64>]) -> Result<FiniteSignal> {
    let n = f.n();
    check_symmetric(m, f.dim())?;
    check_parity(m, n)?;
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = digits(i, n, f.dim());
            v * root_of_unity(2 * n, quadratic_form_mod(m, &t, n))
        })
        .collect();
    FiniteSignal::new(n, f.dim(), values)
}

/// The chirp `S_M 1` itself.
pub fn chirp_signal(n: usize, m: &[Vec<i64>]) -> Result<FiniteSignal> {
    apply_chirp(&FiniteSignal::constant(n, m.len(), C64::new(1.0, 0.0))?, m)
}

fn check_pair(a: &SymbolTable, phi: &PhaseTable, rank: usize) -> Result<()> {
    if a.rank() != rank {
        return invalid(format!(
            "expected a rank-{rank} symbol, got rank {}",
            a.rank()
        ));
    }
    a.check_shape(phi)
}

/// `k(x, y) = a(x, y) e^{2 pi i phi(x, y)}`.
pub fn easy_kernel(a: &SymbolTable, phi: &PhaseTable) -> Result<SymbolTable> {
    check_pair(a, phi, 2)?;
    a.modulated(phi)
}

/// `A = K F` with `K(x, xi) = a e^{2 pi i phi}` and `F` the unitary DFT.
pub fn build_easy_fio(a: &SymbolTable, phi: &PhaseTable) -> Result<OperatorMatrix> {
    let k = easy_kernel(a, phi)?;
    let n = k.n();
    OperatorMatrix::from_row_major(n, k.values())?.compose(&OperatorMatrix::dft(n)?)
}

/// Operator with kernel `n^{-1/2} sum_xi b(x, y, xi) e^{2 pi i psi(x, y, xi)}`.
pub fn build_hard_fio(b: &SymbolTable, psi: &PhaseTable) -> Result<OperatorMatrix> {
    check_pair(b, psi, 3)?;
    kernel_operator(&b.modulated(psi)?, |_| C64::new(1.0, 0.0))
}

/// Collapses the last axis of a rank-3 table against `weight(xi)`.
fn kernel_operator(bpsi: &SymbolTable, weight: impl Fn(usize) -> C64) -> Result<OperatorMatrix> {
    let n = bpsi.n();
    let scale = 1.0 / (n as f64).sqrt();
    let w: Vec<C64> = (0..n).map(|xi| weight(xi) * scale).collect();
    let v = bpsi.values();
    OperatorMatrix::from_fn(n, |x, y| {
        let base = (x * n + y) * n;
        v[base..base + n].iter().zip(&w).map(|(b, w)| b * w).sum()
    })
}

/// The slicing `A = sum_λ conj(w_λ) A_λ` of a kernel-form FIO along a Gabor
/// frame on the `xi` axis.
#[derive(Debug, Clone)]
pub struct SliceFamily {
    system: GaborSystem,
    dual: FiniteSignal,
    bpsi: SymbolTable,
    weights: LatticeCoefficients,
}

pub fn fio_slice_family(
    b: &SymbolTable,
    psi: &PhaseTable,
    sys: &GaborSystem,
) -> Result<SliceFamily> {
    check_pair(b, psi, 3)?;
    if sys.n() != b.n() {
        return invalid("Gabor system and symbol live on different groups");
    }
    let dual = dual_window(sys)?;
    let one = FiniteSignal::constant(sys.n(), 1, C64::new(1.0, 0.0))?;
    Ok(SliceFamily {
        system: sys.clone(),
        dual,
        bpsi: b.modulated(psi)?,
        weights: analyze(sys, &one)?,
    })
}

impl SliceFamily {
    /// `w(k1, k2) = <1, M_{k2} T_{k1} g>` on the lattice.
    pub fn weights(&self) -> &LatticeCoefficients {
        &self.weights
    }

    pub fn dual(&self) -> &FiniteSignal {
        &self.dual
    }

    /// `A_{k1,k2}` at lattice index `(i, j)`, i.e. `(k1, k2) = (i a, j b)`.
    pub fn operator(&self, i: usize, j: usize) -> Result<OperatorMatrix> {
        let [rows, cols] = self.weights.shape();
        if i >= rows || j >= cols {
            return invalid(format!("lattice index ({i}, {j}) out of range"));
        }
        let atom = tf_atom(&self.system, &self.dual, i, j);
        kernel_operator(&self.bpsi, |xi| atom.values()[xi].conj())
    }

    /// `sum_λ conj(w_λ) A_λ`.
    pub fn recombine(&self) -> Result<OperatorMatrix> {
        let [rows, cols] = self.weights.shape();
        let mut acc = OperatorMatrix::zeros(self.system.n())?;
        for i in 0..rows {
            for j in 0..cols {
                let w = self.weights.get(i, j).conj();
                if w.norm() == 0.0 {
                    continue;
                }
                acc = acc.add(&self.operator(i, j)?.scaled(w))?;
            }
        }
        Ok(acc)
    }
}

fn tf_atom(sys: &GaborSystem, window: &FiniteSignal, i: usize, j: usize) -> FiniteSignal {
    crate::signal::tf_shift(window, &[i * sys.a()], &[j * sys.b()])
        .expect("window is one-dimensional")
}
