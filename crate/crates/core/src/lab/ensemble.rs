//! Seeded random draws: symbols, phases and windows.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::config::WindowKind;
use crate::error::{invalid, Error, Result};
use crate::fio::{PhaseTable, QuadraticPhase, SymbolTable};
use crate::frames::{canonical_tight_window, GaborSystem};
use crate::signal::{FiniteSignal, C64};

/// Spread `s` (in samples) of the sampled Gaussian `exp(-pi t^2 / s^2)`.
pub const GAUSSIAN_SPREAD: f64 = 2.0;

/// Range `[-QUADRATIC_RANGE, QUADRATIC_RANGE]` of the drawn second-order
/// coefficients.
pub const QUADRATIC_RANGE: i64 = 3;

/// Per-trial generator: `seed xor trial`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    GaussianSymbol,
    TensorSymbol,
    QuadraticPhase,
    RandomPhase,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidArgument(format!("unknown ensemble kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Draw {
    Symbol(SymbolTable),
    Phase {
        table: PhaseTable,
        quadratic: Option<QuadraticPhase>,
    },
}

/// One draw of the given kind as a rank-`rank` table on `Z_n`.
///
/// `tensor-symbol` is `b1 ⊗ 1` with `b1` Gaussian; `quadratic-phase` keeps
/// the mixed `x`-`y` coefficient at zero.
pub fn gen_ensemble(kind: EnsembleKind, n: usize, rank: usize, seed: u64) -> Result<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        EnsembleKind::GaussianSymbol => Draw::Symbol(gaussian_symbol(&mut rng, n, rank)?),
        EnsembleKind::TensorSymbol => {
            if rank != 3 {
                return invalid("tensor symbols are rank 3");
            }
            let b1 = gaussian_symbol(&mut rng, n, 2)?;
            let b2 = FiniteSignal::constant(n, 1, C64::new(1.0, 0.0))?;
            Draw::Symbol(tensor_symbol(&b1, &b2)?)
        }
        EnsembleKind::QuadraticPhase => {
            let qp = quadratic_phase(&mut rng, n, rank, true)?;
            Draw::Phase {
                table: crate::fio::quadratic_phase_table(&qp, n, rank)?,
                quadratic: Some(qp),
            }
        }
        EnsembleKind::RandomPhase => Draw::Phase {
            table: random_phase(&mut rng, n, rank)?,
            quadratic: None,
        },
    })
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// I.i.d. standard complex Gaussian entries (`E|z|^2 = 1`).
pub fn gaussian_symbol<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Result<SymbolTable> {
    SymbolTable::from_fn(n, rank, |_| complex_gaussian(rng))
}

pub fn gaussian_signal<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Result<FiniteSignal> {
    FiniteSignal::from_fn(n, dim, |_| complex_gaussian(rng))
}

/// `b(x, y, xi) = b1(x, y) b2(xi)`.
pub fn tensor_symbol(b1: &SymbolTable, b2: &FiniteSignal) -> Result<SymbolTable> {
    if b1.rank() != 2 || b2.dim() != 1 {
        return invalid("tensor symbol needs a rank-2 factor and a one-dimensional factor");
    }
    SymbolTable::from_signal(b1.as_signal().tensor(b2)?)
}

/// Uniform phases in `[0, 1)`.
pub fn random_phase<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Result<PhaseTable> {
    PhaseTable::from_fn(n, rank, |_| rng.random::<f64>())
}

/// Random quadratic phase in `rank` variables. With `separated`, the
/// coefficient coupling the first two variables is zero. Diagonal entries are
/// kept even when `n` is odd so the table is well defined.
pub fn quadratic_phase<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    separated: bool,
) -> Result<QuadraticPhase> {
    let half = (n / 2) as i64;
    let q: Vec<i64> = (0..rank).map(|_| rng.random_range(-half..=half)).collect();
    let mut m = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let mut v = rng.random_range(-QUADRATIC_RANGE..=QUADRATIC_RANGE);
            if i == j && n % 2 == 1 {
                v *= 2;
            }
            if separated && i == 0 && j == 1 {
                v = 0;
            }
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    QuadraticPhase::new(rng.random::<f64>(), q, m)
}

/// Unit-norm window on `Z_n`.
///
/// `gaussian-sampled` is the canonical tight window (full lattice) of the
/// periodized sampled Gaussian, rescaled by `sqrt(n)`; `random` draws from
/// `seed`.
pub fn make_window(kind: WindowKind, n: usize, seed: u64) -> Result<FiniteSignal> {
    let g = match kind {
        WindowKind::Delta => FiniteSignal::delta(n, 1, &[0])?,
        WindowKind::GaussianSampled => {
            let tight = canonical_tight_window(&GaborSystem::full(periodized_gaussian(n)?)?)?;
            tight.scaled(C64::new((n as f64).sqrt(), 0.0))
        }
        WindowKind::Random => gaussian_signal(&mut ChaCha8Rng::seed_from_u64(seed), n, 1)?,
    };
    Ok(g.scaled(C64::new(1.0 / g.norm(), 0.0)))
}

/// `sum_m exp(-pi (t - m n)^2 / s^2)` with `s = GAUSSIAN_SPREAD`.
pub fn periodized_gaussian(n: usize) -> Result<FiniteSignal> {
    let s2 = GAUSSIAN_SPREAD * GAUSSIAN_SPREAD;
    let wraps = 3i64;
    FiniteSignal::from_fn(n, 1, |t| {
        let v: f64 = (-wraps..=wraps)
            .map(|m| {
                let x = t[0] as f64 - (m * n as i64) as f64;
                (-std::f64::consts::PI * x * x / s2).exp()
            })
            .sum();
        C64::new(v, 0.0)
    })
}
