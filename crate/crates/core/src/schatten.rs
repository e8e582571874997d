//! Singular values and Schatten norms of dense operators.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::mixed::Exponent;
use crate::operator::OperatorMatrix;
use crate::signal::{FiniteSignal, C64};

/// Orthonormality tolerance for [`pair_functional`] inputs.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Singular values in non-increasing order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `l^p` norm of the spectrum.
    pub fn norm(&self, p: Exponent) -> f64 {
        p.norm_of(&self.values)
    }
}

/// Singular value decomposition `A = U diag(s) V^*` with `s` sorted descending.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left: DMatrix<C64>,
    pub spectrum: SingularSpectrum,
    pub right: DMatrix<C64>,
}

impl SvdFactors {
    /// The `k`-th left singular vector as a signal on the domain of `like`.
    pub fn left_vector(&self, k: usize, like: &FiniteSignal) -> FiniteSignal {
        column_signal(&self.left, k, like)
    }

    pub fn right_vector(&self, k: usize, like: &FiniteSignal) -> FiniteSignal {
        column_signal(&self.right, k, like)
    }
}

fn column_signal(m: &DMatrix<C64>, k: usize, like: &FiniteSignal) -> FiniteSignal {
    FiniteSignal::new(like.n(), like.dim(), m.column(k).iter().copied().collect())
        .expect("column length matches the operator size")
}

pub fn svd(a: &OperatorMatrix) -> Result<SvdFactors> {
    let decomposition = a.entries().clone().svd(true, true);
    let u = decomposition
        .u
        .ok_or_else(|| Error::Numerical("SVD did not return U".into()))?;
    let v_t = decomposition
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not return V^*".into()))?;
    let s = decomposition.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let n = a.n();
    let left = DMatrix::from_fn(n, n, |r, c| u[(r, order[c])]);
    let right = DMatrix::from_fn(n, n, |r, c| v_t[(order[c], r)].conj());
    let values = order.iter().map(|&i| s[i].max(0.0)).collect();
    Ok(SvdFactors {
        left,
        spectrum: SingularSpectrum { values },
        right,
    })
}

pub fn singular_values(a: &OperatorMatrix) -> SingularSpectrum {
    let mut values: Vec<f64> = a
        .entries()
        .singular_values()
        .iter()
        .map(|s| s.max(0.0))
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    SingularSpectrum { values }
}

fn check_p(p: Exponent) -> Result<()> {
    if !p.is_infinite() && p.value() < 1.0 {
        return invalid(format!("Schatten exponent must be >= 1, got {p}"));
    }
    Ok(())
}

pub fn schatten_norm(a: &OperatorMatrix, p: Exponent) -> Result<f64> {
    check_p(p)?;
    Ok(singular_values(a).norm(p))
}

fn check_orthonormal(vs: &[FiniteSignal], n: usize, name: &str) -> Result<()> {
    for (i, u) in vs.iter().enumerate() {
        if u.len() != n {
            return invalid(format!("{name}[{i}] has length {}, expected {n}", u.len()));
        }
        for (j, w) in vs.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            let g = u.inner(w)?;
            if (g - C64::new(target, 0.0)).norm() > ORTHONORMAL_TOL {
                return invalid(format!("{name} is not orthonormal at ({i}, {j})"));
            }
        }
    }
    Ok(())
}

/// `(sum_k |<A f_k, g_k>|^p)^{1/p}` over orthonormal lists `fs`, `gs`.
pub fn pair_functional(
    a: &OperatorMatrix,
    fs: &[FiniteSignal],
    gs: &[FiniteSignal],
    p: Exponent,
) -> Result<f64> {
    check_p(p)?;
    if fs.len() != gs.len() {
        return invalid("the two orthonormal lists must have equal length");
    }
    check_orthonormal(fs, a.n(), "fs")?;
    check_orthonormal(gs, a.n(), "gs")?;
    let mut terms = Vec::with_capacity(fs.len());
    for (f, g) in fs.iter().zip(gs) {
        terms.push(a.apply(f)?.inner(g)?.norm());
    }
    Ok(p.norm_of(&terms))
}
