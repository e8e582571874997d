//! Permutations of array axes and nested `l^p` norms.
//!
//! A permutation `c` of `{1, ..., m}` reorders the axes of an `m`-axis array:
//! axis `j` of the permuted array is axis `c(j)` of the original. The mixed
//! norm then contracts permuted axis 1 with `l^{p_1}` first (innermost),
//! permuted axis 2 with `l^{p_2}` next, and so on outwards.
//!
//! A condition "`c` maps the axis set `S` to the position set `T`" means that
//! the positions `T` of the permuted array hold exactly the original axes `S`,
//! i.e. `{c(j) : j in T} = S`. Under this reading a slice permutation puts the
//! time-frequency plane of one variable innermost.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::signal::{stft, FiniteSignal, TFArray, C64};

/// A bijection of `{1, ..., m}` stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// `image[i]` is `c(i + 1)`; entries are 1-based.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        if m == 0 {
            return invalid("permutation must be non-empty");
        }
        let mut seen = vec![false; m];
        for &v in &image {
            if v == 0 || v > m || seen[v - 1] {
                return invalid(format!("{image:?} is not a permutation of 1..={m}"));
            }
            seen[v - 1] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            image: (1..=m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `c(j)` for 1-based `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.image[j - 1]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &v) in self.image.iter().enumerate() {
            inv[v - 1] = j + 1;
        }
        Self { image: inv }
    }

    /// True when positions `positions` hold exactly the original axes `axes`.
    pub fn maps(&self, axes: &BTreeSet<usize>, positions: &BTreeSet<usize>) -> bool {
        axes.len() == positions.len()
            && positions
                .iter()
                .all(|&j| j <= self.len() && axes.contains(&self.apply(j)))
    }

    /// All permutations of `{1, ..., m}` in lexicographic order.
    pub fn all(m: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=m).collect();
        loop {
            out.push(Self {
                image: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..m.saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..m).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let image = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad permutation entry {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(image)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.image.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<usize>),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::List(v) => Permutation::new(v),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// An exponent in `[1, inf]`; infinity is its own variant so that
/// sup-contractions are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return invalid(format!("exponent {p} is below 1"));
        }
        if p.is_infinite() {
            return Ok(Self::Infinite);
        }
        Ok(Self::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// The exponent as an extended real.
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, zero for infinity.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinite => 0.0,
        }
    }

    /// `l^p` norm of non-negative values.
    pub fn norm_of(self, values: &[f64]) -> f64 {
        match self {
            Self::Infinite => values.iter().copied().fold(0.0, f64::max),
            Self::Finite(1.0) => values.iter().sum(),
            Self::Finite(2.0) => values.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Self::Finite(p) => values.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinite),
            t => t
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad exponent {s:?}")))
                .and_then(Self::finite),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::finite(p),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentVector(Vec<Exponent>);

impl ExponentVector {
    pub fn new(exps: Vec<Exponent>) -> Result<Self> {
        if exps.is_empty() {
            return invalid("exponent vector must be non-empty");
        }
        Ok(Self(exps))
    }

    pub fn uniform(m: usize, p: Exponent) -> Self {
        Self(vec![p; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Exponent] {
        &self.0
    }

    /// Copy with the 1-based `slot` replaced.
    pub fn with_slot(&self, slot: usize, p: Exponent) -> Self {
        let mut v = self.0.clone();
        v[slot - 1] = p;
        Self(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationClass {
    FirstSlice,
    SecondSlice,
    FirstFioSlice,
    SecondFioSlice,
    FirstFioSymbol,
    SecondFioSymbol,
}

impl PermutationClass {
    pub const ALL: [PermutationClass; 6] = [
        Self::FirstSlice,
        Self::SecondSlice,
        Self::FirstFioSlice,
        Self::SecondFioSlice,
        Self::FirstFioSymbol,
        Self::SecondFioSymbol,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::FirstSlice => "first-slice",
            Self::SecondSlice => "second-slice",
            Self::FirstFioSlice => "first-FIO-slice",
            Self::SecondFioSlice => "second-FIO-slice",
            Self::FirstFioSymbol => "first-FIO-symbol",
            Self::SecondFioSymbol => "second-FIO-symbol",
        }
    }

    /// Number of axes (in units of `d`) the class is defined on.
    pub fn axes_per_dim(self) -> usize {
        match self {
            Self::FirstSlice | Self::SecondSlice => 4,
            _ => 6,
        }
    }

    /// The `(axes, positions)` block conditions defining the class.
    pub fn conditions(self, d: usize) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        // block k (1-based) of width d: {(k-1)d+1, ..., kd}
        let b = |ks: &[usize]| -> BTreeSet<usize> {
            ks.iter().flat_map(|&k| (k - 1) * d + 1..=k * d).collect()
        };
        match self {
            Self::FirstSlice => vec![(b(&[1, 3]), b(&[1, 2])), (b(&[2, 4]), b(&[3, 4]))],
            Self::SecondSlice => vec![(b(&[2, 4]), b(&[1, 2])), (b(&[1, 3]), b(&[3, 4]))],
            Self::FirstFioSlice => vec![
                (b(&[1, 4]), b(&[1, 2])),
                (b(&[2, 5]), b(&[3, 4])),
                (b(&[3]), b(&[5])),
                (b(&[6]), b(&[6])),
            ],
            Self::SecondFioSlice => vec![
                (b(&[2, 5]), b(&[1, 2])),
                (b(&[1, 4]), b(&[3, 4])),
                (b(&[3]), b(&[5])),
                (b(&[6]), b(&[6])),
            ],
            Self::FirstFioSymbol => vec![
                (b(&[6]), b(&[1])),
                (b(&[1, 4]), b(&[2, 3])),
                (b(&[2, 5]), b(&[4, 5])),
                (b(&[3]), b(&[6])),
            ],
            Self::SecondFioSymbol => vec![
                (b(&[6]), b(&[1])),
                (b(&[2, 5]), b(&[2, 3])),
                (b(&[1, 4]), b(&[4, 5])),
                (b(&[3]), b(&[6])),
            ],
        }
    }

    pub fn contains(self, c: &Permutation, d: usize) -> bool {
        c.len() == self.axes_per_dim() * d
            && self
                .conditions(d)
                .iter()
                .all(|(axes, positions)| c.maps(axes, positions))
    }
}

impl fmt::Display for PermutationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Every class whose block conditions `c` satisfies.
pub fn classify_permutation(c: &Permutation, d: usize) -> Result<BTreeSet<PermutationClass>> {
    if d == 0 || (c.len() != 4 * d && c.len() != 6 * d) {
        return invalid(format!(
            "permutation of length {} is neither 4d nor 6d for d = {d}",
            c.len()
        ));
    }
    Ok(PermutationClass::ALL
        .into_iter()
        .filter(|class| class.contains(c, d))
        .collect())
}

/// Mixed norm of a row-major array of non-negative magnitudes.
pub fn mixed_norm_real(
    mags: &[f64],
    shape: &[usize],
    c: &Permutation,
    exps: &ExponentVector,
) -> Result<f64> {
    let rank = shape.len();
    if c.len() != rank || exps.len() != rank {
        return invalid(format!(
            "array rank {rank}, permutation length {}, exponent count {} must agree",
            c.len(),
            exps.len()
        ));
    }
    if shape.iter().product::<usize>() != mags.len() {
        return invalid("array length does not match its shape");
    }
    if mags.iter().any(|v| !v.is_finite()) {
        return invalid("array entries must be finite");
    }

    // Reorder so the first-contracted axis is the fastest varying one.
    let order: Vec<usize> = (1..=rank).rev().map(|j| c.apply(j) - 1).collect();
    let mut current = transpose(mags, shape, &order);
    for (j, p) in exps.as_slice().iter().enumerate() {
        let len = shape[c.apply(j + 1) - 1];
        current = current.chunks_exact(len).map(|ch| p.norm_of(ch)).collect();
    }
    Ok(current[0])
}

fn transpose(data: &[f64], shape: &[usize], order: &[usize]) -> Vec<f64> {
    let rank = shape.len();
    if order.iter().enumerate().all(|(i, &a)| i == a) {
        return data.to_vec();
    }
    let mut strides = vec![1usize; rank];
    for a in (0..rank.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * shape[a + 1];
    }
    let out_shape: Vec<usize> = order.iter().map(|&a| shape[a]).collect();
    let out_strides: Vec<usize> = order.iter().map(|&a| strides[a]).collect();
    let mut out = Vec::with_capacity(data.len());
    let mut idx = vec![0usize; rank];
    let mut offset = 0usize;
    let inner = rank - 1;
    let (inner_len, inner_stride) = (out_shape[inner], out_strides[inner]);
    loop {
        for i in 0..inner_len {
            out.push(data[offset + i * inner_stride]);
        }
        // odometer over the outer axes
        let mut axis = inner;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            idx[axis] += 1;
            offset += out_strides[axis];
            if idx[axis] < out_shape[axis] {
                break;
            }
            offset -= out_strides[axis] * out_shape[axis];
            idx[axis] = 0;
        }
    }
}

/// Mixed norm `||arr ∘ c||_{l^{p_1, ..., p_m}}` of a complex array.
pub fn mixed_norm(
    data: &[C64],
    shape: &[usize],
    c: &Permutation,
    exps: &ExponentVector,
) -> Result<f64> {
    if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return invalid("array entries must be finite");
    }
    let mags: Vec<f64> = data.iter().map(|v| v.norm()).collect();
    mixed_norm_real(&mags, shape, c, exps)
}

impl TFArray {
    pub fn mixed_norm(&self, c: &Permutation, exps: &ExponentVector) -> Result<f64> {
        mixed_norm(self.values(), &self.shape(), c, exps)
    }
}

/// Mixed modulation norm of a function on `Z_n^r`: the mixed norm of its STFT
/// against the tensor power `window^{⊗r}`.
pub fn mixed_modulation_norm(
    f: &FiniteSignal,
    window: &FiniteSignal,
    c: &Permutation,
    exps: &ExponentVector,
) -> Result<f64> {
    if window.dim() != 1 || window.n() != f.n() {
        return invalid("window must be a signal on the same Z_n with d = 1");
    }
    if c.len() != 2 * f.dim() {
        return invalid(format!(
            "permutation length {} does not match the {} STFT axes",
            c.len(),
            2 * f.dim()
        ));
    }
    let full_window = window.tensor_power(f.dim())?;
    stft(f, &full_window)?.mixed_norm(c, exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn exps(s: &str) -> ExponentVector {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn permutation_validation_and_parsing() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!("1,x".parse::<Permutation>().is_err());
        let p = perm("2,5,1,4,3,6");
        assert_eq!(p.to_string(), "2,5,1,4,3,6");
        assert_eq!(p.inverse().inverse(), p);
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(6).len(), 720);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(exps("2,2,1,inf").len(), 4);
        let json = serde_json::to_string(&exps("2,inf")).unwrap();
        assert_eq!(json, r#"[2.0,"inf"]"#);
        let back: ExponentVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, exps("2,inf"));
    }

    #[test]
    fn classify_examples() {
        let first = classify_permutation(&perm("1,3,2,4"), 1).unwrap();
        assert_eq!(first, BTreeSet::from([PermutationClass::FirstSlice]));
        assert!(classify_permutation(&perm("1,2,3,4"), 1)
            .unwrap()
            .is_empty());
        assert!(classify_permutation(&perm("1,2,3"), 1).is_err());
        let fio = classify_permutation(&perm("2,5,1,4,3,6"), 1).unwrap();
        assert_eq!(fio, BTreeSet::from([PermutationClass::SecondFioSlice]));
        let sym = classify_permutation(&perm("6,1,4,2,5,3"), 1).unwrap();
        assert_eq!(sym, BTreeSet::from([PermutationClass::FirstFioSymbol]));
    }

    #[test]
    fn classify_d2_slice() {
        // positions 1..4 hold {1,2,5,6}, positions 5..8 hold {3,4,7,8}
        let c = perm("1,2,5,6,3,4,7,8");
        let classes = classify_permutation(&c, 2).unwrap();
        assert!(classes.contains(&PermutationClass::FirstSlice));
    }

    #[test]
    fn matrix_example_one_then_sup() {
        // arr[i][j], axis 1 = i
        let data = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let v = mixed_norm(&data, &[2, 2], &Permutation::identity(2), &exps("1,inf")).unwrap();
        assert_eq!(v, 6.0);
        let swapped = mixed_norm(&data, &[2, 2], &perm("2,1"), &exps("1,inf")).unwrap();
        assert_eq!(swapped, 7.0);
    }

    #[test]
    fn mixed_norm_rank_mismatch_and_non_finite() {
        let data = [c(1.0, 0.0); 4];
        assert!(mixed_norm(&data, &[2, 2], &perm("1,2,3"), &exps("1,1,1")).is_err());
        assert!(mixed_norm(&data, &[2, 2], &perm("1,2"), &exps("1")).is_err());
        let bad = [c(f64::INFINITY, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(mixed_norm(&bad, &[2, 2], &perm("1,2"), &exps("1,1")).is_err());
    }

    fn random_array(rng: &mut ChaCha8Rng, shape: &[usize]) -> Vec<C64> {
        let len: usize = shape.iter().product();
        (0..len)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect()
    }

    #[test]
    fn all_two_is_frobenius_and_all_inf_is_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let shape = [3, 4, 2, 5];
        let data = random_array(&mut rng, &shape);
        let frob = data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let max = data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for p in Permutation::all(4) {
            let two = mixed_norm(&data, &shape, &p, &exps("2,2,2,2")).unwrap();
            assert!((two - frob).abs() < 1e-12 * frob);
            let inf = mixed_norm(&data, &shape, &p, &exps("inf,inf,inf,inf")).unwrap();
            assert_eq!(inf, max);
        }
    }

    #[test]
    fn lp_monotone_along_each_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let shape = [4, 3, 5];
        let data = random_array(&mut rng, &shape);
        let ladder = ["1", "1.5", "2", "3", "inf"];
        for axis in 1..=3 {
            // contract only the probed axis with a varying exponent, keep the others at 1
            let mut image = vec![axis];
            image.extend((1..=3).filter(|&a| a != axis));
            let c = Permutation::new(image).unwrap();
            let values: Vec<f64> = ladder
                .iter()
                .map(|p| {
                    let e = format!("{p},1,1");
                    mixed_norm(&data, &shape, &c, &exps(&e)).unwrap()
                })
                .collect();
            for w in values.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn modulation_norm_examples() {
        let n = 4;
        let d0 = FiniteSignal::delta(n, 1, &[0]).unwrap();
        let v = mixed_modulation_norm(&d0, &d0, &Permutation::identity(2), &exps("1,1")).unwrap();
        assert!((v - 2.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = FiniteSignal::new(6, 2, random_array(&mut rng, &[6, 6])).unwrap();
        let g = FiniteSignal::new(6, 1, random_array(&mut rng, &[6])).unwrap();
        let moyal = mixed_modulation_norm(&f, &g, &perm("3,1,4,2"), &exps("2,2,2,2")).unwrap();
        let expected = f.norm() * g.norm().powi(2);
        assert!((moyal - expected).abs() < 1e-12 * expected);

        let e = exps("2,2,1.5,inf");
        let base = mixed_modulation_norm(&f, &g, &perm("1,3,2,4"), &e).unwrap();
        let alpha = c(-1.5, 2.0);
        let scaled = mixed_modulation_norm(&f.scaled(alpha), &g, &perm("1,3,2,4"), &e).unwrap();
        assert!((scaled - alpha.norm() * base).abs() < 1e-12 * scaled);

        assert!(mixed_modulation_norm(&f, &g, &perm("1,2"), &exps("2,2")).is_err());
    }

    fn arb_exponent() -> impl Strategy<Value = Exponent> {
        prop_oneof![
            (1.0f64..4.0).prop_map(Exponent::Finite),
            Just(Exponent::Finite(1.0)),
            Just(Exponent::Infinite),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn homogeneous_and_subadditive(
            seed in any::<u64>(),
            perm_idx in 0usize..24,
            e in proptest::collection::vec(arb_exponent(), 4),
            alpha_re in -3.0f64..3.0,
            alpha_im in -3.0f64..3.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shape = [3, 2, 4, 3];
            let a = random_array(&mut rng, &shape);
            let b = random_array(&mut rng, &shape);
            let p = &Permutation::all(4)[perm_idx];
            let ev = ExponentVector::new(e).unwrap();
            let na = mixed_norm(&a, &shape, p, &ev).unwrap();
            let nb = mixed_norm(&b, &shape, p, &ev).unwrap();
            let sum: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let nsum = mixed_norm(&sum, &shape, p, &ev).unwrap();
            prop_assert!(nsum <= na + nb + 1e-10);
            let alpha = c(alpha_re, alpha_im);
            let scaled: Vec<C64> = a.iter().map(|x| x * alpha).collect();
            let ns = mixed_norm(&scaled, &shape, p, &ev).unwrap();
            prop_assert!((ns - alpha.norm() * na).abs() <= 1e-10 * (1.0 + ns));
        }
    }
}
