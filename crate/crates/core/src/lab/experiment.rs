//! Ratio, sharpness and multiplication experiments.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;

use super::config::{ExperimentConfig, OperatorForm, TheoremId, WindowKind};
use super::ensemble::{gaussian_symbol, make_window, quadratic_phase, random_phase, trial_rng};
use super::report::{
    growth_factor, is_non_decreasing, summarize, Report, TrendCheck, TrialMetadata, TrialRecord,
    TREND_RTOL,
};
use crate::error::{Error, Result};
use crate::fio::{
    build_easy_fio, build_hard_fio, quadratic_phase_table, PhaseTable, QuadraticPhase, SymbolTable,
};
use crate::mixed::{
    classify_permutation, mixed_modulation_norm, Exponent, ExponentVector, Permutation,
    PermutationClass,
};
use crate::operator::OperatorMatrix;
use crate::schatten::schatten_norm;
use crate::signal::{wiener_amalgam_norm, FiniteSignal, C64};

/// Symbol and phase of one trial.
#[derive(Debug, Clone)]
pub struct Tables {
    pub symbol: SymbolTable,
    pub phase: PhaseTable,
    pub quadratic: Option<QuadraticPhase>,
}

pub fn rank_of(theorem: TheoremId) -> usize {
    if theorem.form() == OperatorForm::ThreeVariable {
        3
    } else {
        2
    }
}

/// Draws the symbol and phase a theorem's compliant run uses.
pub fn draw_tables<R: Rng>(theorem: TheoremId, n: usize, rng: &mut R) -> Result<Tables> {
    let rank = rank_of(theorem);
    let symbol = gaussian_symbol(rng, n, rank)?;
    if theorem.form() == OperatorForm::Kernel {
        return Ok(Tables {
            symbol,
            phase: PhaseTable::zeros(n, rank)?,
            quadratic: None,
        });
    }
    if theorem.uses_quadratic_phase() {
        let qp = quadratic_phase(rng, n, rank, theorem.requires_separated_phase())?;
        Ok(Tables {
            symbol,
            phase: quadratic_phase_table(&qp, n, rank)?,
            quadratic: Some(qp),
        })
    } else {
        Ok(Tables {
            symbol,
            phase: random_phase(rng, n, rank)?,
            quadratic: None,
        })
    }
}

pub fn build_operator(theorem: TheoremId, tables: &Tables) -> Result<OperatorMatrix> {
    match theorem.form() {
        OperatorForm::Kernel => {
            OperatorMatrix::from_row_major(tables.symbol.n(), tables.symbol.values())
        }
        OperatorForm::Symbol => build_easy_fio(&tables.symbol, &tables.phase),
        OperatorForm::ThreeVariable => build_hard_fio(&tables.symbol, &tables.phase),
    }
}

/// The function whose mixed modulation norm bounds the operator.
pub fn measured_object(theorem: TheoremId, tables: &Tables) -> Result<SymbolTable> {
    if theorem.measures_bare_symbol() || theorem.form() == OperatorForm::Kernel {
        Ok(tables.symbol.clone())
    } else {
        tables.symbol.modulated(&tables.phase)
    }
}

/// `(schatten_p(A), ||object||_{M(c)^exps})` for one set of tables.
pub fn evaluate(
    theorem: TheoremId,
    tables: &Tables,
    window: &FiniteSignal,
    c: &Permutation,
    exps: &ExponentVector,
    p: f64,
) -> Result<(f64, f64)> {
    let a = build_operator(theorem, tables)?;
    let s = schatten_norm(&a, Exponent::finite(p)?)?;
    let object = measured_object(theorem, tables)?;
    let m = mixed_modulation_norm(object.as_signal(), window, c, exps)?;
    Ok((s, m))
}

fn det(m: &[Vec<i64>]) -> f64 {
    let r = m.len();
    DMatrix::from_fn(r, r, |i, j| m[i][j] as f64).determinant()
}

fn phase_metadata(theorem: TheoremId, tables: &Tables) -> TrialMetadata {
    let Some(qp) = &tables.quadratic else {
        return TrialMetadata {
            phase_class: Some(if theorem.form() == OperatorForm::Kernel {
                "none".into()
            } else {
                "random".into()
            }),
            ..TrialMetadata::default()
        };
    };
    let m = qp.m();
    let mut dets = BTreeMap::new();
    dets.insert("M".to_string(), det(m));
    if m.len() == 2 {
        dets.insert("x_xi".to_string(), m[0][1] as f64);
    } else {
        dets.insert("x_y".to_string(), m[0][1] as f64);
        dets.insert("x_xi".to_string(), m[0][2] as f64);
        dets.insert("y_xi".to_string(), m[1][2] as f64);
    }
    let class = if theorem.requires_separated_phase() {
        "quadratic, psi_xy = 0"
    } else {
        "quadratic"
    };
    TrialMetadata {
        phase_class: Some(class.into()),
        det: dets,
        control_ratio: None,
    }
}

fn wiener_norms(kind: WindowKind, n_values: &[usize], seed: u64) -> Result<BTreeMap<usize, f64>> {
    let mut out = BTreeMap::new();
    for &n in n_values {
        let block = if n % 2 == 0 { 2 } else { 1 };
        out.insert(n, wiener_amalgam_norm(&make_window(kind, n, seed)?, block)?);
    }
    Ok(out)
}

fn window_label(kind: WindowKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn ceiling_check(max_ratios: &[f64], ceiling: f64, all_finite: bool) -> TrendCheck {
    let growth = growth_factor(max_ratios);
    TrendCheck {
        kind: "ceiling",
        threshold: ceiling,
        growth_factor: growth,
        non_decreasing: is_non_decreasing(max_ratios),
        passed: all_finite && growth <= ceiling * (1.0 + TREND_RTOL),
        control_growth_factor: None,
    }
}

/// Runs the experiment `cfg.theorem_id` calls for.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.theorem_id {
        t if t.is_sharpness() => sharpness_experiment(cfg),
        TheoremId::T42a => multiplication_experiment(&MultiplicationConfig::from_experiment(cfg)),
        _ => ratio_experiment(cfg),
    }
}

pub fn ratio_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let theorem = cfg.theorem_id;
    if theorem.is_sharpness() || theorem == TheoremId::T42a {
        return Err(Error::Config(format!(
            "{theorem} is not a ratio experiment"
        )));
    }
    let c = cfg.permutation();
    let exps = cfg.exponents();
    let mut records = Vec::new();
    for &n in &cfg.n_values {
        let window = make_window(cfg.window_kind, n, cfg.seed)?;
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, trial);
            let tables = draw_tables(theorem, n, &mut rng)?;
            let (s, m) = evaluate(theorem, &tables, &window, &c, &exps, cfg.p)?;
            records.push(TrialRecord::new(
                n,
                trial,
                s,
                m,
                phase_metadata(theorem, &tables),
            ));
        }
    }
    let per_n = summarize(&records);
    let max_ratios: Vec<f64> = per_n.iter().map(|s| s.max_ratio).collect();
    let all_finite = records.iter().all(TrialRecord::is_finite);
    let mut notes = Vec::new();
    if matches!(theorem, TheoremId::T43a | TheoremId::T43b) {
        notes.push("phases restricted to quadratic polynomials".to_string());
    }
    Ok(Report {
        theorem: theorem.label().to_string(),
        p: cfg.p,
        seed: cfg.seed,
        trials: cfg.trials,
        permutation: c.to_string(),
        exponents: exps.to_string(),
        violated_exponents: None,
        window_kind: window_label(cfg.window_kind),
        window_wiener_norms: wiener_norms(cfg.window_kind, &cfg.n_values, cfg.seed)?,
        growth_factor: growth_factor(&max_ratios),
        check: ceiling_check(&max_ratios, cfg.ceiling, all_finite),
        per_n,
        notes,
        records,
    })
}

/// Restriction of `(c, exps)` to the axes in `axes`, renumbered in
/// increasing order and kept in their relative positions.
pub fn restrict_pattern(
    c: &Permutation,
    exps: &ExponentVector,
    axes: &[usize],
) -> Result<(Permutation, ExponentVector)> {
    let mut sorted = axes.to_vec();
    sorted.sort_unstable();
    let mut image = Vec::new();
    let mut sub = Vec::new();
    for j in 1..=c.len() {
        if let Some(rank) = sorted.iter().position(|&a| a == c.apply(j)) {
            image.push(rank + 1);
            sub.push(exps.as_slice()[j - 1]);
        }
    }
    Ok((Permutation::new(image)?, ExponentVector::new(sub)?))
}

/// Mixed modulation norm of `b1(x, y) b2(xi)` without forming the rank-6 STFT.
///
/// The STFT of a tensor product against a tensor window is the product of the
/// factors' STFTs, and a nested norm of a product of functions of disjoint
/// axis sets is the product of the nested norms.
pub fn tensor_mixed_modulation_norm(
    b1: &FiniteSignal,
    b2: &FiniteSignal,
    window: &FiniteSignal,
    c: &Permutation,
    exps: &ExponentVector,
) -> Result<f64> {
    if b1.dim() != 2 || b2.dim() != 1 || c.len() != 6 {
        return Err(Error::InvalidArgument(
            "tensor norm expects b1 on Z_n^2, b2 on Z_n and six axes".into(),
        ));
    }
    let (c1, e1) = restrict_pattern(c, exps, &[1, 2, 4, 5])?;
    let (c2, e2) = restrict_pattern(c, exps, &[3, 6])?;
    Ok(mixed_modulation_norm(b1, window, &c1, &e1)? * mixed_modulation_norm(b2, window, &c2, &e2)?)
}

/// Which counterexample family a sharpness run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpnessFamily {
    /// `b = b1 ⊗ 1` with Gaussian `b1`: the `xi` integral grows with `n`.
    ConstantInXi,
    /// Kernel (or `b1` with `b2 = delta_0`) equal to the identity when the
    /// raised slot holds a frequency axis, the DFT matrix when it holds a time
    /// axis.
    Kernel { identity: bool },
}

pub fn sharpness_family(theorem: TheoremId, axis: usize) -> SharpnessFamily {
    match theorem.form() {
        OperatorForm::ThreeVariable if axis == 3 => SharpnessFamily::ConstantInXi,
        OperatorForm::ThreeVariable => SharpnessFamily::Kernel {
            identity: matches!(axis, 4 | 5),
        },
        _ => SharpnessFamily::Kernel {
            identity: matches!(axis, 3 | 4),
        },
    }
}

fn kernel_family(n: usize, identity: bool) -> Result<SymbolTable> {
    let k = if identity {
        OperatorMatrix::identity(n)?
    } else {
        OperatorMatrix::dft(n)?
    };
    SymbolTable::new(n, 2, k.to_row_major())
}

pub fn sharpness_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let theorem = cfg.theorem_id;
    if !theorem.is_sharpness() {
        return Err(Error::Config(format!(
            "{theorem} is not a sharpness experiment"
        )));
    }
    let c = cfg.permutation();
    let exps = cfg.exponents();
    let violated = cfg.violated_exponents()?;
    let slot = cfg
        .violation_slot
        .unwrap_or_else(|| cfg.default_violation_slot());
    let family = sharpness_family(theorem, c.apply(slot));
    let p = Exponent::finite(cfg.p)?;

    let mut records = Vec::new();
    for &n in &cfg.n_values {
        let window = make_window(cfg.window_kind, n, cfg.seed)?;
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, trial);
            let (s, bad, good) = match (theorem.form(), family) {
                (OperatorForm::Kernel, SharpnessFamily::Kernel { identity }) => {
                    let k = kernel_family(n, identity)?;
                    let s = schatten_norm(&OperatorMatrix::from_row_major(n, k.values())?, p)?;
                    (
                        s,
                        mixed_modulation_norm(k.as_signal(), &window, &c, &violated)?,
                        mixed_modulation_norm(k.as_signal(), &window, &c, &exps)?,
                    )
                }
                (_, fam) => {
                    let (b1, b2) = match fam {
                        SharpnessFamily::ConstantInXi => (
                            gaussian_symbol(&mut rng, n, 2)?,
                            FiniteSignal::constant(n, 1, C64::new(1.0, 0.0))?,
                        ),
                        SharpnessFamily::Kernel { identity } => (
                            kernel_family(n, identity)?,
                            FiniteSignal::delta(n, 1, &[0])?,
                        ),
                    };
                    let b = SymbolTable::from_signal(b1.as_signal().tensor(&b2)?)?;
                    let a = build_hard_fio(&b, &PhaseTable::zeros(n, 3)?)?;
                    let b1 = b1.as_signal();
                    (
                        schatten_norm(&a, p)?,
                        tensor_mixed_modulation_norm(b1, &b2, &window, &c, &violated)?,
                        tensor_mixed_modulation_norm(b1, &b2, &window, &c, &exps)?,
                    )
                }
            };
            let metadata = TrialMetadata {
                phase_class: Some("zero".into()),
                control_ratio: Some(super::report::ratio(s, good)),
                ..TrialMetadata::default()
            };
            records.push(TrialRecord::new(n, trial, s, bad, metadata));
        }
    }
    let per_n = summarize(&records);
    let max_ratios: Vec<f64> = per_n.iter().map(|s| s.max_ratio).collect();
    let controls: Vec<f64> = per_n.iter().filter_map(|s| s.max_control_ratio).collect();
    let growth = growth_factor(&max_ratios);
    let non_decreasing = is_non_decreasing(&max_ratios);
    let all_finite = records.iter().all(TrialRecord::is_finite);
    let family_note = match family {
        SharpnessFamily::ConstantInXi => "family: b1 (Gaussian) tensor constant in xi".to_string(),
        SharpnessFamily::Kernel { identity: true } => "family: identity kernel".to_string(),
        SharpnessFamily::Kernel { identity: false } => "family: DFT kernel".to_string(),
    };
    Ok(Report {
        theorem: theorem.label().to_string(),
        p: cfg.p,
        seed: cfg.seed,
        trials: cfg.trials,
        permutation: c.to_string(),
        exponents: exps.to_string(),
        violated_exponents: Some(violated.to_string()),
        window_kind: window_label(cfg.window_kind),
        window_wiener_norms: wiener_norms(cfg.window_kind, &cfg.n_values, cfg.seed)?,
        growth_factor: growth,
        check: TrendCheck {
            kind: "floor",
            threshold: cfg.floor,
            growth_factor: growth,
            non_decreasing,
            passed: all_finite && non_decreasing && growth >= cfg.floor * (1.0 - TREND_RTOL),
            control_growth_factor: Some(growth_factor(&controls)),
        },
        per_n,
        notes: vec![family_note],
        records,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationConfig {
    pub n_values: Vec<usize>,
    pub seed: u64,
    pub permutation: Permutation,
    pub exponents: ExponentVector,
    pub trials: usize,
    pub window_kind: WindowKind,
    pub ceiling: f64,
}

impl MultiplicationConfig {
    pub fn from_experiment(cfg: &ExperimentConfig) -> Self {
        Self {
            n_values: cfg.n_values.clone(),
            seed: cfg.seed,
            permutation: cfg.permutation(),
            exponents: cfg.exponents(),
            trials: cfg.trials,
            window_kind: cfg.window_kind,
            ceiling: cfg.ceiling,
        }
    }

    /// The common exponent `p` of the pattern `(2, 2, p, p)`.
    pub fn validate(&self) -> Result<Exponent> {
        let e = self.exponents.as_slice();
        let two = Exponent::Finite(2.0);
        if e.len() != 4 || e[0] != two || e[1] != two || e[2] != e[3] {
            return Err(Error::Config(format!(
                "multiplication bound needs exponents (2,2,p,p), got {}",
                self.exponents
            )));
        }
        let classes =
            classify_permutation(&self.permutation, 1).map_err(|e| Error::Config(e.to_string()))?;
        if !classes.contains(&PermutationClass::FirstSlice)
            && !classes.contains(&PermutationClass::SecondSlice)
        {
            return Err(Error::Config(format!(
                "multiplication bound needs a first or second slice permutation, got {}",
                self.permutation
            )));
        }
        if self.trials == 0 || self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::Config(
                "need at least one trial and group sizes n >= 2".into(),
            ));
        }
        Ok(e[2])
    }
}

/// Exponents `(inf, inf, 1, 1)` of the `M^{inf,1}` analog on `Z_n^2`.
pub fn sjostrand_exponents() -> ExponentVector {
    "inf,inf,1,1".parse().expect("valid pattern")
}

/// `(||f g||_{M(c)^exps}, ||f||_{M(c)^exps} ||g||_{M^{inf,1}})`.
pub fn multiplication_sides(
    f: &FiniteSignal,
    g: &FiniteSignal,
    window: &FiniteSignal,
    c: &Permutation,
    exps: &ExponentVector,
) -> Result<(f64, f64)> {
    let fg = mixed_modulation_norm(&f.mul(g)?, window, c, exps)?;
    let nf = mixed_modulation_norm(f, window, c, exps)?;
    let ng = mixed_modulation_norm(g, window, &Permutation::identity(4), &sjostrand_exponents())?;
    Ok((fg, nf * ng))
}

/// Random Gaussian `f` against the quadratic-phase exponential
/// `g = e^{2 pi i psi}` on `Z_n^2`.
pub fn multiplication_experiment(cfg: &MultiplicationConfig) -> Result<Report> {
    let p = cfg.validate()?;
    let mut records = Vec::new();
    for &n in &cfg.n_values {
        let window = make_window(cfg.window_kind, n, cfg.seed)?;
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, trial);
            let f = gaussian_symbol(&mut rng, n, 2)?;
            let qp = quadratic_phase(&mut rng, n, 2, false)?;
            let g = quadratic_phase_table(&qp, n, 2)?.cis();
            let (lhs, rhs) =
                multiplication_sides(f.as_signal(), &g, &window, &cfg.permutation, &cfg.exponents)?;
            let mut det = BTreeMap::new();
            det.insert("M".to_string(), self::det(qp.m()));
            let metadata = TrialMetadata {
                phase_class: Some("quadratic".into()),
                det,
                control_ratio: None,
            };
            records.push(TrialRecord::new(n, trial, lhs, rhs, metadata));
        }
    }
    let per_n = summarize(&records);
    let max_ratios: Vec<f64> = per_n.iter().map(|s| s.max_ratio).collect();
    let all_finite = records.iter().all(TrialRecord::is_finite);
    Ok(Report {
        theorem: TheoremId::T42a.label().to_string(),
        p: p.value(),
        seed: cfg.seed,
        trials: cfg.trials,
        permutation: cfg.permutation.to_string(),
        exponents: cfg.exponents.to_string(),
        violated_exponents: None,
        window_kind: window_label(cfg.window_kind),
        window_wiener_norms: wiener_norms(cfg.window_kind, &cfg.n_values, cfg.seed)?,
        growth_factor: growth_factor(&max_ratios),
        check: ceiling_check(&max_ratios, cfg.ceiling, all_finite),
        per_n,
        notes: vec!["schatten column holds ||f g||, mixednorm holds ||f|| ||g||".into()],
        records,
    })
}
