use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed::{classify_permutation, Exponent, ExponentVector, Permutation, PermutationClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T2.9")]
    T29,
    #[serde(rename = "T3.1")]
    T31,
    #[serde(rename = "T3.2")]
    T32,
    #[serde(rename = "T4.2a")]
    T42a,
    #[serde(rename = "T4.3a")]
    T43a,
    #[serde(rename = "T4.3b")]
    T43b,
    #[serde(rename = "T4.4a")]
    T44a,
    #[serde(rename = "T4.4b")]
    T44b,
    #[serde(rename = "T4.5a")]
    T45a,
    #[serde(rename = "T4.5b")]
    T45b,
    #[serde(rename = "SHARP-T2.9")]
    SharpT29,
    #[serde(rename = "SHARP-T4.3")]
    SharpT43,
    #[serde(rename = "SHARP-T4.4")]
    SharpT44,
}

/// How the operator is assembled from the drawn tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorForm {
    Kernel,
    Symbol,
    ThreeVariable,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        Self::T29,
        Self::T31,
        Self::T32,
        Self::T42a,
        Self::T43a,
        Self::T43b,
        Self::T44a,
        Self::T44b,
        Self::T45a,
        Self::T45b,
        Self::SharpT29,
        Self::SharpT43,
        Self::SharpT44,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::T29 => "T2.9",
            Self::T31 => "T3.1",
            Self::T32 => "T3.2",
            Self::T42a => "T4.2a",
            Self::T43a => "T4.3a",
            Self::T43b => "T4.3b",
            Self::T44a => "T4.4a",
            Self::T44b => "T4.4b",
            Self::T45a => "T4.5a",
            Self::T45b => "T4.5b",
            Self::SharpT29 => "SHARP-T2.9",
            Self::SharpT43 => "SHARP-T4.3",
            Self::SharpT44 => "SHARP-T4.4",
        }
    }

    pub fn is_sharpness(self) -> bool {
        matches!(self, Self::SharpT29 | Self::SharpT43 | Self::SharpT44)
    }

    pub fn form(self) -> OperatorForm {
        match self {
            Self::T29 | Self::T42a | Self::SharpT29 => OperatorForm::Kernel,
            Self::T31 | Self::T43a | Self::T44a | Self::T45a => OperatorForm::Symbol,
            _ => OperatorForm::ThreeVariable,
        }
    }

    /// Whether the phase ensemble is quadratic (and chirps are in play).
    pub fn uses_quadratic_phase(self) -> bool {
        matches!(
            self,
            Self::T43a | Self::T43b | Self::T44a | Self::T44b | Self::T45a | Self::T45b
        )
    }

    /// Whether the hypotheses demand `psi_{x y} = 0`.
    pub fn requires_separated_phase(self) -> bool {
        matches!(self, Self::T43a | Self::T43b | Self::T44a | Self::T44b)
    }

    /// Whether the mixed norm is taken of the bare symbol rather than of
    /// `symbol * e^{2 pi i phase}`.
    pub fn measures_bare_symbol(self) -> bool {
        self.uses_quadratic_phase() || matches!(self, Self::SharpT43 | Self::SharpT44)
    }

    /// The theorem's exponent pattern at `d = 1`.
    pub fn exponents(self, p: f64) -> ExponentVector {
        let p = Exponent::Finite(p);
        let two = Exponent::Finite(2.0);
        let one = Exponent::Finite(1.0);
        let inf = Exponent::Infinite;
        let v = match self {
            Self::T29 | Self::T31 | Self::T42a | Self::T43a | Self::T44a | Self::SharpT29 => {
                vec![two, two, p, p]
            }
            Self::T32 | Self::T43b | Self::SharpT43 => vec![two, two, p, p, one, inf],
            Self::T44b | Self::SharpT44 => vec![inf, two, two, p, p, one],
            Self::T45a => vec![two, p, p, p],
            Self::T45b => vec![inf, two, p, p, p, one],
        };
        ExponentVector::new(v).expect("patterns are non-empty")
    }

    /// Human-readable name of the permutation family the theorem requires.
    pub fn permutation_requirement(self) -> &'static str {
        match self.form() {
            _ if self == Self::T45a => "position 1 holding axis 3 or 4",
            _ if self == Self::T45b => {
                "position 1 holding axis 6, position 6 holding axis 3, position 2 holding axis 4 or 5"
            }
            _ if matches!(self, Self::T44b | Self::SharpT44) => "a first or second FIO symbol permutation",
            OperatorForm::ThreeVariable => "a first or second FIO slice permutation",
            _ => "a first or second slice permutation",
        }
    }

    pub fn accepts_permutation(self, c: &Permutation) -> bool {
        let expected_len = if self.form() == OperatorForm::ThreeVariable {
            6
        } else {
            4
        };
        if c.len() != expected_len {
            return false;
        }
        let classes = match classify_permutation(c, 1) {
            Ok(classes) => classes,
            Err(_) => return false,
        };
        let any = |wanted: &[PermutationClass]| wanted.iter().any(|w| classes.contains(w));
        match self {
            Self::T45a => matches!(c.apply(1), 3 | 4),
            Self::T45b => c.apply(1) == 6 && c.apply(6) == 3 && matches!(c.apply(2), 4 | 5),
            Self::T44b | Self::SharpT44 => any(&[
                PermutationClass::FirstFioSymbol,
                PermutationClass::SecondFioSymbol,
            ]),
            Self::T32 | Self::T43b | Self::SharpT43 => any(&[
                PermutationClass::FirstFioSlice,
                PermutationClass::SecondFioSlice,
            ]),
            _ => any(&[PermutationClass::FirstSlice, PermutationClass::SecondSlice]),
        }
    }

    /// A permutation the theorem accepts, used when none is configured.
    pub fn default_permutation(self) -> Permutation {
        let image = match self {
            Self::T32 | Self::T43b | Self::SharpT43 => vec![1, 4, 2, 5, 3, 6],
            Self::T44b | Self::SharpT44 => vec![6, 1, 4, 2, 5, 3],
            Self::T45a => vec![4, 1, 2, 3],
            Self::T45b => vec![6, 5, 1, 2, 4, 3],
            _ => vec![1, 3, 2, 4],
        };
        Permutation::new(image).expect("valid image")
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Delta,
    #[default]
    GaussianSampled,
    Random,
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown window kind {s:?}")))
    }
}

fn default_ceiling() -> f64 {
    4.0
}

fn default_floor() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub theorem_id: TheoremId,
    pub n_values: Vec<usize>,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub permutation: Option<Permutation>,
    #[serde(default)]
    pub window_kind: WindowKind,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Sharpness runs: 1-based exponent slot to raise.
    #[serde(default)]
    pub violation_slot: Option<usize>,
    /// Sharpness runs: the exponent placed in `violation_slot`.
    #[serde(default)]
    pub violation_exponent: Option<Exponent>,
    /// Compliant runs: largest acceptable cross-n growth factor.
    #[serde(default = "default_ceiling")]
    pub ceiling: f64,
    /// Sharpness runs: smallest acceptable cross-n growth factor.
    #[serde(default = "default_floor")]
    pub floor: f64,
}

impl ExperimentConfig {
    pub fn new(
        theorem_id: TheoremId,
        n_values: Vec<usize>,
        p: f64,
        trials: usize,
        seed: u64,
    ) -> Self {
        Self {
            theorem_id,
            n_values,
            p,
            trials,
            seed,
            permutation: None,
            window_kind: WindowKind::default(),
            output_path: None,
            violation_slot: None,
            violation_exponent: None,
            ceiling: default_ceiling(),
            floor: default_floor(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn permutation(&self) -> Permutation {
        self.permutation
            .clone()
            .unwrap_or_else(|| self.theorem_id.default_permutation())
    }

    pub fn exponents(&self) -> ExponentVector {
        self.theorem_id.exponents(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(1.0..=2.0).contains(&self.p) {
            return fail(format!("p must lie in [1, 2], got {}", self.p));
        }
        if self.trials == 0 {
            return fail("trials must be positive".into());
        }
        if self.n_values.is_empty() {
            return fail("n_values is empty".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return fail(format!("group size {n} is too small"));
        }
        if self.theorem_id.uses_quadratic_phase() {
            if let Some(&n) = self.n_values.iter().find(|&&n| n % 2 != 0) {
                return fail(format!(
                    "{} draws chirps, which need even n (got {n})",
                    self.theorem_id
                ));
            }
        }
        let c = self.permutation();
        if !self.theorem_id.accepts_permutation(&c) {
            return fail(format!(
                "{} requires {}, got {c}",
                self.theorem_id,
                self.theorem_id.permutation_requirement()
            ));
        }
        if self.theorem_id.is_sharpness() {
            self.violated_exponents()?;
        }
        Ok(())
    }

    pub fn default_violation_slot(&self) -> usize {
        match self.theorem_id {
            TheoremId::SharpT29 => 3,
            TheoremId::SharpT43 => 5,
            _ => 6,
        }
    }

    /// The compliant pattern with the violation slot raised.
    pub fn violated_exponents(&self) -> Result<ExponentVector> {
        let exps = self.exponents();
        let slot = self
            .violation_slot
            .unwrap_or_else(|| self.default_violation_slot());
        if slot == 0 || slot > exps.len() {
            return Err(Error::Config(format!(
                "violation slot {slot} is outside 1..={}",
                exps.len()
            )));
        }
        let threshold = exps.as_slice()[slot - 1];
        let raised = self.violation_exponent.unwrap_or(Exponent::Infinite);
        if threshold.is_infinite() || (!raised.is_infinite() && raised.value() <= threshold.value())
        {
            return Err(Error::Config(format!(
                "nothing to falsify: slot {slot} has threshold {threshold}, requested {raised}"
            )));
        }
        Ok(exps.with_slot(slot, raised))
    }
}
