//! TOML run configuration.
//!
//! ```toml
//! seed = 7
//! shots = 20000          # or "exact"
//! repetitions = 10
//! mitigation = true
//! target = "both"        # "system" | "environment" | "both"
//! swap = "three_cx"      # or "two_cx"
//!
//! [grid]
//! min = 0.0
//! max = 3.0
//! points = 16
//!
//! [noise]                # omit for a noiseless run
//! p1 = 0.001
//! p2 = 0.01
//! readout = { flip_0_to_1 = 0.02, flip_1_to_0 = 0.03 }
//!
//! [[sets]]
//! alpha = "1/sqrt(2)"    # or lambda = 1.5707963267948966
//! qubits = [0, 1, 2, 3, 4]
//! ```
//!
//! A file without `[[sets]]` takes `alpha` or `lambda` at the top level and
//! runs one set on qubits 0-4. Unknown keys are rejected.

use std::path::Path;

use esdsim_core::protocol::uniform_grid;
use esdsim_core::{
    ExperimentConfig, InitialState, NoiseModel, QubitLayout, Shots, SwapStyle, TargetSelection,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Number(f64),
    Text(String),
}

impl AlphaSpec {
    /// Accepts a decimal, `1/sqrt(k)`, `sqrt(k)` or `sqrt(a/b)`.
    pub fn value(&self) -> Result<f64> {
        match self {
            AlphaSpec::Number(a) => Ok(*a),
            AlphaSpec::Text(s) => parse_alpha(s),
        }
    }
}

impl std::fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaSpec::Number(a) => write!(f, "{a}"),
            AlphaSpec::Text(s) => f.write_str(s),
        }
    }
}

pub fn parse_alpha(spec: &str) -> Result<f64> {
    let bad = || {
        CliError::Config(format!(
            "bad alpha {spec:?}: expected e.g. \"1/sqrt(3)\" or 0.5"
        ))
    };
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let number = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite());
    let sqrt_arg = |t: &str| -> Option<f64> {
        let inner = t.strip_prefix("sqrt(")?.strip_suffix(')')?;
        let v = match inner.split_once('/') {
            Some((a, b)) => number(a)? / number(b)?,
            None => number(inner)?,
        };
        (v >= 0.0 && v.is_finite()).then(|| v.sqrt())
    };
    let value = if let Some(v) = number(&s) {
        v
    } else if let Some((num, den)) = s.split_once('/').filter(|(n, _)| !n.contains('(')) {
        number(num).ok_or_else(bad)? / sqrt_arg(den).ok_or_else(bad)?
    } else {
        sqrt_arg(&s).ok_or_else(bad)?
    };
    if !(value > 0.0 && value <= 1.0) {
        return Err(CliError::Config(format!(
            "alpha {spec:?} = {value} is outside (0, 1]"
        )));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShotsSpec {
    Count(u64),
    Mode(String),
}

impl ShotsSpec {
    fn resolve(&self) -> Result<Shots> {
        match self {
            ShotsSpec::Count(0) => Err(CliError::Config("shots must be at least 1".into())),
            ShotsSpec::Count(n) => Ok(Shots::Count(*n)),
            ShotsSpec::Mode(m) if m == "exact" => Ok(Shots::Exact),
            ShotsSpec::Mode(m) => Err(CliError::Config(format!(
                "shots: expected a positive integer or \"exact\", got {m:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 3.0,
            points: 16,
        }
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(CliError::Config("grid must be non-empty".into()));
        }
        if !self.min.is_finite() || self.min < 0.0 || !self.max.is_finite() {
            return Err(CliError::Config(format!(
                "grid: min must be >= 0, got {}",
                self.min
            )));
        }
        if self.points > 1 && self.max <= self.min {
            return Err(CliError::Config("grid: max must exceed min".into()));
        }
        Ok(uniform_grid(self.min, self.max, self.points))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    System,
    Environment,
    #[default]
    Both,
}

impl From<TargetSpec> for TargetSelection {
    fn from(t: TargetSpec) -> Self {
        match t {
            TargetSpec::System => TargetSelection::System,
            TargetSpec::Environment => TargetSelection::Environment,
            TargetSpec::Both => TargetSelection::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapSpec {
    #[default]
    ThreeCx,
    TwoCx,
}

impl From<SwapSpec> for SwapStyle {
    fn from(s: SwapSpec) -> Self {
        match s {
            SwapSpec::ThreeCx => SwapStyle::ThreeCx,
            SwapSpec::TwoCx => SwapStyle::TwoCx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub alpha: Option<AlphaSpec>,
    pub lambda: Option<f64>,
    pub qubits: Option<[usize; 5]>,
    pub noise: Option<NoiseModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub seed: u64,
    pub shots: ShotsSpec,
    pub repetitions: usize,
    #[serde(default)]
    pub mitigation: bool,
    #[serde(default)]
    pub target: TargetSpec,
    #[serde(default)]
    pub swap: SwapSpec,
    #[serde(default)]
    pub grid: GridSpec,
    pub noise: Option<NoiseModel>,
    pub alpha: Option<AlphaSpec>,
    pub lambda: Option<f64>,
    #[serde(default)]
    pub sets: Vec<SetSpec>,
}

/// One resolved set, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedSet {
    /// `alpha` as written, or `lambda=<value>`.
    pub label: String,
    pub config: ExperimentConfig,
}

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Expands the file into one validated experiment per set.
    pub fn resolve(&self) -> Result<Vec<ResolvedSet>> {
        let grid = self.grid.values()?;
        let shots = self.shots.resolve()?;
        if self.repetitions == 0 {
            return Err(CliError::Config("repetitions must be at least 1".into()));
        }
        let top = SetSpec {
            alpha: self.alpha.clone(),
            lambda: self.lambda,
            qubits: None,
            noise: None,
        };
        let sets: Vec<&SetSpec> = if self.sets.is_empty() {
            vec![&top]
        } else {
            if self.alpha.is_some() || self.lambda.is_some() {
                return Err(CliError::Config(
                    "alpha/lambda go inside [[sets]] when sets are given".into(),
                ));
            }
            self.sets.iter().collect()
        };

        sets.into_iter()
            .enumerate()
            .map(|(i, set)| {
                let (label, init) = match (&set.alpha, set.lambda) {
                    (Some(a), None) => (a.to_string(), InitialState::from_alpha(a.value()?)?),
                    (None, Some(l)) => (format!("lambda={l}"), InitialState::from_lambda(l)?),
                    _ => {
                        return Err(CliError::Config(format!(
                            "set {}: give exactly one of alpha or lambda",
                            i + 1
                        )))
                    }
                };
                let layout = match set.qubits {
                    Some(q) => QubitLayout::new(q)
                        .map_err(|e| CliError::Config(format!("set {}: qubits: {e}", i + 1)))?,
                    None if self.sets.len() > 1 => QubitLayout::standard_sets()
                        .get(i)
                        .copied()
                        .ok_or_else(|| {
                            CliError::Config(format!("set {}: qubits must be given", i + 1))
                        })?,
                    None => QubitLayout::default(),
                };
                let config = ExperimentConfig {
                    init,
                    grid: grid.clone(),
                    shots,
                    repetitions: self.repetitions,
                    seed: self.seed,
                    set_index: i as u64,
                    noise: set.noise.clone().or_else(|| self.noise.clone()),
                    mitigation: self.mitigation,
                    layout,
                    target: self.target.into(),
                    swap: self.swap.into(),
                };
                config
                    .validate()
                    .map_err(|e| CliError::Config(format!("set {}: {e}", i + 1)))?;
                Ok(ResolvedSet { label, config })
            })
            .collect()
    }
}
