//! Experiment config schema and validation.
//!
//! A config is a single JSON document. Builtin systems, measures, and
//! models are referenced by name; systems, potentials, and measures can
//! also be written inline. Words are strings of symbol digits, `0`-`9`
//! then `a`-`v` for alphabets past ten.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use shiftpress::builtins;
use shiftpress::counting::{SpMode, SpPoint};
use shiftpress::cover::CoverTarget;
use shiftpress::{MeasureSpec, Potential, Sided, Subshift, Word};

use crate::tasks::TaskPlan;
use crate::{invalid, CliError};

const EXHAUSTIVE_LEN_CAP: usize = 24;
const ORBIT_LEN_CAP: usize = 1_000_000;
const BALL_EXPONENT_CAP: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Pressure,
    Sp,
    Cp,
    Entropy,
    Pointwise,
    Dimension,
    Hyperbolic,
    LemmaCheck,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Pressure => "pressure",
            Task::Sp => "sp",
            Task::Cp => "cp",
            Task::Entropy => "entropy",
            Task::Pointwise => "pointwise",
            Task::Dimension => "dimension",
            Task::Hyperbolic => "hyperbolic",
            Task::LemmaCheck => "lemma-check",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default)]
    pub system: Option<SystemSpec>,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub measure: Option<MeasureRef>,
    #[serde(default)]
    pub measures: Option<Vec<MeasureRef>>,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub mode: Option<SpModeSpec>,
    #[serde(default)]
    pub target: Option<TargetSpec>,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Named(String),
    Inline {
        alphabet: usize,
        #[serde(default)]
        allowed: Option<Vec<String>>,
        sided: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    Constant { constant: f64 },
    Table { depth: usize, values: BTreeMap<String, f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureRef {
    Named(String),
    Inline(MeasureInline),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureInline {
    Bernoulli(Vec<f64>),
    Markov {
        rows: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<MeasureRef>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpModeSpec {
    Named(String),
    Hamming { hamming: HammingSpec },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HammingSpec {
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub cylinders: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Schedule {
    /// Scale lengths, one result row per entry for the estimator tasks.
    pub n: Option<Vec<usize>>,
    /// Ball radius exponent: eps = 2^-m.
    pub m: Option<u32>,
    /// Weak-star radius at the final scale (widened at earlier scales).
    pub theta: Option<f64>,
    /// Empirical window depth (L).
    pub depth: Option<usize>,
    /// Deepest ball length for cover tasks (D).
    pub max_depth: Option<usize>,
    /// Cylinder depths for the pointwise dimension scan.
    pub depths: Option<Vec<usize>>,
    /// Sampled word length for the pointwise dimension scan.
    pub orbit_len: Option<usize>,
    /// Alphabet sizes for the counting bound sweep.
    pub k: Option<Vec<usize>>,
    /// Largest word length for the counting bound sweep.
    pub n_max: Option<usize>,
    /// Grid step for the counting bound sweep.
    pub delta_step: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub prefix: String,
}

pub fn load(path: &Path) -> Result<(serde_json::Value, ExperimentConfig), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("config: not valid json: {e}")))?;
    let deserializer = value.clone();
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(deserializer)
        .map_err(|e| CliError::Validation(format!("config {}: {}", e.path(), e.inner())))?;
    Ok((value, cfg))
}

fn parse_symbol(c: char) -> Result<u8, String> {
    match c {
        '0'..='9' => Ok(c as u8 - b'0'),
        'a'..='v' => Ok(c as u8 - b'a' + 10),
        other => Err(format!("`{other}` is not a symbol digit")),
    }
}

fn parse_word(key: &str, text: &str) -> Result<Vec<u8>, CliError> {
    text.chars()
        .map(|c| parse_symbol(c).map_err(|e| invalid(key, format!("word `{text}`: {e}"))))
        .collect()
}

impl SystemSpec {
    fn build(&self) -> Result<Subshift, CliError> {
        match self {
            SystemSpec::Named(name) => builtins::system(name).map_err(|e| invalid("system", e)),
            SystemSpec::Inline {
                alphabet,
                allowed,
                sided,
            } => {
                let sided = match sided.as_str() {
                    "one-sided" => Sided::OneSided,
                    "two-sided" => Sided::TwoSided,
                    other => {
                        return Err(invalid(
                            "system.sided",
                            format!("`{other}` is neither `one-sided` nor `two-sided`"),
                        ))
                    }
                };
                match allowed {
                    None => Ok(Subshift::full(*alphabet, sided)),
                    Some(pairs) => {
                        let mut matrix = vec![vec![0u8; *alphabet]; *alphabet];
                        for text in pairs {
                            let w = parse_word("system.allowed", text)?;
                            if w.len() != 2 {
                                return Err(invalid(
                                    "system.allowed",
                                    format!("`{text}` is not a two symbol word"),
                                ));
                            }
                            let (a, b) = (w[0] as usize, w[1] as usize);
                            if a >= *alphabet || b >= *alphabet {
                                return Err(invalid(
                                    "system.allowed",
                                    format!("`{text}` uses a symbol outside the alphabet"),
                                ));
                            }
                            matrix[a][b] = 1;
                        }
                        Subshift::new(*alphabet, &matrix, sided)
                            .map_err(|e| invalid("system", e))
                    }
                }
            }
        }
    }
}

impl PotentialSpec {
    fn build(&self, shift: &Subshift) -> Result<Potential, CliError> {
        match self {
            PotentialSpec::Constant { constant } => {
                Potential::constant(shift, *constant).map_err(|e| invalid("potential", e))
            }
            PotentialSpec::Table { depth, values } => {
                let mut pairs = Vec::with_capacity(values.len());
                for (text, &v) in values {
                    let w = parse_word("potential.values", text)?;
                    if w.len() != *depth {
                        return Err(invalid(
                            "potential.values",
                            format!("window `{text}` does not have depth {depth}"),
                        ));
                    }
                    pairs.push((w, v));
                }
                Potential::from_pairs(shift, *depth, &pairs).map_err(|e| invalid("potential", e))
            }
        }
    }
}

impl MeasureRef {
    fn build(&self) -> Result<MeasureSpec, CliError> {
        match self {
            MeasureRef::Named(name) => builtins::measure(name).map_err(|e| invalid("measure", e)),
            MeasureRef::Inline(inline) => inline.build(),
        }
    }

    /// Short label for result rows.
    pub fn label(&self) -> String {
        match self {
            MeasureRef::Named(name) => name.clone(),
            MeasureRef::Inline(MeasureInline::Bernoulli(probs)) => {
                let parts: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
                format!("bernoulli({})", parts.join(","))
            }
            MeasureRef::Inline(MeasureInline::Markov { rows, .. }) => {
                format!("markov({} states)", rows.len())
            }
            MeasureRef::Inline(MeasureInline::Mixture { components, .. }) => {
                let parts: Vec<String> = components.iter().map(|c| c.label()).collect();
                format!("mixture({})", parts.join(";"))
            }
        }
    }
}

impl MeasureInline {
    fn build(&self) -> Result<MeasureSpec, CliError> {
        match self {
            MeasureInline::Bernoulli(probs) => {
                MeasureSpec::bernoulli(probs.clone()).map_err(|e| invalid("measure", e))
            }
            MeasureInline::Markov { rows, stationary } => {
                MeasureSpec::markov(rows.clone(), stationary.clone())
                    .map_err(|e| invalid("measure", e))
            }
            MeasureInline::Mixture {
                weights,
                components,
            } => {
                let built: Result<Vec<MeasureSpec>, CliError> =
                    components.iter().map(|c| c.build()).collect();
                MeasureSpec::mixture(weights.clone(), built?).map_err(|e| invalid("measure", e))
            }
        }
    }
}

impl SpModeSpec {
    fn to_mode(&self) -> Result<SpMode, CliError> {
        match self {
            SpModeSpec::Named(name) if name == "n-eps" => Ok(SpMode::NEps),
            SpModeSpec::Named(other) => Err(invalid(
                "mode",
                format!("`{other}` is not a separation mode (use `n-eps` or `hamming`)"),
            )),
            SpModeSpec::Hamming { hamming } => Ok(SpMode::Hamming {
                delta: hamming.delta,
            }),
        }
    }
}

struct Checked<'a> {
    cfg: &'a ExperimentConfig,
}

impl<'a> Checked<'a> {
    fn system(&self) -> Result<Subshift, CliError> {
        self.cfg
            .system
            .as_ref()
            .ok_or_else(|| invalid("system", "required for this task"))?
            .build()
    }

    fn system_or_full(&self, alphabet: usize) -> Result<Subshift, CliError> {
        match &self.cfg.system {
            Some(spec) => spec.build(),
            None => Ok(Subshift::full(alphabet, Sided::OneSided)),
        }
    }

    fn potential(&self, shift: &Subshift) -> Result<Potential, CliError> {
        self.cfg
            .potential
            .as_ref()
            .ok_or_else(|| invalid("potential", "required for this task"))?
            .build(shift)
    }

    fn potential_or_zero(&self, shift: &Subshift) -> Result<Potential, CliError> {
        match &self.cfg.potential {
            Some(spec) => spec.build(shift),
            None => Potential::constant(shift, 0.0).map_err(|e| invalid("potential", e)),
        }
    }

    fn measure(&self) -> Result<(String, MeasureSpec), CliError> {
        let m = self
            .cfg
            .measure
            .as_ref()
            .ok_or_else(|| invalid("measure", "required for this task"))?;
        Ok((m.label(), m.build()?))
    }

    fn measure_list(&self) -> Result<Vec<(String, MeasureSpec)>, CliError> {
        let refs: Vec<&MeasureRef> = match (&self.cfg.measure, &self.cfg.measures) {
            (Some(single), None) => vec![single],
            (None, Some(list)) if !list.is_empty() => list.iter().collect(),
            (None, Some(_)) => return Err(invalid("measures", "must not be empty")),
            (None, None) => {
                return Err(invalid("measures", "required for this task"))
            }
            (Some(_), Some(_)) => {
                return Err(invalid("measures", "give either `measure` or `measures`, not both"))
            }
        };
        refs.iter()
            .map(|m| Ok((m.label(), m.build()?)))
            .collect()
    }

    fn eps(&self) -> Result<f64, CliError> {
        let m = self.cfg.schedule.m.unwrap_or(0);
        if m > BALL_EXPONENT_CAP {
            return Err(invalid(
                "schedule.m",
                format!("must be at most {BALL_EXPONENT_CAP}"),
            ));
        }
        Ok(0.5f64.powi(m as i32))
    }

    fn scales(&self, cap: usize) -> Result<Vec<usize>, CliError> {
        let ns = self
            .cfg
            .schedule
            .n
            .as_ref()
            .ok_or_else(|| invalid("schedule.n", "required for this task"))?;
        if ns.is_empty() {
            return Err(invalid("schedule.n", "must not be empty"));
        }
        for &n in ns {
            if n == 0 || n > cap {
                return Err(invalid(
                    "schedule.n",
                    format!("scale {n} outside [1, {cap}]"),
                ));
            }
        }
        Ok(ns.clone())
    }

    fn seeds(&self) -> Result<Vec<u64>, CliError> {
        if self.cfg.seeds.is_empty() {
            return Err(invalid("seeds", "required for this task"));
        }
        Ok(self.cfg.seeds.clone())
    }

    fn target(&self, shift: &Subshift) -> Result<CoverTarget, CliError> {
        match &self.cfg.target {
            None => Ok(CoverTarget::whole()),
            Some(spec) => {
                let words: Result<Vec<Word>, CliError> = spec
                    .cylinders
                    .iter()
                    .map(|text| parse_word("target.cylinders", text).map(Word::new))
                    .collect();
                CoverTarget::cylinders(shift, words?).map_err(|e| invalid("target.cylinders", e))
            }
        }
    }
}

/// Validates the config and assembles the core objects it names. Every
/// failure says which key is at fault.
pub fn plan(cfg: &ExperimentConfig) -> Result<TaskPlan, CliError> {
    let c = Checked { cfg };
    match cfg.task {
        Task::Pressure | Task::Cp => {
            let shift = c.system()?;
            let phi = c.potential(&shift)?;
            let eps = c.eps()?;
            let scales = c.scales(EXHAUSTIVE_LEN_CAP)?;
            let top = *scales.iter().max().unwrap();
            let max_depth = cfg.schedule.max_depth.unwrap_or(top);
            if max_depth < top || max_depth > EXHAUSTIVE_LEN_CAP {
                return Err(invalid(
                    "schedule.max_depth",
                    format!("must lie in [{top}, {EXHAUSTIVE_LEN_CAP}]"),
                ));
            }
            let m = shiftpress::ball_depth(eps).map_err(|e| invalid("schedule.m", e))?;
            if shift.count_words(max_depth + m) > 1 << 24 {
                return Err(invalid(
                    "schedule.max_depth",
                    "word enumeration would exceed the budget",
                ));
            }
            let target = c.target(&shift)?;
            if cfg.task == Task::Pressure {
                if cfg.target.is_some() {
                    return Err(invalid(
                        "target",
                        "the pressure task always covers the whole space; use the cp task",
                    ));
                }
                Ok(TaskPlan::Pressure {
                    shift,
                    phi,
                    scales,
                    eps,
                    max_depth,
                })
            } else {
                Ok(TaskPlan::Cp {
                    shift,
                    phi,
                    target,
                    scales,
                    eps,
                })
            }
        }
        Task::Sp => {
            let shift = c.system()?;
            let phi = c.potential(&shift)?;
            let (center_label, center) = c.measure()?;
            center.validate_on(&shift).map_err(|e| invalid("measure", e))?;
            let eps = c.eps()?;
            let scales = c.scales(EXHAUSTIVE_LEN_CAP)?;
            let theta = cfg
                .schedule
                .theta
                .ok_or_else(|| invalid("schedule.theta", "required for the sp task"))?;
            if !(theta > 0.0) {
                return Err(invalid("schedule.theta", "must be positive"));
            }
            let depth = cfg.schedule.depth.unwrap_or(1);
            let mode = match &cfg.mode {
                None => SpMode::NEps,
                Some(spec) => spec.to_mode()?,
            };
            let m = shiftpress::ball_depth(eps).map_err(|e| invalid("schedule.m", e))?;
            let last = *scales.last().unwrap() as f64;
            let mut points = Vec::with_capacity(scales.len());
            for &n in &scales {
                if depth > n {
                    return Err(invalid(
                        "schedule.depth",
                        format!("empirical depth {depth} exceeds scale {n}"),
                    ));
                }
                if shift.count_words(n + m + phi.depth() - 1) > 1 << 22 {
                    return Err(invalid(
                        "schedule.n",
                        format!("scale {n} would exceed the enumeration budget"),
                    ));
                }
                points.push(SpPoint {
                    n,
                    eps,
                    theta: theta * (last / n as f64).sqrt(),
                });
            }
            Ok(TaskPlan::Sp {
                shift,
                phi,
                center_label,
                center,
                depth,
                points,
                mode,
            })
        }
        Task::Entropy => {
            let (label, mu) = c.measure()?;
            let shift = c.system_or_full(mu.alphabet())?;
            mu.validate_on(&shift).map_err(|e| invalid("measure", e))?;
            let phi = c.potential_or_zero(&shift)?;
            let eps = c.eps()?;
            let scales = c.scales(ORBIT_LEN_CAP)?;
            if scales.len() != 1 {
                return Err(invalid("schedule.n", "the entropy task takes exactly one scale"));
            }
            Ok(TaskPlan::Entropy {
                shift,
                mu_label: label,
                mu,
                phi,
                n: scales[0],
                eps,
                seeds: c.seeds()?,
            })
        }
        Task::Pointwise => {
            let model_name = cfg
                .model
                .as_ref()
                .ok_or_else(|| invalid("model", "required for this task"))?;
            let model = builtins::repeller(model_name).map_err(|e| invalid("model", e))?;
            let (label, mu) = c.measure()?;
            mu.validate_on(model.base()).map_err(|e| invalid("measure", e))?;
            let depths = cfg
                .schedule
                .depths
                .clone()
                .ok_or_else(|| invalid("schedule.depths", "required for this task"))?;
            if depths.is_empty() || depths.contains(&0) {
                return Err(invalid("schedule.depths", "must be positive and non-empty"));
            }
            let deepest = *depths.iter().max().unwrap();
            let needed = deepest + model.geometry().depth() + 1;
            let orbit_len = cfg.schedule.orbit_len.unwrap_or(needed + 7);
            if orbit_len < needed || orbit_len > ORBIT_LEN_CAP {
                return Err(invalid(
                    "schedule.orbit_len",
                    format!("must lie in [{needed}, {ORBIT_LEN_CAP}]"),
                ));
            }
            Ok(TaskPlan::Pointwise {
                model_name: model_name.clone(),
                model,
                mu_label: label,
                mu,
                depths,
                orbit_len,
                seeds: c.seeds()?,
            })
        }
        Task::Dimension => {
            let model_name = cfg
                .model
                .as_ref()
                .ok_or_else(|| invalid("model", "required for this task"))?;
            let model = builtins::repeller(model_name).map_err(|e| invalid("model", e))?;
            let measures = c.measure_list()?;
            for (label, mu) in &measures {
                mu.validate_on(model.base())
                    .map_err(|e| invalid("measures", format!("{label}: {e}")))?;
            }
            Ok(TaskPlan::Dimension {
                model_name: model_name.clone(),
                model,
                measures,
            })
        }
        Task::Hyperbolic => {
            let model_name = cfg
                .model
                .as_ref()
                .ok_or_else(|| invalid("model", "required for this task"))?;
            let model = builtins::hyperbolic(model_name).map_err(|e| invalid("model", e))?;
            let measures = c.measure_list()?;
            for (label, mu) in &measures {
                mu.validate_on(model.base())
                    .map_err(|e| invalid("measures", format!("{label}: {e}")))?;
            }
            Ok(TaskPlan::Hyperbolic {
                model_name: model_name.clone(),
                model,
                measures,
            })
        }
        Task::LemmaCheck => {
            let ks = cfg.schedule.k.clone().unwrap_or_else(|| vec![2, 3, 4]);
            if ks.is_empty() || ks.iter().any(|&k| !(2..=8).contains(&k)) {
                return Err(invalid("schedule.k", "alphabet sizes must lie in [2, 8]"));
            }
            let n_max = cfg.schedule.n_max.unwrap_or(12);
            if n_max == 0 || n_max > EXHAUSTIVE_LEN_CAP {
                return Err(invalid(
                    "schedule.n_max",
                    format!("must lie in [1, {EXHAUSTIVE_LEN_CAP}]"),
                ));
            }
            let delta_step = cfg.schedule.delta_step.unwrap_or(0.05);
            if !(delta_step > 0.0 && delta_step < 1.0) {
                return Err(invalid("schedule.delta_step", "must lie in (0, 1)"));
            }
            Ok(TaskPlan::LemmaCheck {
                ks,
                n_max,
                delta_step,
            })
        }
    }
}
