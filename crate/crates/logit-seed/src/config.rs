//! Experiment configuration: a flat `key = value` text format, command-line
//! overrides, task-specific defaults, and a content hash for provenance.
//!
//! Every run is a pure function of its config, so the hash (which excludes
//! only the output directory) identifies an experiment's outputs exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::init::InitStrategy;
use crate::optim::{OptimKind, OptimizerConfig};

/// The experiment families the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Four-Gaussian XOR classification with a small feedforward net.
    Xor,
    /// MNIST with a single hidden layer.
    MnistShallow,
    /// MNIST with six hidden layers (the saturation stress test).
    MnistDeep,
    /// Recurrent copy-memory task with delay `t_delay`.
    CopyMemory,
    /// No training: emit the entropy-bound surface and stationarity grid.
    Analyze,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Xor => "xor",
            Task::MnistShallow => "mnist-shallow",
            Task::MnistDeep => "mnist-deep",
            Task::CopyMemory => "copy-memory",
            Task::Analyze => "analyze",
        }
    }

    pub fn all() -> [Task; 5] {
        [
            Task::Xor,
            Task::MnistShallow,
            Task::MnistDeep,
            Task::CopyMemory,
            Task::Analyze,
        ]
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "xor" => Ok(Task::Xor),
            "mnist-shallow" => Ok(Task::MnistShallow),
            "mnist-deep" => Ok(Task::MnistDeep),
            "copy-memory" => Ok(Task::CopyMemory),
            "analyze" => Ok(Task::Analyze),
            other => Err(Error::Config(format!(
                "unknown task '{other}' (expected xor, mnist-shallow, mnist-deep, copy-memory or analyze)"
            ))),
        }
    }
}

/// Everything a run needs. Build with [`ExperimentConfig::defaults`], a
/// config file via [`ExperimentConfig::from_text`], or both plus overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub task: Task,
    pub strategy: InitStrategy,
    pub optimizer: OptimizerConfig,
    /// Number of gradient updates.
    pub iterations: usize,
    pub batch_size: usize,
    /// One full training run per seed.
    pub seeds: Vec<u64>,
    /// Probability of dropping a hidden activation; `None` disables dropout.
    pub dropout_p: Option<f64>,
    /// Telemetry is recorded every this many iterations (plus first/last).
    pub telemetry_every: usize,
    pub output_dir: PathBuf,
    /// Directory holding the MNIST IDX files (MNIST tasks only).
    pub data_dir: Option<PathBuf>,
    /// Hidden layer widths (feedforward) or the recurrent state width
    /// (copy-memory, first entry).
    pub hidden: Vec<usize>,
    /// Copy-memory delay T.
    pub t_delay: usize,
    /// Training-set size: XOR sample count, MNIST training subset
    /// (0 = all), or number of copy-memory sequences.
    pub samples: usize,
    /// Held-out evaluation size for generated tasks.
    pub eval_samples: usize,
    /// Seed for dataset generation, shared by all training seeds so every
    /// run sees the same data.
    pub data_seed: u64,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each task.
    pub fn defaults(task: Task) -> Self {
        let base = Self {
            task,
            strategy: InitStrategy::RandomEp,
            optimizer: OptimizerConfig::momentum_sgd(0.05, 0.9),
            iterations: 2000,
            batch_size: 50,
            seeds: vec![0, 1, 2, 3],
            dropout_p: None,
            telemetry_every: 100,
            output_dir: PathBuf::from("runs"),
            data_dir: None,
            hidden: vec![8],
            t_delay: 50,
            samples: 200,
            eval_samples: 200,
            data_seed: 42,
        };
        match task {
            // 200 samples, batch 50: 8000 updates = 2000 epochs.
            Task::Xor => Self {
                iterations: 8000,
                ..base
            },
            Task::MnistShallow => Self {
                optimizer: OptimizerConfig::momentum_sgd(0.05, 0.9),
                iterations: 20_000,
                hidden: vec![100],
                samples: 5000,
                eval_samples: 0,
                ..base
            },
            Task::MnistDeep => Self {
                optimizer: OptimizerConfig::momentum_sgd(0.05, 0.9),
                iterations: 20_000,
                hidden: vec![64; 6],
                samples: 5000,
                eval_samples: 0,
                ..base
            },
            Task::CopyMemory => Self {
                optimizer: OptimizerConfig::adam(0.001).with_clip(1.0),
                iterations: 10_000,
                batch_size: 16,
                hidden: vec![64],
                samples: 2048,
                eval_samples: 512,
                ..base
            },
            Task::Analyze => base,
        }
    }

    /// Parse a flat `key = value` file (''#'' comments and blank lines
    /// allowed). The `task` key, if present, selects the defaults the other
    /// keys override.
    ///
    /// # Errors
    ///
    /// [`Error::Config`] naming the offending line, key or value.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let task = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "task")
            .map(|(_, v)| v.parse::<Task>())
            .transpose()?
            .unwrap_or(Task::Xor);
        let mut config = Self::defaults(task);
        for (key, value) in &pairs {
            config.apply(key, value)?;
        }
        Ok(config)
    }

    /// Set one field from its textual key. Used for both file keys and
    /// command-line overrides.
    ///
    /// # Errors
    ///
    /// [`Error::Config`] for unknown keys or unparseable values.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.trim().parse().map_err(|_| {
                Error::Config(format!("key '{key}': cannot parse '{value}'"))
            })
        }
        fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
            value
                .split(',')
                .map(|part| num(key, part))
                .collect::<Result<Vec<T>>>()
        }
        fn optional(value: &str) -> Option<&str> {
            let v = value.trim();
            (!v.eq_ignore_ascii_case("none") && !v.is_empty()).then_some(v)
        }

        match key {
            "task" => self.task = value.parse()?,
            "strategy" | "init" => self.strategy = value.parse()?,
            "optimizer" => {
                self.optimizer.kind = match value.trim().to_ascii_lowercase().as_str() {
                    "sgd" | "momentum-sgd" => OptimKind::MomentumSgd,
                    "adam" => OptimKind::Adam,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown optimizer '{other}' (expected sgd or adam)"
                        )))
                    }
                }
            }
            "learning_rate" => self.optimizer.learning_rate = num(key, value)?,
            "momentum" => self.optimizer.momentum = num(key, value)?,
            "beta1" => self.optimizer.beta1 = num(key, value)?,
            "beta2" => self.optimizer.beta2 = num(key, value)?,
            "epsilon" => self.optimizer.epsilon = num(key, value)?,
            "clip" => {
                self.optimizer.clip_threshold = optional(value)
                    .map(|v| num::<f64>(key, v))
                    .transpose()?
            }
            "iterations" => self.iterations = num(key, value)?,
            "batch_size" => self.batch_size = num(key, value)?,
            "seeds" => self.seeds = list(key, value)?,
            "dropout_p" => {
                self.dropout_p = optional(value).map(|v| num::<f64>(key, v)).transpose()?
            }
            "telemetry_every" => self.telemetry_every = num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "data_dir" => self.data_dir = optional(value).map(PathBuf::from),
            "hidden" => self.hidden = list(key, value)?,
            "t_delay" => self.t_delay = num(key, value)?,
            "samples" => self.samples = num(key, value)?,
            "eval_samples" => self.eval_samples = num(key, value)?,
            "data_seed" => self.data_seed = num(key, value)?,
            other => {
                return Err(Error::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Check field ranges and task/strategy compatibility.
    ///
    /// # Errors
    ///
    /// [`Error::Config`] describing the first violation.
    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be non-empty".into()));
        }
        if self.telemetry_every == 0 {
            return Err(Error::Config("telemetry_every must be at least 1".into()));
        }
        if let Some(p) = self.dropout_p {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Config(format!(
                    "dropout_p must lie in [0, 1), got {p}"
                )));
            }
        }
        if self.task != Task::Analyze && self.hidden.is_empty() {
            return Err(Error::Config("hidden widths must be non-empty".into()));
        }
        if self.hidden.iter().any(|&h| h == 0) {
            return Err(Error::Config("hidden widths must be positive".into()));
        }
        if self.t_delay == 0 {
            return Err(Error::Config("t_delay must be at least 1".into()));
        }
        match self.task {
            Task::CopyMemory => {
                if matches!(self.strategy, InitStrategy::Lsuv { .. }) {
                    return Err(Error::Config(
                        "lsuv calibrates layer-by-layer on a feedforward batch and is \
                         not defined for the recurrent task; choose another strategy"
                            .into(),
                    ));
                }
                if self.samples == 0 || self.eval_samples == 0 {
                    return Err(Error::Config(
                        "copy-memory needs samples and eval_samples >= 1".into(),
                    ));
                }
            }
            Task::Xor => {
                if self.samples < 4 || self.samples % 4 != 0 {
                    return Err(Error::Config(format!(
                        "xor needs samples >= 4 divisible by 4, got {}",
                        self.samples
                    )));
                }
            }
            Task::MnistShallow | Task::MnistDeep => {
                if self.data_dir.is_none() {
                    return Err(Error::Config(
                        "MNIST tasks need data_dir pointing at the IDX files".into(),
                    ));
                }
            }
            Task::Analyze => {}
        }
        Ok(())
    }

    /// Canonical `key=value` lines of every field except `output_dir`,
    /// sorted by key — the preimage of [`ExperimentConfig::config_hash`].
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut map = BTreeMap::new();
        map.insert("task", self.task.name().to_string());
        map.insert("strategy", self.strategy.name().to_string());
        let kind = match self.optimizer.kind {
            OptimKind::MomentumSgd => "sgd",
            OptimKind::Adam => "adam",
        };
        map.insert("optimizer", kind.to_string());
        map.insert("learning_rate", self.optimizer.learning_rate.to_string());
        map.insert("momentum", self.optimizer.momentum.to_string());
        map.insert("beta1", self.optimizer.beta1.to_string());
        map.insert("beta2", self.optimizer.beta2.to_string());
        map.insert("epsilon", self.optimizer.epsilon.to_string());
        map.insert(
            "clip",
            self.optimizer
                .clip_threshold
                .map_or("none".to_string(), |c| c.to_string()),
        );
        map.insert("iterations", self.iterations.to_string());
        map.insert("batch_size", self.batch_size.to_string());
        map.insert(
            "seeds",
            self.seeds
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert(
            "dropout_p",
            self.dropout_p.map_or("none".to_string(), |p| p.to_string()),
        );
        map.insert("telemetry_every", self.telemetry_every.to_string());
        map.insert(
            "data_dir",
            self.data_dir
                .as_ref()
                .map_or("none".to_string(), |p| p.display().to_string()),
        );
        map.insert(
            "hidden",
            self.hidden
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        map.insert("t_delay", self.t_delay.to_string());
        map.insert("samples", self.samples.to_string());
        map.insert("eval_samples", self.eval_samples.to_string());
        map.insert("data_seed", self.data_seed.to_string());
        map.into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect()
    }

    /// Hex digest identifying this configuration (independent of where the
    /// outputs are written).
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for line in self.canonical_lines() {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}
