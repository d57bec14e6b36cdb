//! Flat `key = value` experiment configuration.
//!
//! Every key in [`KEYS`] may appear in a config file and as a `--key value`
//! CLI flag; flags are applied after the file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use edgecache_core::cachemodel::{validate_cost_params, CommCosts, CostParams};
use edgecache_core::forecaster::{BaselineKind, TrainConfig};
use edgecache_core::placement::SchemeId;
use edgecache_core::synthgen::{CorrelationParams, RequestRange, SkewnessRange, SynthConfig};
use edgecache_core::{build_topology, Error, Result, Topology, TopologyConfig};

/// Recognised keys with a one-line description, in documentation order.
pub const KEYS: &[(&str, &str)] = &[
    ("num_bs", "base stations in the cluster (B)"),
    ("users_per_bs", "users per cell (U_c)"),
    ("num_contents", "catalogue size (F)"),
    ("bs_capacity", "BS cache size C_b, used when not swept"),
    ("user_capacity", "user cache size C_d, used when not swept"),
    ("gamma_min", "lower Zipf exponent bound"),
    ("gamma_max", "upper Zipf exponent bound"),
    ("req_min", "fewest slot-1 requests per user"),
    ("req_max", "most slot-1 requests per user"),
    ("amplitudes", "comma-separated sinusoid amplitudes A_1..A_n"),
    ("noise_mean", "mean of the additive Gaussian noise"),
    ("noise_var", "variance of the additive Gaussian noise"),
    ("hidden_dim", "LSTM hidden size"),
    ("epochs", "maximum training epochs"),
    ("learning_rate", "Adam step size"),
    ("clip_norm", "global gradient-norm clip"),
    ("train_frac", "training share of the history"),
    ("val_frac", "validation share of the history"),
    ("test_frac", "test share of the history"),
    ("patience", "epochs without validation gain before stopping"),
    ("history_slots", "observed history length N"),
    ("horizon", "optimisation horizon N_opt"),
    ("storage_cost", "storage cost Lambda_stor"),
    ("comm_d", "D2D communication cost"),
    ("comm_b0", "serving-BS communication cost"),
    ("comm_bs", "other-cluster-BS communication cost"),
    ("comm_cloud", "cloud communication cost"),
    ("schemes", "comma-separated placement schemes"),
    ("sweep", "swept capacity: none, cb or cd"),
    ("sweep_min", "first swept capacity"),
    ("sweep_max", "last swept capacity"),
    ("seed", "base seed; run i uses seed + i"),
    ("num_seeds", "independent runs per sweep point"),
    ("output_dir", "directory for generated files"),
    ("dataset", "request CSV to load instead of generating (empty: generate)"),
    (
        "preference_mode",
        "cost weights from the forecast or the actual future (forecast|oracle)",
    ),
    ("forecaster", "lstm, last-value, slot-mean or static-zipf"),
    ("timing", "record wall-clock time per result row (true|false)"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    None,
    BsCapacity,
    UserCapacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreferenceMode {
    Forecast,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecasterKind {
    Lstm,
    Baseline(BaselineKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub num_bs: usize,
    pub users_per_bs: usize,
    pub num_contents: usize,
    pub bs_capacity: usize,
    pub user_capacity: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub req_min: u32,
    pub req_max: u32,
    pub amplitudes: Vec<f64>,
    pub noise_mean: f64,
    pub noise_var: f64,
    pub hidden_dim: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub clip_norm: f64,
    pub train_frac: f64,
    pub val_frac: f64,
    pub test_frac: f64,
    pub patience: usize,
    pub history_slots: usize,
    pub horizon: usize,
    pub storage_cost: f64,
    pub comm_d: f64,
    pub comm_b0: f64,
    pub comm_bs: f64,
    pub comm_cloud: f64,
    pub schemes: Vec<SchemeId>,
    pub sweep: SweepAxis,
    pub sweep_min: usize,
    pub sweep_max: usize,
    pub seed: u64,
    pub num_seeds: usize,
    pub output_dir: PathBuf,
    pub dataset: Option<PathBuf>,
    pub preference_mode: PreferenceMode,
    pub forecaster: ForecasterKind,
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            num_bs: 3,
            users_per_bs: 15,
            num_contents: 225,
            bs_capacity: 12,
            user_capacity: 4,
            gamma_min: 0.5,
            gamma_max: 1.5,
            req_min: 50,
            req_max: 200,
            amplitudes: vec![1.0, 1.0, 1.0],
            noise_mean: 0.0,
            noise_var: 1.0,
            hidden_dim: 64,
            epochs: 200,
            learning_rate: 1e-2,
            clip_norm: 5.0,
            train_frac: 0.70,
            val_frac: 0.15,
            test_frac: 0.15,
            patience: 20,
            history_slots: 250,
            horizon: 50,
            storage_cost: 2000.0,
            comm_d: 100.0,
            comm_b0: 500.0,
            comm_bs: 1000.0,
            comm_cloud: 5000.0,
            schemes: vec![SchemeId::BsFirst, SchemeId::UserFirst, SchemeId::Overlapping],
            sweep: SweepAxis::BsCapacity,
            sweep_min: 4,
            sweep_max: 14,
            seed: 1,
            num_seeds: 5,
            output_dir: PathBuf::from("out"),
            dataset: None,
            preference_mode: PreferenceMode::Forecast,
            forecaster: ForecasterKind::Lstm,
            timing: false,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::InvalidParameter(format!("{key}: cannot parse `{value}`: {e}")))
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "num_bs" => self.num_bs = num(key, v)?,
            "users_per_bs" => self.users_per_bs = num(key, v)?,
            "num_contents" => self.num_contents = num(key, v)?,
            "bs_capacity" => self.bs_capacity = num(key, v)?,
            "user_capacity" => self.user_capacity = num(key, v)?,
            "gamma_min" => self.gamma_min = num(key, v)?,
            "gamma_max" => self.gamma_max = num(key, v)?,
            "req_min" => self.req_min = num(key, v)?,
            "req_max" => self.req_max = num(key, v)?,
            "amplitudes" => self.amplitudes = list(key, v)?,
            "noise_mean" => self.noise_mean = num(key, v)?,
            "noise_var" => self.noise_var = num(key, v)?,
            "hidden_dim" => self.hidden_dim = num(key, v)?,
            "epochs" => self.epochs = num(key, v)?,
            "learning_rate" => self.learning_rate = num(key, v)?,
            "clip_norm" => self.clip_norm = num(key, v)?,
            "train_frac" => self.train_frac = num(key, v)?,
            "val_frac" => self.val_frac = num(key, v)?,
            "test_frac" => self.test_frac = num(key, v)?,
            "patience" => self.patience = num(key, v)?,
            "history_slots" => self.history_slots = num(key, v)?,
            "horizon" => self.horizon = num(key, v)?,
            "storage_cost" => self.storage_cost = num(key, v)?,
            "comm_d" => self.comm_d = num(key, v)?,
            "comm_b0" => self.comm_b0 = num(key, v)?,
            "comm_bs" => self.comm_bs = num(key, v)?,
            "comm_cloud" => self.comm_cloud = num(key, v)?,
            "schemes" => self.schemes = list(key, v)?,
            "sweep" => {
                self.sweep = match v {
                    "none" => SweepAxis::None,
                    "cb" => SweepAxis::BsCapacity,
                    "cd" => SweepAxis::UserCapacity,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "sweep: expected none, cb or cd, got `{v}`"
                        )))
                    }
                }
            }
            "sweep_min" => self.sweep_min = num(key, v)?,
            "sweep_max" => self.sweep_max = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "num_seeds" => self.num_seeds = num(key, v)?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            "dataset" => self.dataset = (!v.is_empty()).then(|| PathBuf::from(v)),
            "preference_mode" => {
                self.preference_mode = match v {
                    "forecast" => PreferenceMode::Forecast,
                    "oracle" => PreferenceMode::Oracle,
                    _ => return Err(Error::InvalidParameter(format!("preference_mode: unknown `{v}`"))),
                }
            }
            "forecaster" => {
                self.forecaster = match v {
                    "lstm" => ForecasterKind::Lstm,
                    other => ForecasterKind::Baseline(other.parse()?),
                }
            }
            "timing" => self.timing = num(key, v)?,
            _ => return Err(Error::InvalidParameter(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Current value of `key` in the same syntax `set` accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "num_bs" => self.num_bs.to_string(),
            "users_per_bs" => self.users_per_bs.to_string(),
            "num_contents" => self.num_contents.to_string(),
            "bs_capacity" => self.bs_capacity.to_string(),
            "user_capacity" => self.user_capacity.to_string(),
            "gamma_min" => self.gamma_min.to_string(),
            "gamma_max" => self.gamma_max.to_string(),
            "req_min" => self.req_min.to_string(),
            "req_max" => self.req_max.to_string(),
            "amplitudes" => join(&self.amplitudes),
            "noise_mean" => self.noise_mean.to_string(),
            "noise_var" => self.noise_var.to_string(),
            "hidden_dim" => self.hidden_dim.to_string(),
            "epochs" => self.epochs.to_string(),
            "learning_rate" => self.learning_rate.to_string(),
            "clip_norm" => self.clip_norm.to_string(),
            "train_frac" => self.train_frac.to_string(),
            "val_frac" => self.val_frac.to_string(),
            "test_frac" => self.test_frac.to_string(),
            "patience" => self.patience.to_string(),
            "history_slots" => self.history_slots.to_string(),
            "horizon" => self.horizon.to_string(),
            "storage_cost" => self.storage_cost.to_string(),
            "comm_d" => self.comm_d.to_string(),
            "comm_b0" => self.comm_b0.to_string(),
            "comm_bs" => self.comm_bs.to_string(),
            "comm_cloud" => self.comm_cloud.to_string(),
            "schemes" => join(&self.schemes),
            "sweep" => match self.sweep {
                SweepAxis::None => "none",
                SweepAxis::BsCapacity => "cb",
                SweepAxis::UserCapacity => "cd",
            }
            .to_string(),
            "sweep_min" => self.sweep_min.to_string(),
            "sweep_max" => self.sweep_max.to_string(),
            "seed" => self.seed.to_string(),
            "num_seeds" => self.num_seeds.to_string(),
            "output_dir" => self.output_dir.display().to_string(),
            "dataset" => self.dataset.as_ref().map_or(String::new(), |p| p.display().to_string()),
            "preference_mode" => match self.preference_mode {
                PreferenceMode::Forecast => "forecast",
                PreferenceMode::Oracle => "oracle",
            }
            .to_string(),
            "forecaster" => match self.forecaster {
                ForecasterKind::Lstm => "lstm",
                ForecasterKind::Baseline(BaselineKind::LastValue) => "last-value",
                ForecasterKind::Baseline(BaselineKind::SlotMean) => "slot-mean",
                ForecasterKind::Baseline(BaselineKind::StaticZipf) => "static-zipf",
            }
            .to_string(),
            "timing" => self.timing.to_string(),
            _ => return None,
        })
    }

    /// Applies a config file body on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i as u64 + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key.trim(), value).map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    /// Full config in file syntax; parsing it back gives an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, help) in KEYS {
            let _ = writeln!(out, "# {help}\n{key} = {}", self.get(key).unwrap_or_default());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.topology()?;
        self.synth()?;
        self.train_config(0, 0).validate()?;
        validate_cost_params(&self.costs()).map_err(|v| Error::InvalidParameter(format!("cost parameters: {v}")))?;
        if self.history_slots < 4 {
            return Err(Error::InvalidParameter("history_slots must be at least 4".into()));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if let Some((i, s)) = self
            .schemes
            .iter()
            .enumerate()
            .find(|(i, s)| self.schemes[..*i].contains(s))
        {
            return Err(Error::InvalidParameter(format!(
                "scheme {s} listed twice (position {})",
                i + 1
            )));
        }
        if self.num_seeds == 0 {
            return Err(Error::InvalidParameter("num_seeds must be at least 1".into()));
        }
        if self.sweep != SweepAxis::None && (self.sweep_min > self.sweep_max || self.sweep_max > self.num_contents) {
            return Err(Error::InvalidParameter(format!(
                "sweep range {}..={} must lie within [0, {}]",
                self.sweep_min, self.sweep_max, self.num_contents
            )));
        }
        Ok(())
    }

    pub fn topology(&self) -> Result<Topology> {
        build_topology(TopologyConfig {
            num_bs: self.num_bs,
            users_per_bs: self.users_per_bs,
            num_contents: self.num_contents,
            bs_capacity: self.bs_capacity,
            user_capacity: self.user_capacity,
        })
    }

    pub fn synth(&self) -> Result<SynthConfig> {
        Ok(SynthConfig {
            skewness: SkewnessRange::new(self.gamma_min, self.gamma_max)?,
            requests: RequestRange::new(self.req_min, self.req_max)?,
            correlation: CorrelationParams::new(self.amplitudes.clone(), self.noise_mean, self.noise_var)?,
        })
    }

    pub fn train_config(&self, seed: u64, user: usize) -> TrainConfig {
        TrainConfig {
            hidden_dim: self.hidden_dim,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            clip_norm: self.clip_norm,
            train_frac: self.train_frac,
            val_frac: self.val_frac,
            test_frac: self.test_frac,
            patience: self.patience,
            seed,
            stream: user as u64,
        }
    }

    pub fn costs(&self) -> CostParams {
        CostParams::unchecked(
            self.storage_cost,
            CommCosts {
                d2d: self.comm_d,
                serving_bs: self.comm_b0,
                cluster_bs: self.comm_bs,
                cloud: self.comm_cloud,
            },
        )
    }

    /// `(c_b, c_d)` for every sweep point.
    pub fn sweep_points(&self) -> Vec<(usize, usize)> {
        match self.sweep {
            SweepAxis::None => vec![(self.bs_capacity, self.user_capacity)],
            SweepAxis::BsCapacity => (self.sweep_min..=self.sweep_max)
                .map(|cb| (cb, self.user_capacity))
                .collect(),
            SweepAxis::UserCapacity => (self.sweep_min..=self.sweep_max)
                .map(|cd| (self.bs_capacity, cd))
                .collect(),
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.num_seeds as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.sweep_points().len(), 11);
        let c = cfg.costs();
        assert_eq!(
            [c.phi_d2d(), c.phi_serving_bs(), c.phi_cluster_bs(), c.phi_cloud()],
            [2100.0, 2500.0, 3000.0, 7000.0]
        );
    }

    #[test]
    fn every_key_round_trips() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("schemes", "homogeneous, static-zipf").unwrap();
        cfg.set("dataset", "data.csv").unwrap();
        cfg.set("forecaster", "slot-mean").unwrap();
        cfg.set("learning_rate", "0.003").unwrap();
        let mut back = ExperimentConfig::default();
        back.apply_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        for (key, _) in KEYS {
            let v = cfg.get(key).unwrap();
            cfg.set(key, &v).unwrap();
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply_text("# comment\nnum_bs = 2\n\nbogus\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = cfg.apply_text("epochs = many").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(cfg.set("nope", "1").is_err());
    }

    #[test]
    fn trailing_comments_are_ignored() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("horizon = 7   # short run\n").unwrap();
        assert_eq!(cfg.horizon, 7);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = |k: &str, v: &str| {
            let mut c = ExperimentConfig::default();
            c.set(k, v).unwrap();
            c.validate().is_err()
        };
        assert!(bad("history_slots", "3"));
        assert!(bad("horizon", "0"));
        assert!(bad("sweep_max", "300"));
        assert!(bad("comm_d", "600"));
        assert!(bad("train_frac", "0.9"));
    }
}
