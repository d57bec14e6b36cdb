//! Command-line front end.
//!
//! Each subcommand reads the config file given by `--config` (if any), then
//! applies `--<key> <value>` overrides for every config key.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Arg, ArgMatches, Args, Command, FromArgMatches, Parser, Subcommand};
use edgecache_core::forecaster::{read_model, write_model, LstmModel};
use edgecache_core::placement::{build_schedule, indicators_to_probabilities, IndicatorSchedule};
use edgecache_core::RequestMatrix;

use crate::config::{ExperimentConfig, ForecasterKind, KEYS};
use crate::experiment::{self, ResultRow};

/// `--<key> <value>` flags for every config key, in command-line order of
/// declaration in [`KEYS`].
#[derive(Debug, Clone, Default)]
pub struct Overrides(pub Vec<(String, String)>);

impl FromArgMatches for Overrides {
    fn from_arg_matches(m: &ArgMatches) -> Result<Self, clap::Error> {
        Ok(Self(
            KEYS.iter()
                .filter_map(|(k, _)| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
                .collect(),
        ))
    }

    fn update_from_arg_matches(&mut self, m: &ArgMatches) -> Result<(), clap::Error> {
        *self = Self::from_arg_matches(m)?;
        Ok(())
    }
}

impl Args for Overrides {
    fn augment_args(cmd: Command) -> Command {
        let defaults = ExperimentConfig::default();
        KEYS.iter().fold(cmd, |cmd, (key, help)| {
            let default = defaults.get(key).unwrap_or_default();
            cmd.arg(
                Arg::new(*key)
                    .long(*key)
                    .value_name("VALUE")
                    .help(format!("{help} [default: {default}]"))
                    .help_heading("Configuration keys"),
            )
        })
    }

    fn augment_args_for_update(cmd: Command) -> Command {
        Self::augment_args(cmd)
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

impl Common {
    pub fn load(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p).with_context(|| format!("reading config {}", p.display()))?,
            None => ExperimentConfig::default(),
        };
        for (k, v) in &self.overrides.0 {
            cfg.set(k, v).with_context(|| format!("--{k}"))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ForecastInput {
    #[command(flatten)]
    pub common: Common,
    /// Forecast CSV (default: <output_dir>/forecast.csv).
    #[arg(long)]
    pub forecast: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "edgecache",
    version,
    about = "Preference-forecasting collaborative edge caching experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Generate a synthetic request dataset (history plus horizon).
    Gen(Common),
    /// Train one LSTM per user on the history slots.
    Train(Common),
    /// Forecast the horizon slots and write the forecast CSV.
    Forecast(Common),
    /// Build the placement schedule of each configured scheme.
    Place(ForecastInput),
    /// Price the schedules written by `place`.
    Evaluate(ForecastInput),
    /// Run the full pipeline over all seeds and sweep points.
    Sweep(Common),
    /// Compare dynamic homogeneous caching against the static baseline.
    CompareStatic(Common),
}

fn out_path(cfg: &ExperimentConfig, name: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(&cfg.output_dir).with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    Ok(cfg.output_dir.join(name))
}

fn create(path: &Path) -> anyhow::Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<RequestMatrix> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(RequestMatrix::read_csv(file)
        .with_context(|| format!("reading {}", path.display()))?
        .0)
}

fn models_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir.join("models")
}

fn model_path(cfg: &ExperimentConfig, user: usize) -> PathBuf {
    models_dir(cfg).join(format!("user_{user}.txt"))
}

fn schedule_path(cfg: &ExperimentConfig, scheme: &str) -> PathBuf {
    cfg.output_dir.join(format!("schedule_{scheme}.csv"))
}

fn forecast_path(cfg: &ExperimentConfig, given: &Option<PathBuf>) -> PathBuf {
    given.clone().unwrap_or_else(|| cfg.output_dir.join("forecast.csv"))
}

fn gen(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let data = experiment::load_or_generate(cfg, cfg.seed)?;
    let path = out_path(cfg, "dataset.csv")?;
    let comments = [format!(
        "gamma={}..{} requests={}..{} amplitudes={} noise_mean={} noise_var={}",
        cfg.gamma_min,
        cfg.gamma_max,
        cfg.req_min,
        cfg.req_max,
        cfg.get("amplitudes").unwrap_or_default(),
        cfg.noise_mean,
        cfg.noise_var
    )];
    data.write_csv(create(&path)?, cfg.seed, &comments)?;
    println!(
        "wrote {} ({} slots, {} users, {} contents)",
        path.display(),
        data.slots(),
        data.users(),
        data.contents()
    );
    Ok(())
}

fn train(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let data = experiment::load_or_generate(cfg, cfg.seed)?;
    let history = experiment::history(cfg, &data)?;
    let trained = experiment::train_models(cfg, &history, cfg.seed)?;
    fs::create_dir_all(models_dir(cfg))?;
    let mut report = csv::Writer::from_path(out_path(cfg, "train_report.csv")?)?;
    report.write_record(["user", "epochs_run", "best_epoch", "best_val_loss"])?;
    for (u, (model, r)) in trained.iter().enumerate() {
        write_model(model, create(&model_path(cfg, u))?)?;
        report.serialize((u, r.epochs_run, r.best_epoch, r.best_val_loss))?;
    }
    report.flush()?;
    println!("trained {} models into {}", trained.len(), models_dir(cfg).display());
    Ok(())
}

fn load_models(cfg: &ExperimentConfig, users: usize) -> anyhow::Result<Option<Vec<LstmModel>>> {
    if !models_dir(cfg).is_dir() {
        return Ok(None);
    }
    (0..users)
        .map(|u| {
            let p = model_path(cfg, u);
            let f = File::open(&p).with_context(|| format!("opening {}", p.display()))?;
            read_model(f).with_context(|| format!("reading {}", p.display()))
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .map(Some)
}

fn forecast(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let data = experiment::load_or_generate(cfg, cfg.seed)?;
    let history = experiment::history(cfg, &data)?;
    let fc = match (cfg.forecaster, load_models(cfg, history.users())?) {
        (ForecasterKind::Lstm, Some(models)) => experiment::forecast_with_models(cfg, &models, &history)?,
        _ => experiment::make_forecast(cfg, &history, cfg.seed)?,
    };
    let path = out_path(cfg, "forecast.csv")?;
    fc.write_csv(
        create(&path)?,
        cfg.seed,
        &[format!("forecaster={}", cfg.get("forecaster").unwrap_or_default())],
    )?;
    println!(
        "wrote {} (slots {}..{})",
        path.display(),
        fc.start_slot(),
        fc.start_slot() + fc.slots()
    );
    Ok(())
}

fn place(cfg: &ExperimentConfig, forecast: &Option<PathBuf>) -> anyhow::Result<()> {
    let fc = read_matrix(&forecast_path(cfg, forecast))?;
    let data = experiment::load_or_generate(cfg, cfg.seed)?;
    let history = experiment::history(cfg, &data)?;
    let pred = edgecache_core::preference::profiles(&fc)?;
    let topo = cfg.topology()?;
    for &scheme in &cfg.schemes {
        let sched = build_schedule(scheme, &pred, &history, &topo)?;
        let path = schedule_path(cfg, scheme.as_str());
        fs::create_dir_all(&cfg.output_dir)?;
        sched.write_csv(create(&path)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn evaluate(cfg: &ExperimentConfig, forecast: &Option<PathBuf>) -> anyhow::Result<()> {
    let fc = read_matrix(&forecast_path(cfg, forecast))?;
    let data = experiment::load_or_generate(cfg, cfg.seed)?;
    let history = experiment::history(cfg, &data)?;
    let prep = experiment::prepare_from(cfg, cfg.seed, &data, history, fc)?;
    let topo = cfg.topology()?;
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        let path = schedule_path(cfg, scheme.as_str());
        let file = File::open(&path).with_context(|| format!("opening {} (run `place` first)", path.display()))?;
        let sched = IndicatorSchedule::read_csv(file).with_context(|| format!("reading {}", path.display()))?;
        sched.check_capacity(&topo)?;
        let cost = indicators_to_probabilities(&sched, &topo)?.cost(&prep.rho, &topo, &cfg.costs())?;
        println!("{scheme}: {cost:.4}");
        rows.push(ResultRow {
            scheme: scheme.to_string(),
            c_b: topo.bs_capacity(),
            c_d: topo.user_capacity(),
            cost,
            seed: cfg.seed,
            wall_time: 0.0,
        });
    }
    experiment::write_results(&out_path(cfg, "evaluation.csv")?, &rows)
}

fn sweep(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let rows = experiment::run_experiment(cfg)?;
    let summary = experiment::summarize(&rows);
    experiment::write_results(&out_path(cfg, "results.csv")?, &rows)?;
    experiment::write_summary(&out_path(cfg, "summary.csv")?, &summary)?;
    experiment::write_plot(&out_path(cfg, "plot.csv")?, cfg, &summary)?;
    fs::write(out_path(cfg, "config.txt")?, cfg.to_text())?;
    for s in &summary {
        println!(
            "{:<12} c_b={:<3} c_d={:<3} cost={:.4} +- {:.4}",
            s.scheme, s.c_b, s.c_d, s.mean_cost, s.stderr
        );
    }
    Ok(())
}

fn compare_static(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let cmp = experiment::compare_static_dynamic(cfg)?;
    experiment::write_comparison(&out_path(cfg, "comparison.csv")?, &cmp)?;
    let mut plot = csv::Writer::from_path(out_path(cfg, "plot_comparison.csv")?)?;
    plot.write_record(["x", "scheme", "cost"])?;
    for (scheme, costs) in &cmp.columns {
        for (&(cb, cd), c) in cmp.points.iter().zip(costs) {
            plot.serialize((experiment::sweep_x(cfg, cb, cd), scheme.as_str(), c))?;
        }
    }
    plot.flush()?;
    let diff = cmp.difference();
    for (i, (cb, cd)) in cmp.points.iter().enumerate() {
        let cells: Vec<String> = cmp.columns.iter().map(|(s, v)| format!("{s}={:.4}", v[i])).collect();
        let d = diff
            .as_ref()
            .map_or(String::new(), |d| format!(" difference={:.4}", d[i]));
        println!("c_b={cb:<3} c_d={cd:<3} {}{d}", cells.join(" "));
    }
    Ok(())
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Cmd::Gen(c) => gen(&c.load()?),
        Cmd::Train(c) => train(&c.load()?),
        Cmd::Forecast(c) => forecast(&c.load()?),
        Cmd::Place(f) => place(&f.common.load()?, &f.forecast),
        Cmd::Evaluate(f) => evaluate(&f.common.load()?, &f.forecast),
        Cmd::Sweep(c) => sweep(&c.load()?),
        Cmd::CompareStatic(c) => compare_static(&c.load()?),
    }
}
