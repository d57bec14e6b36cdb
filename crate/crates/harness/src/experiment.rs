//! End-to-end pipeline: data, per-user forecasts, placements and costs.

use std::path::Path;
use std::time::Instant;

use anyhow::{ensure, Context};
use edgecache_core::forecaster::{
    assemble_forecast, baseline_forecast, rollout, train_with_report, LstmModel, TrainReport,
};
use edgecache_core::placement::{build_schedule, indicators_to_probabilities, SchemeId};
use edgecache_core::preference::{aggregate_preference, profiles, AggregatedPreference, PreferenceProfile};
use edgecache_core::synthgen::generate;
use edgecache_core::RequestMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ForecasterKind, PreferenceMode, SweepAxis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: String,
    pub c_b: usize,
    pub c_d: usize,
    pub cost: f64,
    pub seed: u64,
    pub wall_time: f64,
}

/// Dataset for one seed: loaded from `cfg.dataset` or generated with
/// `history_slots + horizon` slots.
pub fn load_or_generate(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<RequestMatrix> {
    let topo = cfg.topology()?;
    let data = match &cfg.dataset {
        Some(path) => {
            let file = std::fs::File::open(path).with_context(|| format!("opening dataset {}", path.display()))?;
            let (m, _) = RequestMatrix::read_csv(file).with_context(|| format!("reading {}", path.display()))?;
            m
        }
        None => generate(&topo, &cfg.synth()?, cfg.history_slots + cfg.horizon, seed)?,
    };
    ensure!(
        data.users() == topo.num_users() && data.contents() == topo.num_contents(),
        "dataset is {} users x {} contents, config expects {} x {}",
        data.users(),
        data.contents(),
        topo.num_users(),
        topo.num_contents()
    );
    ensure!(
        data.slots() >= cfg.history_slots,
        "dataset has {} slots, history needs {}",
        data.slots(),
        cfg.history_slots
    );
    Ok(data)
}

/// First `history_slots` slots.
pub fn history(cfg: &ExperimentConfig, data: &RequestMatrix) -> anyhow::Result<RequestMatrix> {
    Ok(data.slice_slots(0, cfg.history_slots)?)
}

/// Trains one model per user on the history, in parallel.
pub fn train_models(
    cfg: &ExperimentConfig,
    history: &RequestMatrix,
    seed: u64,
) -> anyhow::Result<Vec<(LstmModel, TrainReport)>> {
    (0..history.users())
        .into_par_iter()
        .map(|u| {
            train_with_report(&history.user_series(u), &cfg.train_config(seed, u))
                .with_context(|| format!("training user {u}"))
        })
        .collect()
}

/// Rolls every user's model out over the horizon.
pub fn forecast_with_models(
    cfg: &ExperimentConfig,
    models: &[LstmModel],
    history: &RequestMatrix,
) -> anyhow::Result<RequestMatrix> {
    ensure!(
        models.len() == history.users(),
        "{} models for {} users",
        models.len(),
        history.users()
    );
    let per_user = models
        .par_iter()
        .enumerate()
        .map(|(u, m)| rollout(m, &history.user_series(u), cfg.horizon))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble_forecast(&per_user, history.start_slot() + history.slots())?)
}

/// Forecast of the `horizon` slots after the history, using the configured
/// forecaster.
pub fn make_forecast(cfg: &ExperimentConfig, history: &RequestMatrix, seed: u64) -> anyhow::Result<RequestMatrix> {
    match cfg.forecaster {
        ForecasterKind::Lstm => {
            let models: Vec<LstmModel> = train_models(cfg, history, seed)?.into_iter().map(|(m, _)| m).collect();
            forecast_with_models(cfg, &models, history)
        }
        ForecasterKind::Baseline(kind) => Ok(baseline_forecast(kind, history, cfg.horizon)?),
    }
}

/// Cost weights: from the forecast, or in oracle mode from the actual future.
pub fn cost_weights(
    cfg: &ExperimentConfig,
    pred: &[PreferenceProfile],
    data: &RequestMatrix,
) -> anyhow::Result<AggregatedPreference> {
    match cfg.preference_mode {
        PreferenceMode::Forecast => Ok(aggregate_preference(pred)?),
        PreferenceMode::Oracle => {
            let end = cfg.history_slots + cfg.horizon;
            ensure!(
                data.slots() >= end,
                "oracle mode needs {end} slots of data, dataset has {}",
                data.slots()
            );
            Ok(aggregate_preference(&profiles(
                &data.slice_slots(cfg.history_slots, end)?,
            )?)?)
        }
    }
}

/// Everything placement needs for one seed.
pub struct Prepared {
    pub seed: u64,
    pub history: RequestMatrix,
    pub forecast: RequestMatrix,
    pub pred: Vec<PreferenceProfile>,
    pub rho: AggregatedPreference,
}

pub fn prepare(cfg: &ExperimentConfig, seed: u64) -> anyhow::Result<Prepared> {
    let data = load_or_generate(cfg, seed)?;
    let history = history(cfg, &data)?;
    let forecast = make_forecast(cfg, &history, seed)?;
    prepare_from(cfg, seed, &data, history, forecast)
}

pub fn prepare_from(
    cfg: &ExperimentConfig,
    seed: u64,
    data: &RequestMatrix,
    history: RequestMatrix,
    forecast: RequestMatrix,
) -> anyhow::Result<Prepared> {
    let pred = profiles(&forecast)?;
    let rho = cost_weights(cfg, &pred, data)?;
    Ok(Prepared {
        seed,
        history,
        forecast,
        pred,
        rho,
    })
}

/// Places and prices every configured scheme at every sweep point.
pub fn evaluate_prepared(cfg: &ExperimentConfig, prep: &Prepared) -> anyhow::Result<Vec<ResultRow>> {
    let base = cfg.topology()?;
    let costs = cfg.costs();
    let points = cfg.sweep_points();
    let per_point: Vec<Vec<ResultRow>> = points
        .par_iter()
        .map(|&(cb, cd)| {
            let topo = base.with_capacities(cb, cd)?;
            cfg.schemes
                .iter()
                .map(|&scheme| {
                    let start = Instant::now();
                    let sched = build_schedule(scheme, &prep.pred, &prep.history, &topo)?;
                    let cost = indicators_to_probabilities(&sched, &topo)?.cost(&prep.rho, &topo, &costs)?;
                    let wall_time = if cfg.timing { start.elapsed().as_secs_f64() } else { 0.0 };
                    Ok(ResultRow {
                        scheme: scheme.to_string(),
                        c_b: cb,
                        c_d: cd,
                        cost,
                        seed: prep.seed,
                        wall_time,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

/// Full sweep over all seeds. Rows are ordered by seed, sweep point, then
/// scheme as listed in the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ResultRow>> {
    cfg.validate()?;
    if cfg.schemes.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for seed in cfg.seeds() {
        let start = Instant::now();
        let prep = prepare(cfg, seed)?;
        let prep_time = start.elapsed().as_secs_f64();
        let mut seed_rows = evaluate_prepared(cfg, &prep)?;
        if cfg.timing {
            // Forecasting is shared by all rows of the seed; spread it evenly.
            let share = prep_time / seed_rows.len() as f64;
            seed_rows.iter_mut().for_each(|r| r.wall_time += share);
        }
        rows.extend(seed_rows);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scheme: String,
    pub c_b: usize,
    pub c_d: usize,
    pub mean_cost: f64,
    pub stderr: f64,
    pub seeds: usize,
}

/// Mean and standard error over seeds, keeping first-appearance order.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut groups: Vec<((String, usize, usize), Vec<f64>)> = Vec::new();
    for r in rows {
        let key = (r.scheme.clone(), r.c_b, r.c_d);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r.cost),
            None => groups.push((key, vec![r.cost])),
        }
    }
    groups
        .into_iter()
        .map(|((scheme, c_b, c_d), costs)| {
            let n = costs.len() as f64;
            let mean = costs.iter().sum::<f64>() / n;
            let stderr = if costs.len() > 1 {
                (costs.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (n - 1.0)).sqrt() / n.sqrt()
            } else {
                0.0
            };
            SummaryRow {
                scheme,
                c_b,
                c_d,
                mean_cost: mean,
                stderr,
                seeds: costs.len(),
            }
        })
        .collect()
}

/// Static versus dynamic costs per sweep point, averaged over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub points: Vec<(usize, usize)>,
    pub columns: Vec<(SchemeId, Vec<f64>)>,
}

impl Comparison {
    /// `static - dynamic` per point, when both columns are present.
    pub fn difference(&self) -> Option<Vec<f64>> {
        let col = |id| self.columns.iter().find(|(s, _)| *s == id).map(|(_, v)| v);
        let (stat, dynamic) = (col(SchemeId::StaticZipf)?, col(SchemeId::Homogeneous)?);
        Some(stat.iter().zip(dynamic).map(|(s, d)| s - d).collect())
    }
}

/// Runs the homogeneous and static schemes requested in `cfg` (both when
/// neither is listed) on identical data and forecasts.
pub fn compare_static_dynamic(cfg: &ExperimentConfig) -> anyhow::Result<Comparison> {
    let mut schemes: Vec<SchemeId> = [SchemeId::Homogeneous, SchemeId::StaticZipf]
        .into_iter()
        .filter(|s| cfg.schemes.contains(s))
        .collect();
    if schemes.is_empty() {
        schemes = vec![SchemeId::Homogeneous, SchemeId::StaticZipf];
    }
    let cfg = ExperimentConfig {
        schemes: schemes.clone(),
        ..cfg.clone()
    };
    let summary = summarize(&run_experiment(&cfg)?);
    let points = cfg.sweep_points();
    let columns = schemes
        .iter()
        .map(|s| {
            let costs = points
                .iter()
                .map(|&(cb, cd)| {
                    summary
                        .iter()
                        .find(|r| r.scheme == s.as_str() && r.c_b == cb && r.c_d == cd)
                        .map(|r| r.mean_cost)
                        .context("missing comparison cell")
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            Ok((*s, costs))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(Comparison { points, columns })
}

/// Swept capacity of a row, for plot files.
pub fn sweep_x(cfg: &ExperimentConfig, c_b: usize, c_d: usize) -> usize {
    match cfg.sweep {
        SweepAxis::UserCapacity => c_d,
        SweepAxis::BsCapacity | SweepAxis::None => c_b,
    }
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    if rows.is_empty() {
        w.write_record(["scheme", "c_b", "c_d", "cost", "seed", "wall_time"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> anyhow::Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec.with_context(|| format!("reading {}", path.display()))?);
    }
    Ok(rows)
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    if rows.is_empty() {
        w.write_record(["scheme", "c_b", "c_d", "mean_cost", "stderr", "seeds"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `x,scheme,cost` rows for external plotting.
pub fn write_plot(path: &Path, cfg: &ExperimentConfig, rows: &[SummaryRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["x", "scheme", "cost"])?;
    for r in rows {
        w.serialize((sweep_x(cfg, r.c_b, r.c_d), &r.scheme, r.mean_cost))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison(path: &Path, cmp: &Comparison) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let diff = cmp.difference();
    let mut header = vec!["c_b".to_string(), "c_d".to_string()];
    header.extend(cmp.columns.iter().map(|(s, _)| s.to_string()));
    if diff.is_some() {
        header.push("difference".into());
    }
    w.write_record(&header)?;
    for (i, (cb, cd)) in cmp.points.iter().enumerate() {
        let mut rec = vec![cb.to_string(), cd.to_string()];
        rec.extend(cmp.columns.iter().map(|(_, v)| v[i].to_string()));
        if let Some(d) = &diff {
            rec.push(d[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
