//! Subcommand implementations. Each resolves its configuration, writes its
//! outputs under one directory and prints a one-line summary.

use std::path::{Path, PathBuf};
use std::time::Instant;

use addgpr::datasets::{split, synth_coupled, Dataset, SynthSpec};
use addgpr::gpr::{rmse, rmse_of, train};
use addgpr::kernels::AdditiveKernelSpec;
use addgpr::neuralize::{build, NeuralAdditiveModel, PruneMode, SavedNeuralModel};
use anyhow::{bail, ensure, Context, Result};
use log::info;
use serde_json::{json, Value};

use crate::config::{default_out_dir, RunConfig};
use crate::output::{with_outputs, Outputs};

type Split = (Dataset<f64>, Dataset<f64>);

fn load_split(cfg: &RunConfig) -> Result<Split> {
    let data = cfg.load_dataset()?;
    info!("dataset {}: {} points in {} dimensions", data.name, data.len(), data.dim());
    Ok(split(&data, cfg.split)?)
}

fn dataset_json(d: &Dataset<f64>, test_points: usize) -> Value {
    json!({
        "name": d.name.trim_end_matches("_train"),
        "dim": d.dim(),
        "points": d.len() + test_points,
        "units": d.units,
    })
}

fn finite(label: &str, v: f64) -> Result<f64> {
    ensure!(v.is_finite(), "{label} is not finite");
    Ok(v)
}

fn model_rmse(model: &NeuralAdditiveModel<f64>, d: &Dataset<f64>) -> Result<f64> {
    Ok(rmse_of(model.predict_rows(d.inputs().view())?.view(), d.targets().view())?)
}

fn units_suffix(cfg: &RunConfig) -> String {
    cfg.units.as_deref().map(|u| format!(" {u}")).unwrap_or_default()
}

/// Timing is kept out of `metrics.json` so repeated runs give identical metrics.
fn write_timing(out: &Outputs, started: Instant) -> Result<f64> {
    let seconds = started.elapsed().as_secs_f64();
    out.write_json("timing.json", &json!({ "seconds": seconds }))?;
    Ok(seconds)
}

pub fn gen_data(spec: &SynthSpec, output: Option<&Path>, out_dir: Option<&Path>) -> Result<PathBuf> {
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(default_out_dir);
    with_outputs(&dir, |out| {
        let data = synth_coupled::<f64>(spec)?;
        let path = match output {
            Some(p) => p.to_path_buf(),
            None => out.path(&format!("{}.csv", data.name)),
        };
        data.save_csv(&path).with_context(|| format!("writing {}", path.display()))?;
        println!("gen-data: {} points in {} dimensions -> {}", data.len(), data.dim(), path.display());
        Ok(path)
    })
}

pub fn train_cmd(cfg: &RunConfig) -> Result<Value> {
    with_outputs(&cfg.out_dir, |out| {
        let started = Instant::now();
        let (tr, te) = load_split(cfg)?;
        let model = build(tr.inputs().view(), tr.targets().view(), &cfg.neural_config())?;
        let train_rmse = finite("train rmse", model_rmse(&model, &tr)?)?;
        let test_rmse = finite("test rmse", model_rmse(&model, &te)?)?;
        SavedNeuralModel::new(model.clone()).save(out.path("model.json"))?;
        let metrics = json!({
            "command": "train",
            "config": cfg.to_json(),
            "dataset": dataset_json(&tr, te.len()),
            "n_neurons": model.n_neurons(),
            "n_train": tr.len(),
            "n_test": te.len(),
            "delta_used": model.core().delta(),
            "train_rmse": train_rmse,
            "test_rmse": test_rmse,
        });
        out.write_json("metrics.json", &metrics)?;
        let secs = write_timing(out, started)?;
        let u = units_suffix(cfg);
        println!(
            "train: N={} M={} train rmse {train_rmse:.6e}{u}, test rmse {test_rmse:.6e}{u} ({secs:.2}s) -> {}",
            model.n_neurons(),
            tr.len(),
            out.dir().display()
        );
        Ok(metrics)
    })
}

pub fn order_scan(cfg: &RunConfig, orders: &[usize], train_sizes: &[usize]) -> Result<Value> {
    with_outputs(&cfg.out_dir, |out| {
        let started = Instant::now();
        ensure!(!orders.is_empty() && !train_sizes.is_empty(), "order scan needs orders and training sizes");
        let data = cfg.load_dataset()?;
        if let Some(&d) = orders.iter().find(|&&d| d == 0 || d > data.dim()) {
            bail!("order {d} must lie in 1..={}", data.dim());
        }
        let mut rows = Vec::new();
        for &m in train_sizes {
            let mut spec = cfg.split;
            spec.train_size = m;
            let (tr, te) = split(&data, spec)?;
            for &d in orders {
                let kernel = AdditiveKernelSpec::of_order(data.dim(), d, cfg.kernel_spec())?;
                let model = train(tr.inputs().view(), tr.targets().view(), kernel, &cfg.gpr_config())?;
                let train_rmse = finite("train rmse", rmse(&model, tr.inputs().view(), tr.targets().view())?)?;
                let test_rmse = finite("test rmse", rmse(&model, te.inputs().view(), te.targets().view())?)?;
                info!("d={d} M={m}: train {train_rmse:.4e} test {test_rmse:.4e}");
                rows.push((d, m, model.n_components(), train_rmse, test_rmse));
            }
        }
        out.write_csv(
            "order_scan.csv",
            &["order", "train_size", "terms", "train_rmse", "test_rmse"],
            rows.iter().map(|r| vec![r.0.to_string(), r.1.to_string(), r.2.to_string(), r.3.to_string(), r.4.to_string()]),
        )?;
        let metrics = json!({
            "command": "order-scan",
            "config": cfg.to_json(),
            "dataset": { "name": data.name, "dim": data.dim(), "points": data.len(), "units": data.units },
            "rows": rows.iter().map(|r| json!({
                "order": r.0, "train_size": r.1, "terms": r.2, "train_rmse": r.3, "test_rmse": r.4,
            })).collect::<Vec<_>>(),
        });
        out.write_json("metrics.json", &metrics)?;
        let secs = write_timing(out, started)?;
        println!("order-scan: {} rows ({secs:.2}s) -> {}", rows.len(), out.path("order_scan.csv").display());
        Ok(metrics)
    })
}

/// Every fifth count below `n`, then `n` itself.
pub fn default_keep(n: usize) -> Vec<usize> {
    (5..n).step_by(5).chain([n]).collect()
}

pub fn prune_scan(cfg: &RunConfig, keep: Option<&[usize]>, mode: PruneMode) -> Result<Value> {
    with_outputs(&cfg.out_dir, |out| {
        let started = Instant::now();
        let (tr, te) = load_split(cfg)?;
        let model = build(tr.inputs().view(), tr.targets().view(), &cfg.neural_config())?;
        let n = model.n_neurons();
        let keep = keep.map(<[usize]>::to_vec).unwrap_or_else(|| default_keep(n));
        if let Some(&k) = keep.iter().find(|&&k| k == 0 || k > n) {
            bail!("keep count {k} must lie in 1..={n}");
        }
        let rows = model.prune_scan(
            (tr.inputs().view(), tr.targets().view()),
            (te.inputs().view(), te.targets().view()),
            &keep,
            mode,
        )?;
        for r in &rows {
            finite("train rmse", r.train_rmse)?;
            finite("test rmse", r.test_rmse)?;
        }
        SavedNeuralModel::new(model.clone()).save(out.path("model.json"))?;
        out.write_csv(
            "prune_scan.csv",
            &["keep", "train_rmse", "test_rmse"],
            rows.iter().map(|r| vec![r.keep.to_string(), r.train_rmse.to_string(), r.test_rmse.to_string()]),
        )?;
        let metrics = json!({
            "command": "prune-scan",
            "config": cfg.to_json(),
            "dataset": dataset_json(&tr, te.len()),
            "prune_mode": mode.to_string(),
            "n_neurons": n,
            "n_train": tr.len(),
            "n_test": te.len(),
            "rows": rows,
        });
        out.write_json("metrics.json", &metrics)?;
        let secs = write_timing(out, started)?;
        let best = rows.iter().min_by(|a, b| a.test_rmse.total_cmp(&b.test_rmse)).expect("non-empty");
        println!(
            "prune-scan ({mode}): {} rows, best test rmse {:.6e}{} at keep={} ({secs:.2}s) -> {}",
            rows.len(),
            best.test_rmse,
            units_suffix(cfg),
            best.keep,
            out.path("prune_scan.csv").display()
        );
        Ok(metrics)
    })
}

pub fn activations(model_path: &Path, top_k: usize, grid_size: usize, out_dir: Option<&Path>) -> Result<Value> {
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(default_out_dir);
    with_outputs(&dir, |out| {
        let saved = SavedNeuralModel::<f64>::load(model_path)
            .with_context(|| format!("loading model {}", model_path.display()))?;
        let model = saved.model;
        let n = model.n_neurons();
        ensure!(top_k >= 1 && top_k <= n, "top-k {top_k} must lie in 1..={n}");
        ensure!(grid_size >= 2, "grid size must be at least 2");
        let stats = model.stats();
        let mut ranking_rows = Vec::with_capacity(n);
        for (rank, &neuron) in stats.ranking.iter().enumerate() {
            let (lo, hi) = model.projection_range(neuron)?;
            ranking_rows.push(vec![
                (rank + 1).to_string(),
                neuron.to_string(),
                stats.stds[neuron].to_string(),
                stats.means[neuron].to_string(),
                model.active_mask()[neuron].to_string(),
                lo.to_string(),
                hi.to_string(),
            ]);
        }
        out.write_csv("std_ranking.csv", &["rank", "neuron", "std", "mean", "active", "y_min", "y_max"], ranking_rows)?;
        let mut files = Vec::with_capacity(top_k);
        for (rank, &neuron) in stats.ranking.iter().take(top_k).enumerate() {
            let grid = model.activation_grid(neuron, grid_size)?;
            let table = model.activation_table(neuron, &grid)?;
            ensure!(table.iter().all(|(_, s)| s.is_finite()), "activation of neuron {neuron} is not finite");
            let name = format!("activation_rank{:03}_neuron{neuron:03}.csv", rank + 1);
            out.write_csv(&name, &["y", "sigma"], table.iter().map(|&(y, s)| vec![y, s]))?;
            files.push(name);
        }
        let summary = json!({
            "command": "activations",
            "model": model_path.display().to_string(),
            "top_k": top_k,
            "grid_size": grid_size,
            "files": files,
            "ranking": "std_ranking.csv",
        });
        out.write_json("activations.json", &summary)?;
        println!("activations: {top_k} tables + std_ranking.csv -> {}", out.dir().display());
        Ok(summary)
    })
}
