//! Run configuration: defaults, `key = value` files, and flag overrides.

use std::path::{Path, PathBuf};

use addgpr::datasets::{load_csv, synth_coupled, Dataset, SplitSpec, SynthSpec};
use addgpr::neuralize::{CoordinateScheme, NeuralConfig, ScaleTarget};
use addgpr::textfmt::parse_key_values;
use addgpr::{GprConfig, JitterPolicy, KernelFamily, KernelSpec, ScalerMode};
use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::{json, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ADDGPR_OUT_DIR";
const FALLBACK_OUT_DIR: &str = "addgpr-out";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// CSV dataset; when absent the synthetic surrogate is generated.
    pub data: Option<PathBuf>,
    pub synth: SynthSpec,
    pub split: SplitSpec,
    pub scheme: CoordinateScheme,
    pub kernel: KernelFamily,
    pub log_length_scale: f64,
    pub delta: f64,
    pub scaler: ScalerMode,
    pub scale_target: ScaleTarget,
    pub center_targets: bool,
    pub jitter: JitterPolicy,
    pub units: Option<String>,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            synth: SynthSpec::new(3, 5000, 42),
            split: SplitSpec { train_size: 500, seed: 42 },
            scheme: CoordinateScheme::Identity,
            kernel: KernelFamily::SquaredExponential,
            log_length_scale: 0.0,
            delta: 1e-6,
            scaler: ScalerMode::UnitVariance,
            scale_target: ScaleTarget::Features,
            center_targets: true,
            jitter: JitterPolicy::Fixed,
            units: None,
            out_dir: default_out_dir(),
        }
    }
}

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUT_DIR))
}

/// Flags shared by every command that trains a model. Each mirrors one
/// config-file key (`--train-size` is `train_size`).
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV with header `x1,...,xD,f`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub synth_dim: Option<usize>,
    #[arg(long)]
    pub synth_count: Option<usize>,
    #[arg(long)]
    pub synth_seed: Option<u64>,
    #[arg(long)]
    pub beta_pair: Option<f64>,
    #[arg(long)]
    pub gamma_full: Option<f64>,
    #[arg(long)]
    pub train_size: Option<usize>,
    #[arg(long)]
    pub split_seed: Option<u64>,
    /// `identity`, `pairwise:K[:MAX_PAIRS:SEED]` or `sobol:N[:SKIP]`.
    #[arg(long)]
    pub scheme: Option<CoordinateScheme>,
    /// `exponential`, `matern32`, `matern52` or `squared_exponential`.
    #[arg(long)]
    pub kernel: Option<KernelFamily>,
    #[arg(long, allow_negative_numbers = true)]
    pub log_length_scale: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// `identity`, `unit_variance` or `unit_cube`.
    #[arg(long)]
    pub scaler: Option<ScalerMode>,
    /// `features` (scale y) or `inputs` (scale x).
    #[arg(long)]
    pub scale_target: Option<ScaleTarget>,
    #[arg(long)]
    pub center_targets: Option<bool>,
    /// `fixed`, `escalate` or `escalate:FACTOR:MAX_DELTA`.
    #[arg(long)]
    pub jitter: Option<JitterPolicy>,
    /// Opaque label for target units, e.g. `cm-1`.
    #[arg(long)]
    pub units: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults, then the config file, then explicit flags.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            cfg.apply_file(path)?;
        }
        cfg.apply_args(args);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for e in parse_key_values(&text)? {
            let at = || format!("{}:{}", path.display(), e.line);
            match e.key.as_str() {
                "data" => self.data = Some(base.join(&e.value)),
                "synth_dim" => self.synth.dim = e.parse()?,
                "synth_count" => self.synth.count = e.parse()?,
                "synth_seed" => self.synth.seed = e.parse()?,
                "beta_pair" => self.synth.beta_pair = e.parse()?,
                "gamma_full" => self.synth.gamma_full = e.parse()?,
                "train_size" => self.split.train_size = e.parse()?,
                "split_seed" => self.split.seed = e.parse()?,
                "scheme" => self.scheme = e.value.parse().with_context(at)?,
                "kernel" => self.kernel = e.value.parse().with_context(at)?,
                "log_length_scale" => self.log_length_scale = e.parse()?,
                "delta" => self.delta = e.parse()?,
                "scaler" => self.scaler = e.value.parse().with_context(at)?,
                "scale_target" => self.scale_target = e.value.parse().with_context(at)?,
                "center_targets" => self.center_targets = e.parse()?,
                "jitter" => self.jitter = e.value.parse().with_context(at)?,
                "units" => self.units = Some(e.value.clone()),
                "out_dir" => self.out_dir = base.join(&e.value),
                other => bail!("{}: unknown config key `{other}`", at()),
            }
        }
        Ok(())
    }

    pub fn apply_args(&mut self, a: &RunArgs) {
        if let Some(v) = &a.data {
            self.data = Some(v.clone());
        }
        set(&mut self.synth.dim, a.synth_dim);
        set(&mut self.synth.count, a.synth_count);
        set(&mut self.synth.seed, a.synth_seed);
        set(&mut self.synth.beta_pair, a.beta_pair);
        set(&mut self.synth.gamma_full, a.gamma_full);
        set(&mut self.split.train_size, a.train_size);
        set(&mut self.split.seed, a.split_seed);
        set(&mut self.scheme, a.scheme);
        set(&mut self.kernel, a.kernel);
        set(&mut self.log_length_scale, a.log_length_scale);
        set(&mut self.delta, a.delta);
        set(&mut self.scaler, a.scaler);
        set(&mut self.scale_target, a.scale_target);
        set(&mut self.center_targets, a.center_targets);
        set(&mut self.jitter, a.jitter);
        if let Some(u) = &a.units {
            self.units = Some(u.clone());
        }
        if let Some(o) = &a.out_dir {
            self.out_dir = o.clone();
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            bail!("delta must be finite and non-negative, got {}", self.delta);
        }
        if !self.log_length_scale.is_finite() {
            bail!("log_length_scale must be finite");
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<Dataset<f64>> {
        let mut data = match &self.data {
            Some(path) => load_csv(path).with_context(|| format!("loading {}", path.display()))?,
            None => synth_coupled(&self.synth)?,
        };
        data.units = self.units.clone();
        Ok(data)
    }

    pub fn kernel_spec(&self) -> KernelSpec<f64> {
        KernelSpec::new(self.kernel, self.log_length_scale)
    }

    pub fn gpr_config(&self) -> GprConfig<f64> {
        GprConfig::default()
            .with_delta(self.delta)
            .with_scaler(self.scaler)
            .with_centering(self.center_targets)
            .with_jitter(self.jitter)
    }

    pub fn neural_config(&self) -> NeuralConfig<f64> {
        let mut cfg = NeuralConfig::new(self.scheme, self.kernel_spec());
        cfg.gpr = self.gpr_config();
        cfg.scale = self.scale_target;
        cfg
    }

    /// Every resolved field, for provenance in metrics records.
    pub fn to_json(&self) -> Value {
        let data = match &self.data {
            Some(p) => json!({ "csv": p.display().to_string() }),
            None => json!({ "synth_coupled": {
                "dim": self.synth.dim,
                "count": self.synth.count,
                "seed": self.synth.seed,
                "beta_pair": self.synth.beta_pair,
                "gamma_full": self.synth.gamma_full,
            }}),
        };
        json!({
            "data": data,
            "train_size": self.split.train_size,
            "split_seed": self.split.seed,
            "scheme": self.scheme.to_string(),
            "kernel": self.kernel.to_string(),
            "log_length_scale": self.log_length_scale,
            "delta": self.delta,
            "scaler": self.scaler.to_string(),
            "scale_target": self.scale_target.to_string(),
            "center_targets": self.center_targets,
            "jitter": self.jitter.to_string(),
            "units": self.units,
        })
    }
}

fn set<V: Copy>(slot: &mut V, v: Option<V>) {
    if let Some(v) = v {
        *slot = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "# water recipe\ndelta = 1e-6\nlog-length-scale = 1.0\nscheme = sobol:231\ntrain_size = 1000\n",
        )
        .unwrap();
        let args = RunArgs {
            config: Some(path),
            train_size: Some(200),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.split.train_size, 200);
        assert_eq!(cfg.log_length_scale, 1.0);
        assert_eq!(cfg.scheme, CoordinateScheme::sobol(231));
    }

    #[test]
    fn rejects_unknown_keys_and_negative_delta() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "nugget = 1\n").unwrap();
        let err = RunConfig::resolve(&RunArgs { config: Some(path), ..Default::default() }).unwrap_err();
        assert!(err.to_string().contains(":1"), "{err}");
        let err = RunConfig::resolve(&RunArgs { delta: Some(-1.0), ..Default::default() });
        assert!(err.is_err());
    }

    #[test]
    fn resolved_config_is_fully_recorded() {
        let v = RunConfig::default().to_json();
        for key in ["data", "train_size", "split_seed", "scheme", "kernel", "log_length_scale", "delta", "scaler"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
