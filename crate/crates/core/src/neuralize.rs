//! Single-hidden-layer model whose activations are the component functions of a
//! first-order additive GPR in redundant coordinates.
//!
//! `F(x) = sum_n sigma_n(w_n . x)`: the rows `w_n` come from a fixed rule and each
//! `sigma_n` is the GPR component function on coordinate `y_n`. Training is a
//! single linear solve. Neurons can be pruned by the spread of their activation
//! over the training set; pruned neurons contribute their training mean as a
//! constant.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{CoordinateMap, FeatureScaler, PairCap, ScalerMode};
use crate::error::{check_len, domain, Error, Result};
use crate::gpr::{rmse_of, train, ComponentStats, GprConfig, InputSpace, TrainedGpr};
use crate::kernels::{AdditiveKernelSpec, KernelSpec};
use crate::num::{CompensatedSum, Scalar};

/// Rule generating the hidden-layer weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum CoordinateScheme {
    Identity,
    Pairwise { cycles: usize, cap: Option<PairCap> },
    Sobol { n: usize, skip: u64 },
}

impl CoordinateScheme {
    pub fn sobol(n: usize) -> Self {
        CoordinateScheme::Sobol { n, skip: 1 }
    }

    pub fn pairwise(cycles: usize) -> Self {
        CoordinateScheme::Pairwise { cycles, cap: None }
    }

    pub fn generate<T: Scalar>(&self, dim: usize) -> Result<CoordinateMap<T>> {
        match *self {
            CoordinateScheme::Identity => CoordinateMap::identity(dim),
            CoordinateScheme::Pairwise { cycles, cap: None } => {
                CoordinateMap::identity(dim)?.pairwise_expand(cycles)
            }
            CoordinateScheme::Pairwise { cycles, cap: Some(cap) } => {
                CoordinateMap::identity(dim)?.pairwise_expand_capped(cycles, cap)
            }
            CoordinateScheme::Sobol { n, skip } => CoordinateMap::sobol(dim, n, skip),
        }
    }
}

impl fmt::Display for CoordinateScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordinateScheme::Identity => write!(f, "identity"),
            CoordinateScheme::Pairwise { cycles, cap: None } => write!(f, "pairwise:{cycles}"),
            CoordinateScheme::Pairwise { cycles, cap: Some(c) } => {
                write!(f, "pairwise:{cycles}:{}:{}", c.max_pairs, c.seed)
            }
            CoordinateScheme::Sobol { n, skip } => write!(f, "sobol:{n}:{skip}"),
        }
    }
}

/// `identity`, `pairwise:CYCLES[:MAX_PAIRS:SEED]`, or `sobol:N[:SKIP]` (skip defaults to 1).
impl FromStr for CoordinateScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |t: &str| -> Result<u64> {
            t.trim().parse().map_err(|_| domain(format!("bad integer `{t}` in scheme `{s}`")))
        };
        match parts.as_slice() {
            ["identity"] => Ok(CoordinateScheme::Identity),
            ["pairwise", k] => Ok(CoordinateScheme::pairwise(int(k)? as usize)),
            ["pairwise", k, cap, seed] => Ok(CoordinateScheme::Pairwise {
                cycles: int(k)? as usize,
                cap: Some(PairCap { max_pairs: int(cap)? as usize, seed: int(seed)? }),
            }),
            ["sobol", n] => Ok(CoordinateScheme::sobol(int(n)? as usize)),
            ["sobol", n, skip] => Ok(CoordinateScheme::Sobol { n: int(n)? as usize, skip: int(skip)? }),
            _ => Err(domain(format!("unrecognized coordinate scheme `{s}`"))),
        }
    }
}

/// Whether the scaler acts on the regression features `y` or on the raw inputs `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleTarget {
    #[default]
    Features,
    Inputs,
}

impl fmt::Display for ScaleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleTarget::Features => "features",
            ScaleTarget::Inputs => "inputs",
        })
    }
}

impl FromStr for ScaleTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "features" | "y" => Ok(ScaleTarget::Features),
            "inputs" | "x" => Ok(ScaleTarget::Inputs),
            other => Err(domain(format!("unknown scale target `{other}`"))),
        }
    }
}

/// How a pruned model treats the neurons it drops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneMode {
    /// Deactivate; coefficients unchanged.
    Mask,
    /// Re-solve on the kept neurons.
    Refit,
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneMode::Mask => "mask",
            PruneMode::Refit => "refit",
        })
    }
}

impl FromStr for PruneMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mask" => Ok(PruneMode::Mask),
            "refit" => Ok(PruneMode::Refit),
            other => Err(domain(format!("unknown prune mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeuralConfig<T> {
    pub scheme: CoordinateScheme,
    pub kernel: KernelSpec<T>,
    pub gpr: GprConfig<T>,
    pub scale: ScaleTarget,
}

impl<T: Scalar> NeuralConfig<T> {
    pub fn new(scheme: CoordinateScheme, kernel: KernelSpec<T>) -> Self {
        Self {
            scheme,
            kernel,
            gpr: GprConfig::default(),
            scale: ScaleTarget::Features,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuralAdditiveModel<T> {
    map: CoordinateMap<T>,
    /// Present when scaling is applied to `x` before the map.
    input_scaler: Option<FeatureScaler<T>>,
    core: TrainedGpr<T>,
    stats: ComponentStats<T>,
    active: Vec<bool>,
    prune_constant: T,
    /// Min and max of each neuron's training projection, in unscaled `y`.
    projection_ranges: Vec<(T, T)>,
}

/// Generate `W`, map the training inputs and fit a first-order additive GPR over them.
pub fn build<T: Scalar>(
    x: ArrayView2<T>,
    f: ArrayView1<T>,
    config: &NeuralConfig<T>,
) -> Result<NeuralAdditiveModel<T>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(domain("inputs must be finite"));
    }
    let map = config.scheme.generate(x.ncols())?;
    NeuralAdditiveModel::from_map(map, x, f, config)
}

impl<T: Scalar> NeuralAdditiveModel<T> {
    /// Build on an explicit coordinate map; the scheme in `config` is ignored.
    pub fn from_map(
        map: CoordinateMap<T>,
        x: ArrayView2<T>,
        f: ArrayView1<T>,
        config: &NeuralConfig<T>,
    ) -> Result<Self> {
        check_len(map.dim(), x.ncols())?;
        let (input_scaler, y, core_scaler) = match config.scale {
            ScaleTarget::Features => (None, map.apply_rows(x)?, config.gpr.scaler),
            ScaleTarget::Inputs => {
                let s = FeatureScaler::fit(config.gpr.scaler, x)?;
                let xs = s.transform_rows(x)?;
                (Some(s), map.apply_rows(xs.view())?, ScalerMode::Identity)
            }
        };
        let kernel = AdditiveKernelSpec::first_order(map.n_coords(), config.kernel.clone())?;
        let gpr_config = config.gpr.clone().with_scaler(core_scaler);
        let core = train(y.view(), f, kernel, &gpr_config)?;
        let projection_ranges = column_ranges(&y);
        Ok(Self::assemble(map, input_scaler, core, projection_ranges))
    }

    fn assemble(
        map: CoordinateMap<T>,
        input_scaler: Option<FeatureScaler<T>>,
        core: TrainedGpr<T>,
        projection_ranges: Vec<(T, T)>,
    ) -> Self {
        let stats = core.component_stats();
        let n = map.n_coords();
        Self {
            map,
            input_scaler,
            core,
            stats,
            active: vec![true; n],
            prune_constant: T::zero(),
            projection_ranges,
        }
    }

    pub fn map(&self) -> &CoordinateMap<T> {
        &self.map
    }

    pub fn core(&self) -> &TrainedGpr<T> {
        &self.core
    }

    pub fn stats(&self) -> &ComponentStats<T> {
        &self.stats
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active
    }

    pub fn prune_constant(&self) -> T {
        self.prune_constant
    }

    pub fn input_scaler(&self) -> Option<&FeatureScaler<T>> {
        self.input_scaler.as_ref()
    }

    pub fn n_neurons(&self) -> usize {
        self.map.n_coords()
    }

    pub fn n_active(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn all_active(&self) -> bool {
        self.active.iter().all(|&a| a)
    }

    /// Training-set range of neuron `n`'s argument.
    pub fn projection_range(&self, n: usize) -> Result<(T, T)> {
        self.projection_ranges
            .get(n)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: n, len: self.n_neurons() })
    }

    /// Neuron arguments `y = W x` (after input scaling, when configured).
    pub fn project(&self, x: ArrayView1<T>) -> Result<Array1<T>> {
        match &self.input_scaler {
            Some(s) => self.map.apply(s.transform(x)?.view()),
            None => self.map.apply(x),
        }
    }

    pub fn project_rows(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        match &self.input_scaler {
            Some(s) => self.map.apply_rows(s.transform_rows(x)?.view()),
            None => self.map.apply_rows(x),
        }
    }

    pub fn predict(&self, x: ArrayView1<T>) -> Result<T> {
        let y = self.project(x)?;
        if self.all_active() {
            return self.core.predict(y.view());
        }
        let mut acc = CompensatedSum::new(T::zero());
        for (n, &on) in self.active.iter().enumerate() {
            if on {
                acc.add(self.core.component_value(n, y.slice(ndarray::s![n..n + 1]), InputSpace::Raw)?);
            }
        }
        Ok(acc.value() + self.prune_constant + self.core.target_offset())
    }

    pub fn predict_rows(&self, x: ArrayView2<T>) -> Result<Array1<T>> {
        let y = self.project_rows(x)?;
        if self.all_active() {
            return self.core.predict_rows(y.view());
        }
        let comps = self.core.component_matrix(y.view())?;
        Ok(self.sum_active(&comps, &self.active))
    }

    /// Activation of every neuron at every row of `x`, `rows x N`.
    pub fn activations(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        let y = self.project_rows(x)?;
        self.core.component_matrix(y.view())
    }

    fn sum_active(&self, comps: &Array2<T>, active: &[bool]) -> Array1<T> {
        let base = self.prune_constant_for(active) + self.core.target_offset();
        let out: Vec<T> = comps
            .axis_iter(Axis(0))
            .into_par_iter()
            .map(|row| {
                let mut acc = CompensatedSum::new(T::zero());
                for (&v, &on) in row.iter().zip(active) {
                    if on {
                        acc.add(v);
                    }
                }
                acc.value() + base
            })
            .collect();
        Array1::from(out)
    }

    fn mask_for(&self, keep_n: usize) -> Result<Vec<bool>> {
        let n = self.n_neurons();
        if keep_n == 0 || keep_n > n {
            return Err(domain(format!("keep count {keep_n} must lie in 1..={n}")));
        }
        let mut active = vec![false; n];
        for &i in &self.stats.ranking[..keep_n] {
            active[i] = true;
        }
        Ok(active)
    }

    fn prune_constant_for(&self, active: &[bool]) -> T {
        let mut acc = CompensatedSum::new(T::zero());
        for (&m, &on) in self.stats.means.iter().zip(active) {
            if !on {
                acc.add(m);
            }
        }
        acc.value()
    }

    /// Keep the `keep_n` neurons with the largest training-set std. Coefficients
    /// are not refit; dropped neurons contribute their training means.
    pub fn prune(&self, keep_n: usize) -> Result<Self> {
        let active = self.mask_for(keep_n)?;
        let mut out = self.clone();
        out.prune_constant = self.prune_constant_for(&active);
        out.active = active;
        Ok(out)
    }

    /// Keep the top `keep_n` neurons and re-solve the GPR on them alone.
    /// The result has `keep_n` neurons, all active.
    pub fn prune_refit(&self, keep_n: usize) -> Result<Self> {
        let active = self.mask_for(keep_n)?;
        let kept: Vec<usize> = (0..self.n_neurons()).filter(|&i| active[i]).collect();
        let map = self.map.select_rows(&kept)?;
        let core = self.core.refit_columns(&kept)?;
        let ranges = kept.iter().map(|&i| self.projection_ranges[i]).collect();
        Ok(Self::assemble(map, self.input_scaler.clone(), core, ranges))
    }

    /// Train and test rmse for each keep count.
    ///
    /// [`PruneMode::Mask`] evaluates every activation once and sums subsets;
    /// [`PruneMode::Refit`] matches [`Self::prune_refit`] per count, with
    /// per-neuron kernel terms shared across the nested kept sets.
    pub fn prune_scan(
        &self,
        train: (ArrayView2<T>, ArrayView1<T>),
        test: (ArrayView2<T>, ArrayView1<T>),
        keep: &[usize],
        mode: PruneMode,
    ) -> Result<Vec<PruneScanRow<T>>> {
        check_len(train.0.nrows(), train.1.len())?;
        check_len(test.0.nrows(), test.1.len())?;
        for &k in keep {
            self.mask_for(k)?;
        }
        match mode {
            PruneMode::Mask => {
                let train_comps = self.activations(train.0)?;
                let test_comps = self.activations(test.0)?;
                keep.iter()
                    .map(|&k| {
                        let active = self.mask_for(k)?;
                        Ok(PruneScanRow {
                            keep: k,
                            train_rmse: rmse_of(self.sum_active(&train_comps, &active).view(), train.1)?,
                            test_rmse: rmse_of(self.sum_active(&test_comps, &active).view(), test.1)?,
                        })
                    })
                    .collect()
            }
            PruneMode::Refit => {
                // keeping every neuron reproduces the model itself
                let n = self.n_neurons();
                let partial: Vec<usize> = keep.iter().copied().filter(|&k| k < n).collect();
                let ytr = self.project_rows(train.0)?;
                let yte = self.project_rows(test.0)?;
                let mut preds = self
                    .core
                    .nested_refit_predictions(&self.stats.ranking, &partial, &[ytr.view(), yte.view()])?
                    .into_iter();
                let full = if partial.len() < keep.len() {
                    Some((self.core.predict_rows(ytr.view())?, self.core.predict_rows(yte.view())?))
                } else {
                    None
                };
                keep.iter()
                    .map(|&k| {
                        let (ptr, pte) = match (&full, k < n) {
                            (Some((a, b)), false) => (a.clone(), b.clone()),
                            _ => {
                                let mut p = preds.next().expect("one refit per partial keep");
                                let pte = p.pop().expect("test predictions");
                                (p.pop().expect("train predictions"), pte)
                            }
                        };
                        Ok(PruneScanRow {
                            keep: k,
                            train_rmse: rmse_of(ptr.view(), train.1)?,
                            test_rmse: rmse_of(pte.view(), test.1)?,
                        })
                    })
                    .collect()
            }
        }
    }

    /// `(y, sigma_n(y))` over `grid` (unscaled neuron argument).
    pub fn activation_table(&self, neuron: usize, grid: &[T]) -> Result<Vec<(T, T)>> {
        if neuron >= self.n_neurons() {
            return Err(Error::IndexOutOfRange { index: neuron, len: self.n_neurons() });
        }
        grid.iter()
            .map(|&y| {
                let v = self.core.component_value(neuron, ndarray::aview1(&[y]), InputSpace::Raw)?;
                Ok((y, v))
            })
            .collect()
    }

    /// `size` evenly spaced points from the minimum to the maximum training projection.
    pub fn activation_grid(&self, neuron: usize, size: usize) -> Result<Vec<T>> {
        let (lo, hi) = self.projection_range(neuron)?;
        if size == 0 {
            return Err(domain("grid size must be positive"));
        }
        if size == 1 {
            return Ok(vec![lo]);
        }
        let step = (hi - lo) / T::from_usize_lossy(size - 1);
        Ok((0..size)
            .map(|i| if i == size - 1 { hi } else { lo + step * T::from_usize_lossy(i) })
            .collect())
    }
}

/// One row of a pruning scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruneScanRow<T> {
    pub keep: usize,
    pub train_rmse: T,
    pub test_rmse: T,
}

fn column_ranges<T: Scalar>(y: &Array2<T>) -> Vec<(T, T)> {
    y.axis_iter(Axis(1))
        .map(|c| {
            let lo = c.iter().copied().fold(T::infinity(), T::min);
            let hi = c.iter().copied().fold(T::neg_infinity(), T::max);
            (lo, hi)
        })
        .collect()
}

pub const NEURAL_FORMAT: &str = "addgpr.neural.v1";

/// On-disk container for a [`NeuralAdditiveModel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedNeuralModel<T> {
    pub format: String,
    pub model: NeuralAdditiveModel<T>,
}

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> SavedNeuralModel<T> {
    pub fn new(model: NeuralAdditiveModel<T>) -> Self {
        Self {
            format: NEURAL_FORMAT.to_string(),
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let out: Self = serde_json::from_str(text)?;
        if out.format != NEURAL_FORMAT {
            return Err(domain(format!("unexpected model format `{}`", out.format)));
        }
        Ok(out)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn toy(d: usize, m: usize, seed: u64) -> (Array2<f64>, Array1<f64>) {
        let mut rng = SeededRng::new(seed);
        let x = Array2::from_shape_fn((m, d), |_| rng.uniform(-1.0, 1.0));
        let f = x.rows().into_iter().map(|r| r.iter().map(|v| v * v).sum::<f64>() + r[0] * r[d - 1]).collect();
        (x, f)
    }

    #[test]
    fn scheme_strings() {
        for s in ["identity", "pairwise:3", "pairwise:2:10:7", "sobol:231:1", "sobol:5:0"] {
            let parsed: CoordinateScheme = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert_eq!("sobol:50".parse::<CoordinateScheme>().unwrap(), CoordinateScheme::Sobol { n: 50, skip: 1 });
        assert!("sobol".parse::<CoordinateScheme>().is_err());
        assert!("pairwise:x".parse::<CoordinateScheme>().is_err());
    }

    #[test]
    fn pairwise_three_cycles_gives_231_neurons() {
        let (x, f) = toy(3, 40, 1);
        let cfg = NeuralConfig::new(CoordinateScheme::pairwise(3), KernelSpec::squared_exponential(1.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        assert_eq!(m.n_neurons(), 231);
        assert_eq!(m.core().kernel().subsets().len(), 231);
        assert!(m.core().kernel().is_first_order());
        assert_eq!(m.prune_constant(), 0.0);
    }

    #[test]
    fn all_active_matches_core_exactly() {
        let (x, f) = toy(3, 30, 2);
        let cfg = NeuralConfig::new(CoordinateScheme::sobol(12), KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        for row in x.rows() {
            let y = m.map().apply(row).unwrap();
            assert_eq!(m.predict(row).unwrap(), m.core().predict(y.view()).unwrap());
        }
    }

    #[test]
    fn prune_restore_and_no_op() {
        let (x, f) = toy(3, 30, 3);
        let cfg = NeuralConfig::new(CoordinateScheme::pairwise(2), KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        assert_eq!(m.prune(m.n_neurons()).unwrap(), m);
        let p = m.prune(5).unwrap();
        assert_eq!(p.n_active(), 5);
        let back = p.prune(m.n_neurons()).unwrap();
        for row in x.rows() {
            assert_eq!(back.predict(row).unwrap(), m.predict(row).unwrap());
        }
        assert!(m.prune(0).is_err());
        assert!(m.prune(22).is_err());
    }

    #[test]
    fn pruned_predict_paths_agree() {
        let (x, f) = toy(3, 30, 4);
        let cfg = NeuralConfig::new(CoordinateScheme::sobol(10), KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap().prune(4).unwrap();
        let batch = m.predict_rows(x.view()).unwrap();
        for (row, b) in x.rows().into_iter().zip(batch.iter()) {
            assert_abs_diff_eq!(m.predict(row).unwrap(), *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn refit_prune_has_fewer_neurons() {
        let (x, f) = toy(3, 40, 5);
        let cfg = NeuralConfig::new(CoordinateScheme::sobol(20), KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        let r = m.prune_refit(8).unwrap();
        assert_eq!(r.n_neurons(), 8);
        assert!(r.all_active());
        let train_rmse = rmse_of(r.predict_rows(x.view()).unwrap().view(), f.view()).unwrap();
        assert!(train_rmse.is_finite());
    }

    #[test]
    fn scans_match_explicit_pruning() {
        let (x, f) = toy(3, 40, 6);
        let (xt, ft) = toy(3, 25, 7);
        for scale in [ScaleTarget::Features, ScaleTarget::Inputs] {
            let mut cfg = NeuralConfig::new(CoordinateScheme::pairwise(2), KernelSpec::squared_exponential(0.0));
            cfg.scale = scale;
            cfg.gpr.delta = 1e-4;
            let m = build(x.view(), f.view(), &cfg).unwrap();
            let keep = [21, 3, 10];
            let refit = m.prune_scan((x.view(), f.view()), (xt.view(), ft.view()), &keep, PruneMode::Refit).unwrap();
            let mask = m.prune_scan((x.view(), f.view()), (xt.view(), ft.view()), &keep, PruneMode::Mask).unwrap();
            for ((r, k), &n) in refit.iter().zip(&mask).zip(&keep) {
                assert_eq!((r.keep, k.keep), (n, n));
                let explicit = m.prune_refit(n).unwrap();
                let want = rmse_of(explicit.predict_rows(xt.view()).unwrap().view(), ft.view()).unwrap();
                assert_abs_diff_eq!(r.test_rmse, want, epsilon = 1e-9);
                let masked = m.prune(n).unwrap();
                let want = rmse_of(masked.predict_rows(x.view()).unwrap().view(), f.view()).unwrap();
                assert_abs_diff_eq!(k.train_rmse, want, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(refit[0].test_rmse, mask[0].test_rmse, epsilon = 1e-9);
            assert!(m.prune_scan((x.view(), f.view()), (xt.view(), ft.view()), &[22], PruneMode::Refit).is_err());
        }
        assert_eq!("refit".parse::<PruneMode>().unwrap(), PruneMode::Refit);
        assert_eq!(PruneMode::Mask.to_string(), "mask");
    }

    #[test]
    fn identity_scheme_in_one_dimension_is_plain_gpr() {
        let x = array![[-0.8], [-0.1], [0.3], [0.9]];
        let f = array![0.64, 0.01, 0.09, 0.81];
        let cfg = NeuralConfig::new(CoordinateScheme::Identity, KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        let k = AdditiveKernelSpec::full(1, KernelSpec::squared_exponential(0.0)).unwrap();
        let g = train(x.view(), f.view(), k, &GprConfig::default()).unwrap();
        for v in [-1.0, 0.0, 0.5] {
            assert_eq!(m.predict(array![v].view()).unwrap(), g.predict(array![v].view()).unwrap());
        }
        let grid = [-0.5, 0.2];
        let table = m.activation_table(0, &grid).unwrap();
        for (y, s) in table {
            let full = g.predict(array![y].view()).unwrap();
            assert_abs_diff_eq!(s + g.target_offset(), full, epsilon = 1e-12);
        }
    }

    #[test]
    fn activation_grid_spans_training_projections() {
        let (x, f) = toy(2, 25, 6);
        let cfg = NeuralConfig::new(CoordinateScheme::sobol(5), KernelSpec::squared_exponential(0.0));
        let m = build(x.view(), f.view(), &cfg).unwrap();
        let y = m.map().apply_rows(x.view()).unwrap();
        for n in 0..5 {
            let g = m.activation_grid(n, 11).unwrap();
            let col = y.column(n);
            assert_eq!(g[0], col.iter().copied().fold(f64::INFINITY, f64::min));
            assert_eq!(g[10], col.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        }
        assert!(m.activation_table(5, &[0.0]).is_err());
    }

    #[test]
    fn input_scaling_mode() {
        let (x, f) = toy(3, 30, 7);
        let mut cfg = NeuralConfig::new(CoordinateScheme::sobol(10), KernelSpec::squared_exponential(0.0));
        cfg.scale = ScaleTarget::Inputs;
        let m = build(x.view(), f.view(), &cfg).unwrap();
        assert!(m.input_scaler().is_some());
        assert_eq!(m.core().scaler().mode(), ScalerMode::Identity);
        let r = rmse_of(m.predict_rows(x.view()).unwrap().view(), f.view()).unwrap();
        assert!(r < 1e-2);
    }

    #[test]
    fn json_round_trip() {
        let (x, f) = toy(2, 12, 8);
        let cfg = NeuralConfig::new(CoordinateScheme::pairwise(1), KernelSpec::squared_exponential(0.5));
        let m = build(x.view(), f.view(), &cfg).unwrap().prune(2).unwrap();
        let saved = SavedNeuralModel::new(m);
        let back = SavedNeuralModel::<f64>::from_json(&saved.to_json().unwrap()).unwrap();
        assert_eq!(back, saved);
    }
}
