//! Additive Gaussian process regression: training, prediction, and the
//! component functions induced by the additive kernel.
//!
//! With an additive kernel `k = sum_i k_i` the posterior mean splits exactly as
//! `f(x) = offset + sum_i f_i(x_i)` where `f_i(u) = sum_n k_i(u, x_n) c_n`. Only the
//! posterior mean is modelled.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{FeatureScaler, ScalerMode};
use crate::error::{check_len, domain, Error, Result};
use crate::kernels::AdditiveKernelSpec;
use crate::num::{CompensatedSum, Scalar};
use crate::spd_solver::{assemble, solve_with_policy, Cholesky, JitterPolicy};

/// Training options.
#[derive(Clone, Debug, PartialEq)]
pub struct GprConfig<T> {
    /// Diagonal regularizer added to the Gram matrix.
    pub delta: T,
    pub scaler: ScalerMode,
    /// Subtract the training mean from targets and add it back at prediction.
    pub center_targets: bool,
    pub jitter: JitterPolicy,
}

impl<T: Scalar> Default for GprConfig<T> {
    fn default() -> Self {
        Self {
            delta: T::lit(1e-6),
            scaler: ScalerMode::UnitVariance,
            center_targets: true,
            jitter: JitterPolicy::Fixed,
        }
    }
}

impl<T: Scalar> GprConfig<T> {
    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_scaler(mut self, scaler: ScalerMode) -> Self {
        self.scaler = scaler;
        self
    }

    pub fn with_centering(mut self, on: bool) -> Self {
        self.center_targets = on;
        self
    }

    pub fn with_jitter(mut self, jitter: JitterPolicy) -> Self {
        self.jitter = jitter;
        self
    }
}

/// Which space a component-function argument is expressed in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InputSpace {
    /// User coordinates; the stored scaler is applied first.
    #[default]
    Raw,
    /// Already scaled.
    Scaled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedGpr<T> {
    kernel: AdditiveKernelSpec<T>,
    delta: T,
    scaler: FeatureScaler<T>,
    /// Scaled training inputs, `M x Dy`.
    inputs: Array2<T>,
    targets: Array1<T>,
    coefficients: Array1<T>,
    target_offset: T,
}

/// Spread of each component function over the training points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats<T> {
    pub means: Vec<T>,
    /// Population standard deviations (divisor M).
    pub stds: Vec<T>,
    /// Subset indices by descending std, ties by ascending index.
    pub ranking: Vec<usize>,
}

impl<T: Scalar> ComponentStats<T> {
    fn from_values(values: &Array2<T>) -> Self {
        let m = T::from_usize_lossy(values.nrows());
        let mut means = Vec::with_capacity(values.ncols());
        let mut stds = Vec::with_capacity(values.ncols());
        for col in values.axis_iter(Axis(1)) {
            let mean = col.iter().copied().sum::<T>() / m;
            let var = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / m;
            means.push(mean);
            stds.push(var.sqrt());
        }
        let mut ranking: Vec<usize> = (0..stds.len()).collect();
        ranking.sort_by(|&a, &b| {
            stds[b]
                .partial_cmp(&stds[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        Self { means, stds, ranking }
    }

    pub fn len(&self) -> usize {
        self.stds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stds.is_empty()
    }
}

/// Fit `c = (K + delta I)^{-1} (f - offset)` on scaled inputs.
pub fn train<T: Scalar>(
    x: ArrayView2<T>,
    f: ArrayView1<T>,
    kernel: AdditiveKernelSpec<T>,
    config: &GprConfig<T>,
) -> Result<TrainedGpr<T>> {
    if x.nrows() == 0 {
        return Err(domain("at least one training point is required"));
    }
    check_len(kernel.dim(), x.ncols())?;
    check_len(x.nrows(), f.len())?;
    if f.iter().any(|v| !v.is_finite()) {
        return Err(domain("targets must be finite"));
    }
    let scaler = FeatureScaler::fit(config.scaler, x)?;
    let inputs = scaler.transform_rows(x)?;
    let target_offset = if config.center_targets {
        f.sum() / T::from_usize_lossy(f.len())
    } else {
        T::zero()
    };
    fit(kernel, config.delta, config.jitter, scaler, inputs, f.to_owned(), target_offset)
}

fn fit<T: Scalar>(
    kernel: AdditiveKernelSpec<T>,
    delta: T,
    jitter: JitterPolicy,
    scaler: FeatureScaler<T>,
    inputs: Array2<T>,
    targets: Array1<T>,
    target_offset: T,
) -> Result<TrainedGpr<T>> {
    let inputs = inputs.as_standard_layout().into_owned();
    let system = assemble(&kernel, inputs.view(), delta)?;
    let centered = targets.mapv(|v| v - target_offset);
    let (coefficients, delta) = solve_with_policy(&system, centered.view(), jitter)?;
    Ok(TrainedGpr {
        kernel,
        delta,
        scaler,
        inputs,
        targets,
        coefficients,
        target_offset,
    })
}

impl<T: Scalar> TrainedGpr<T> {
    pub fn kernel(&self) -> &AdditiveKernelSpec<T> {
        &self.kernel
    }

    /// The regularizer actually used (may exceed the requested one under jitter escalation).
    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn scaler(&self) -> &FeatureScaler<T> {
        &self.scaler
    }

    pub fn inputs(&self) -> &Array2<T> {
        &self.inputs
    }

    pub fn targets(&self) -> &Array1<T> {
        &self.targets
    }

    pub fn coefficients(&self) -> &Array1<T> {
        &self.coefficients
    }

    pub fn target_offset(&self) -> T {
        self.target_offset
    }

    pub fn n_train(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn n_components(&self) -> usize {
        self.kernel.subsets().len()
    }

    fn row(&self, m: usize) -> &[T] {
        let d = self.inputs.ncols();
        &self.inputs.as_slice().expect("standard layout")[m * d..(m + 1) * d]
    }

    fn predict_scaled(&self, xs: &[T]) -> T {
        let k = self.kernel.base().prepare();
        let mut acc = CompensatedSum::new(T::zero());
        for (m, &c) in self.coefficients.iter().enumerate() {
            for v in self.kernel.subset_terms(&k, xs, self.row(m)) {
                acc.add(v * c);
            }
        }
        acc.value() + self.target_offset
    }

    /// Posterior mean at `x` (user coordinates).
    pub fn predict(&self, x: ArrayView1<T>) -> Result<T> {
        let xs = self.scaler.transform(x)?;
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(domain("prediction input must be finite"));
        }
        Ok(self.predict_scaled(xs.as_slice().expect("contiguous")))
    }

    /// Posterior mean at every row of `x`, in parallel.
    pub fn predict_rows(&self, x: ArrayView2<T>) -> Result<Array1<T>> {
        let xs = self.scaler.transform_rows(x)?;
        let d = xs.ncols();
        let flat = xs.as_slice().expect("standard layout");
        let out: Vec<T> = (0..xs.nrows())
            .into_par_iter()
            .map(|i| self.predict_scaled(&flat[i * d..(i + 1) * d]))
            .collect();
        Ok(Array1::from(out))
    }

    /// `f_i(u) = sum_n k_i(u, x_n restricted to subset i) c_n`.
    ///
    /// `u` has one entry per coordinate of subset `subset`, in subset order.
    pub fn component_value(&self, subset: usize, u: ArrayView1<T>, space: InputSpace) -> Result<T> {
        let cols = self
            .kernel
            .subsets()
            .get(subset)
            .ok_or(Error::IndexOutOfRange { index: subset, len: self.n_components() })?;
        check_len(cols.len(), u.len())?;
        let us: Vec<T> = match space {
            InputSpace::Raw => cols
                .iter()
                .zip(u.iter())
                .map(|(&j, &v)| self.scaler.transform_value(j, v))
                .collect(),
            InputSpace::Scaled => u.to_vec(),
        };
        Ok(self.component_scaled(cols, &us))
    }

    fn component_scaled(&self, cols: &[usize], us: &[T]) -> T {
        let k = self.kernel.base().prepare();
        let mut acc = CompensatedSum::new(T::zero());
        for (m, &c) in self.coefficients.iter().enumerate() {
            let row = self.row(m);
            let mut r2 = T::zero();
            for (&u, &j) in us.iter().zip(cols) {
                let d = u - row[j];
                r2 += d * d;
            }
            acc.add(k.eval_sq(r2) * c);
        }
        acc.value()
    }

    /// Values of every component at every row of `x` (full user-coordinate
    /// vectors), as a `rows x components` matrix.
    pub fn component_matrix(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        let xs = self.scaler.transform_rows(x)?;
        Ok(self.component_matrix_scaled(&xs))
    }

    fn component_matrix_scaled(&self, xs: &Array2<T>) -> Array2<T> {
        let d = xs.ncols();
        let flat = xs.as_slice().expect("standard layout");
        let subsets = self.kernel.subsets();
        let rows: Vec<Vec<T>> = (0..xs.nrows())
            .into_par_iter()
            .map(|i| {
                let x = &flat[i * d..(i + 1) * d];
                subsets
                    .iter()
                    .map(|cols| {
                        let us: Vec<T> = cols.iter().map(|&j| x[j]).collect();
                        self.component_scaled(cols, &us)
                    })
                    .collect()
            })
            .collect();
        Array2::from_shape_vec((xs.nrows(), subsets.len()), rows.concat()).expect("rectangular")
    }

    /// Component values at the training inputs.
    pub fn training_components(&self) -> Array2<T> {
        self.component_matrix_scaled(&self.inputs)
    }

    pub fn component_stats(&self) -> ComponentStats<T> {
        ComponentStats::from_values(&self.training_components())
    }

    /// Re-solve using only the given columns, each as a singleton subset.
    /// Requires a first-order kernel.
    pub(crate) fn refit_columns(&self, columns: &[usize]) -> Result<Self> {
        if !self.kernel.is_first_order() {
            return Err(domain("column refit requires a first-order kernel"));
        }
        if columns.is_empty() {
            return Err(domain("refit needs at least one column"));
        }
        let kernel = AdditiveKernelSpec::first_order(columns.len(), self.kernel.base().clone())?;
        let inputs = self.inputs.select(Axis(1), columns);
        fit(
            kernel,
            self.delta,
            JitterPolicy::Fixed,
            self.scaler.select(columns),
            inputs,
            self.targets.clone(),
            self.target_offset,
        )
    }
}

impl<T: Scalar> TrainedGpr<T> {
    /// Predictions of the refits on the first `k` entries of `order`, for each
    /// `k` in `keep`, at every evaluation set. Equivalent to calling
    /// [`TrainedGpr::refit_columns`] per `k`, but each column's kernel
    /// contributions are computed once and accumulated.
    ///
    /// Result is indexed `[keep index][eval set]`.
    pub(crate) fn nested_refit_predictions(
        &self,
        order: &[usize],
        keep: &[usize],
        evals: &[ArrayView2<T>],
    ) -> Result<Vec<Vec<Array1<T>>>> {
        if !self.kernel.is_first_order() {
            return Err(domain("column refit requires a first-order kernel"));
        }
        let n = self.n_components();
        if let Some(&bad) = keep.iter().find(|&&k| k == 0 || k > order.len()) {
            return Err(domain(format!("keep count {bad} must lie in 1..={}", order.len())));
        }
        if order.iter().any(|&j| j >= n) {
            return Err(domain("refit column out of range"));
        }
        let scaled: Vec<Array2<T>> = evals
            .iter()
            .map(|e| self.scaler.transform_rows(*e))
            .collect::<Result<_>>()?;
        let m = self.n_train();
        let k = self.kernel.base().prepare();
        let centered = self.targets.mapv(|v| v - self.target_offset);
        let mut gram = Array2::<T>::zeros((m, m));
        let mut cross: Vec<Array2<T>> = scaled.iter().map(|e| Array2::zeros((e.nrows(), m))).collect();

        let mut targets: Vec<(usize, usize)> = keep.iter().copied().enumerate().map(|(i, k)| (k, i)).collect();
        targets.sort_unstable();
        let mut out: Vec<Vec<Array1<T>>> = vec![Vec::new(); keep.len()];
        let mut added = 0;
        for (kk, slot) in targets {
            while added < kk {
                let col = order[added];
                let train_col: Vec<T> = self.inputs.column(col).to_vec();
                gram.axis_iter_mut(Axis(0))
                    .into_par_iter()
                    .enumerate()
                    .for_each(|(a, mut row)| {
                        let ya = train_col[a];
                        for b in 0..=a {
                            let d = ya - train_col[b];
                            row[b] += k.eval_sq(d * d);
                        }
                    });
                for (c, e) in cross.iter_mut().zip(&scaled) {
                    let eval_col = e.column(col);
                    c.axis_iter_mut(Axis(0))
                        .into_par_iter()
                        .enumerate()
                        .for_each(|(a, mut row)| {
                            let ya = eval_col[a];
                            for (dst, &yb) in row.iter_mut().zip(&train_col) {
                                let d = ya - yb;
                                *dst += k.eval_sq(d * d);
                            }
                        });
                }
                added += 1;
            }
            let mut system = gram.clone();
            for i in 0..m {
                system[[i, i]] += self.delta;
            }
            let chol = Cholesky::factor(&system).map_err(|pivot| Error::NotPositiveDefinite {
                pivot,
                delta: self.delta.to_f64_lossy(),
            })?;
            let coef = chol.solve(centered.view());
            out[slot] = cross
                .iter()
                .map(|c| c.dot(&coef).mapv(|v| v + self.target_offset))
                .collect();
        }
        Ok(out)
    }
}

/// Root mean squared residual of `model` on an evaluation set.
pub fn rmse<T: Scalar>(model: &TrainedGpr<T>, x: ArrayView2<T>, f: ArrayView1<T>) -> Result<T> {
    check_len(x.nrows(), f.len())?;
    let pred = model.predict_rows(x)?;
    rmse_of(pred.view(), f)
}

/// Root mean squared difference of two equal-length vectors.
pub fn rmse_of<T: Scalar>(pred: ArrayView1<T>, truth: ArrayView1<T>) -> Result<T> {
    check_len(truth.len(), pred.len())?;
    if truth.is_empty() {
        return Err(domain("empty evaluation set"));
    }
    let ss = pred
        .iter()
        .zip(truth.iter())
        .map(|(&p, &t)| (p - t) * (p - t))
        .sum::<T>();
    Ok((ss / T::from_usize_lossy(truth.len())).sqrt())
}

/// On-disk container for a trained model together with its component statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedGpr<T> {
    pub format: String,
    pub model: TrainedGpr<T>,
    pub stats: ComponentStats<T>,
}

pub const GPR_FORMAT: &str = "addgpr.gpr.v1";

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> SavedGpr<T> {
    pub fn new(model: TrainedGpr<T>) -> Self {
        let stats = model.component_stats();
        Self {
            format: GPR_FORMAT.to_string(),
            model,
            stats,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let out: Self = serde_json::from_str(text)?;
        if out.format != GPR_FORMAT {
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
