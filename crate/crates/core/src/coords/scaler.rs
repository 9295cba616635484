use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, domain, Error, Result};
use crate::num::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalerMode {
    /// Offsets 0, scales 1.
    Identity,
    /// Zero mean, unit population variance.
    UnitVariance,
    /// Min-max map onto `[0, 1]`.
    UnitCube,
}

impl ScalerMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalerMode::Identity => "identity",
            ScalerMode::UnitVariance => "unit_variance",
            ScalerMode::UnitCube => "unit_cube",
        }
    }
}

impl fmt::Display for ScalerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "identity" | "none" => Ok(ScalerMode::Identity),
            "unit_variance" | "standardize" | "normalize" => Ok(ScalerMode::UnitVariance),
            "unit_cube" | "minmax" => Ok(ScalerMode::UnitCube),
            other => Err(domain(format!("unknown scaler mode `{other}`"))),
        }
    }
}

/// Per-column affine map `y -> (y - offset) / scale` fitted on training data.
///
/// Constant columns get scale 1 and are flagged as degenerate; they map to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler<T> {
    mode: ScalerMode,
    offsets: Vec<T>,
    scales: Vec<T>,
    degenerate: Vec<bool>,
}

impl<T: Scalar> FeatureScaler<T> {
    pub fn identity(columns: usize) -> Self {
        Self {
            mode: ScalerMode::Identity,
            offsets: vec![T::zero(); columns],
            scales: vec![T::one(); columns],
            degenerate: vec![false; columns],
        }
    }

    pub fn fit(mode: ScalerMode, y: ArrayView2<T>) -> Result<Self> {
        let (m, n) = y.dim();
        if m == 0 {
            return Err(domain("cannot fit a scaler on zero rows"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(domain("scaler input must be finite"));
        }
        let mut out = Self::identity(n);
        out.mode = mode;
        match mode {
            ScalerMode::Identity => {}
            ScalerMode::UnitVariance => {
                if m < 2 {
                    return Err(domain("unit-variance scaling needs at least 2 rows"));
                }
                let mf = T::from_usize_lossy(m);
                for (j, col) in y.axis_iter(Axis(1)).enumerate() {
                    let mean = col.iter().copied().sum::<T>() / mf;
                    let var = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / mf;
                    out.offsets[j] = mean;
                    let sd = var.sqrt();
                    if sd > T::zero() && col.iter().any(|&v| v != col[0]) {
                        out.scales[j] = sd;
                    } else {
                        out.degenerate[j] = true;
                    }
                }
            }
            ScalerMode::UnitCube => {
                for (j, col) in y.axis_iter(Axis(1)).enumerate() {
                    let lo = col.iter().copied().fold(T::infinity(), T::min);
                    let hi = col.iter().copied().fold(T::neg_infinity(), T::max);
                    out.offsets[j] = lo;
                    if hi > lo {
                        out.scales[j] = hi - lo;
                    } else {
                        out.degenerate[j] = true;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mode(&self) -> ScalerMode {
        self.mode
    }

    pub fn columns(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    pub fn degenerate(&self) -> &[bool] {
        &self.degenerate
    }

    #[inline]
    pub fn transform_value(&self, column: usize, v: T) -> T {
        (v - self.offsets[column]) / self.scales[column]
    }

    #[inline]
    pub fn inverse_value(&self, column: usize, v: T) -> T {
        v * self.scales[column] + self.offsets[column]
    }

    pub fn transform(&self, y: ArrayView1<T>) -> Result<Array1<T>> {
        check_len(self.columns(), y.len())?;
        Ok(Array1::from_iter(
            y.iter().enumerate().map(|(j, &v)| self.transform_value(j, v)),
        ))
    }

    pub fn transform_rows(&self, y: ArrayView2<T>) -> Result<Array2<T>> {
        check_len(self.columns(), y.ncols())?;
        let mut out = y.as_standard_layout().into_owned();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.transform_value(j, *v);
            }
        }
        Ok(out)
    }

    /// The scaler restricted to a subset of columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Self {
        Self {
            mode: self.mode,
            offsets: columns.iter().map(|&j| self.offsets[j]).collect(),
            scales: columns.iter().map(|&j| self.scales[j]).collect(),
            degenerate: columns.iter().map(|&j| self.degenerate[j]).collect(),
        }
    }

    /// Text block: a header comment, then `offset,scale,degenerate` per column.
    pub fn to_text(&self) -> String {
        let mut s = format!("# feature_scaler mode={} columns={}\n", self.mode, self.columns());
        s.push_str("offset,scale,degenerate\n");
        for j in 0..self.columns() {
            s.push_str(&format!("{},{},{}\n", self.offsets[j], self.scales[j], self.degenerate[j]));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| domain("empty scaler block"))?;
        let mode = header
            .split_whitespace()
            .find_map(|t| t.strip_prefix("mode="))
            .ok_or_else(|| Error::Parse { line: 1, message: "missing mode=".into() })?
            .parse()?;
        let mut out = Self::identity(0);
        out.mode = mode;
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with("offset") {
                continue;
            }
            let bad = || Error::Parse { line: i + 1, message: format!("bad scaler row `{line}`") };
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let o: f64 = parts[0].parse().map_err(|_| bad())?;
            let s: f64 = parts[1].parse().map_err(|_| bad())?;
            let d: bool = parts[2].parse().map_err(|_| bad())?;
            if !(s > 0.0) {
                return Err(bad());
            }
            out.offsets.push(T::lit(o));
            out.scales.push(T::lit(s));
            out.degenerate.push(d);
        }
        Ok(out)
    }
}
