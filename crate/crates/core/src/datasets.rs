//! Regression datasets: CSV ingestion, a coupled synthetic surrogate, and
//! seeded train/test splits.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::num::Scalar;
use crate::rng::SeededRng;

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    pub name: String,
    /// Opaque unit label for targets, e.g. `cm-1`.
    pub units: Option<String>,
    x: Array2<T>,
    f: Array1<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(name: impl Into<String>, x: Array2<T>, f: Array1<T>) -> Result<Self> {
        if x.ncols() == 0 {
            return Err(domain("dataset needs at least one input column"));
        }
        if x.nrows() != f.len() {
            return Err(Error::DimensionMismatch { expected: x.nrows(), found: f.len() });
        }
        if x.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(domain("dataset values must be finite"));
        }
        Ok(Self {
            name: name.into(),
            units: None,
            x: x.as_standard_layout().into_owned(),
            f,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn inputs(&self) -> &Array2<T> {
        &self.x
    }

    pub fn targets(&self) -> &Array1<T> {
        &self.f
    }

    pub fn target_range(&self) -> T {
        let lo = self.f.iter().copied().fold(T::infinity(), T::min);
        let hi = self.f.iter().copied().fold(T::neg_infinity(), T::max);
        hi - lo
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize], name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            units: self.units.clone(),
            x: self.x.select(Axis(0), indices),
            f: self.f.select(Axis(0), indices),
        }
    }

    /// Write `x1,...,xD,f` CSV with shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        header.push("f".into());
        out.write_record(&header).map_err(csv_err)?;
        for (row, f) in self.x.rows().into_iter().zip(self.f.iter()) {
            let rec: Vec<String> = row.iter().chain(std::iter::once(f)).map(|v| v.to_string()).collect();
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { line, message: format!("{other:?}") },
    }
}

/// Parse a `x1,...,xD,f` CSV. Lines starting with `#` are ignored.
pub fn read_csv<T: Scalar, R: Read>(reader: R, name: &str) -> Result<Dataset<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let header_line = header.position().map(|p| p.line() as usize).unwrap_or(1);
    let n = header.len();
    let expected: Vec<String> = (1..n).map(|i| format!("x{i}")).chain(["f".to_string()]).collect();
    if n < 2 || header.iter().zip(&expected).any(|(h, e)| !h.eq_ignore_ascii_case(e)) {
        return Err(Error::Parse {
            line: header_line.max(1),
            message: format!("header must be `{}`, got `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let dim = n - 1;
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != n {
            return Err(Error::Parse { line, message: format!("expected {n} fields, found {}", rec.len()) });
        }
        for (i, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse { line, message: format!("bad number `{field}`") })?;
            if !v.is_finite() {
                return Err(Error::Parse { line, message: format!("non-finite value `{field}`") });
            }
            if i < dim {
                xs.push(T::lit(v));
            } else {
                fs.push(T::lit(v));
            }
        }
    }
    if fs.is_empty() {
        return Err(domain("dataset has no records"));
    }
    let x = Array2::from_shape_vec((fs.len(), dim), xs).expect("rectangular");
    Dataset::new(name, x, Array1::from(fs))
}

pub fn load_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<Dataset<T>> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    read_csv(std::fs::File::open(path)?, &name)
}

/// Parameters of the coupled synthetic surrogate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub beta_pair: f64,
    pub gamma_full: f64,
}

impl SynthSpec {
    pub fn new(dim: usize, count: usize, seed: u64) -> Self {
        Self {
            dim,
            count,
            seed,
            beta_pair: 0.5,
            gamma_full: 0.25,
        }
    }
}

/// `sum_i (x_i^2 + 0.1 x_i^3) + beta * sum_{i<j} x_i x_j + gamma * prod_i x_i`.
pub fn coupled_target(x: &[f64], beta_pair: f64, gamma_full: f64) -> f64 {
    let first: f64 = x.iter().map(|&v| v * v + 0.1 * v * v * v).sum();
    let mut pair = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            pair += x[i] * x[j];
        }
    }
    let full: f64 = x.iter().product();
    first + beta_pair * pair + gamma_full * full
}

/// Points uniform on `[-1, 1]^D` labelled by [`coupled_target`].
pub fn synth_coupled<T: Scalar>(spec: &SynthSpec) -> Result<Dataset<T>> {
    if spec.dim < 2 {
        return Err(domain("synthetic surrogate needs D >= 2"));
    }
    if spec.count == 0 {
        return Err(domain("synthetic surrogate needs at least one point"));
    }
    let mut rng = SeededRng::new(spec.seed);
    let mut xs = Vec::with_capacity(spec.count * spec.dim);
    let mut fs = Vec::with_capacity(spec.count);
    let mut row = vec![0.0; spec.dim];
    for _ in 0..spec.count {
        for v in row.iter_mut() {
            *v = rng.uniform(-1.0, 1.0);
        }
        fs.push(T::lit(coupled_target(&row, spec.beta_pair, spec.gamma_full)));
        xs.extend(row.iter().map(|&v| T::lit(v)));
    }
    let x = Array2::from_shape_vec((spec.count, spec.dim), xs).expect("rectangular");
    let name = format!(
        "synth_coupled_d{}_n{}_seed{}_b{}_g{}",
        spec.dim, spec.count, spec.seed, spec.beta_pair, spec.gamma_full
    );
    Dataset::new(name, x, Array1::from(fs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_size: usize,
    pub seed: u64,
}

/// Seeded sample without replacement for training; the rest, in original order, for testing.
pub fn split<T: Scalar>(data: &Dataset<T>, spec: SplitSpec) -> Result<(Dataset<T>, Dataset<T>)> {
    let n = data.len();
    if spec.train_size == 0 || spec.train_size >= n {
        return Err(domain(format!(
            "training size {} must lie in 1..{n}",
            spec.train_size
        )));
    }
    let train_idx = SeededRng::new(spec.seed).sample_indices(n, spec.train_size);
    let mut in_train = vec![false; n];
    for &i in &train_idx {
        in_train[i] = true;
    }
    let test_idx: Vec<usize> = (0..n).filter(|&i| !in_train[i]).collect();
    Ok((
        data.select(&train_idx, format!("{}_train", data.name)),
        data.select(&test_idx, format!("{}_test", data.name)),
    ))
}
