//! Regularized Gram matrix assembly and its Cholesky solve.

use std::fmt;
use std::str::FromStr;

use log::warn;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;

use crate::error::{check_len, domain, Error, Result};
use crate::kernels::AdditiveKernelSpec;
use crate::num::Scalar;

/// `K + delta I` for a set of training inputs.
#[derive(Clone, Debug)]
pub struct GramSystem<T> {
    matrix: Array2<T>,
    delta: T,
}

impl<T: Scalar> GramSystem<T> {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.matrix
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// The same system with its diagonal shifted to a new `delta`.
    pub fn with_delta(&self, delta: T) -> Result<Self> {
        check_delta(delta)?;
        let mut matrix = self.matrix.clone();
        let shift = delta - self.delta;
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += shift;
        }
        Ok(Self { matrix, delta })
    }

    pub fn factor(&self) -> Result<Cholesky<T>> {
        Cholesky::factor(&self.matrix).map_err(|pivot| Error::NotPositiveDefinite {
            pivot,
            delta: self.delta.to_f64_lossy(),
        })
    }

    /// Solve `(K + delta I) c = f`.
    pub fn solve(&self, f: ArrayView1<T>) -> Result<Array1<T>> {
        check_len(self.size(), f.len())?;
        if f.iter().any(|v| !v.is_finite()) {
            return Err(domain("targets must be finite"));
        }
        Ok(self.factor()?.solve(f))
    }
}

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if !delta.is_finite() || delta < T::zero() {
        return Err(domain(format!("delta must be finite and nonnegative, got {delta}")));
    }
    Ok(())
}

/// Build `K + delta I` with `K[m, n] = k(x_m, x_n)` over the rows of `x`.
pub fn assemble<T: Scalar>(
    spec: &AdditiveKernelSpec<T>,
    x: ArrayView2<T>,
    delta: T,
) -> Result<GramSystem<T>> {
    check_delta(delta)?;
    let m = x.nrows();
    if m == 0 {
        return Err(domain("at least one training point is required"));
    }
    check_len(spec.dim(), x.ncols())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(domain("training inputs must be finite"));
    }
    let x = x.as_standard_layout();
    let rows: Vec<&[T]> = (0..m)
        .map(|i| &x.as_slice().expect("standard layout")[i * x.ncols()..(i + 1) * x.ncols()])
        .collect();
    let k = spec.base().prepare();

    // upper triangle, one task per row
    let upper: Vec<Vec<T>> = (0..m)
        .into_par_iter()
        .with_min_len(8)
        .map(|i| (i..m).map(|j| spec.eval_prepared(&k, rows[i], rows[j])).collect())
        .collect();

    let mut matrix = Array2::zeros((m, m));
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + off;
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
        matrix[(i, i)] += delta;
    }
    Ok(GramSystem { matrix, delta })
}

/// Lower-triangular Cholesky factor, stored row-major.
#[derive(Clone, Debug)]
pub struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factor a symmetric matrix, reading only its lower triangle.
    /// On failure returns the index of the first non-positive pivot.
    pub fn factor(a: &Array2<T>) -> std::result::Result<Self, usize> {
        let n = a.nrows();
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                l[i * n + j] = a[(i, j)];
            }
        }
        for j in 0..n {
            let (head, tail) = l.split_at_mut((j + 1) * n);
            let row_j = &mut head[j * n..];
            let d = row_j[j] - dot(&row_j[..j], &row_j[..j]);
            if !(d > T::zero()) || !d.is_finite() {
                return Err(j);
            }
            let d = d.sqrt();
            row_j[j] = d;
            let row_j = &row_j[..j];
            tail.par_chunks_mut(n).with_min_len(64).for_each(|row_i| {
                row_i[j] = (row_i[j] - dot(&row_i[..j], row_j)) / d;
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                l[i * n + j] = T::zero();
            }
        }
        Ok(Self { n, l })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> Array2<T> {
        Array2::from_shape_vec((self.n, self.n), self.l.clone()).expect("square")
    }

    pub fn solve(&self, b: ArrayView1<T>) -> Array1<T> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            y[i] = (y[i] - dot(row, &y[..i])) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        Array1::from(y)
    }
}

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

/// What to do when the Gram matrix fails to factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JitterPolicy {
    /// Report the failure.
    Fixed,
    /// Multiply delta by `factor` and retry, up to `max_delta`.
    Escalate { factor: f64, max_delta: f64 },
}

impl Default for JitterPolicy {
    fn default() -> Self {
        JitterPolicy::Fixed
    }
}

impl JitterPolicy {
    pub fn escalate() -> Self {
        JitterPolicy::Escalate {
            factor: 10.0,
            max_delta: 1e-2,
        }
    }
}

impl fmt::Display for JitterPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JitterPolicy::Fixed => f.write_str("fixed"),
            JitterPolicy::Escalate { factor, max_delta } => write!(f, "escalate:{factor}:{max_delta}"),
        }
    }
}

/// `fixed`, `escalate`, or `escalate:FACTOR:MAX_DELTA`.
impl FromStr for JitterPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim().parse().map_err(|_| domain(format!("bad number `{t}` in jitter policy `{s}`")))
        };
        let policy = match parts.as_slice() {
            ["fixed"] => JitterPolicy::Fixed,
            ["escalate"] => JitterPolicy::escalate(),
            ["escalate", factor, max] => JitterPolicy::Escalate { factor: num(factor)?, max_delta: num(max)? },
            _ => return Err(domain(format!("unrecognized jitter policy `{s}`"))),
        };
        if let JitterPolicy::Escalate { factor, max_delta } = policy {
            if !(factor > 1.0 && max_delta > 0.0) {
                return Err(domain("escalation needs factor > 1 and a positive ceiling"));
            }
        }
        Ok(policy)
    }
}

/// Smallest delta tried when escalating from zero.
const ESCALATION_FLOOR: f64 = 1e-12;

/// Solve under a jitter policy. Returns the coefficients and the delta actually used.
pub fn solve_with_policy<T: Scalar>(
    system: &GramSystem<T>,
    f: ArrayView1<T>,
    policy: JitterPolicy,
) -> Result<(Array1<T>, T)> {
    let mut current = system.clone();
    loop {
        match current.solve(f) {
            Ok(c) => return Ok((c, current.delta)),
            Err(Error::NotPositiveDefinite { pivot, delta }) => {
                let JitterPolicy::Escalate { factor, max_delta } = policy else {
                    return Err(Error::NotPositiveDefinite { pivot, delta });
                };
                let next = (delta * factor).max(ESCALATION_FLOOR);
                if next > max_delta * (1.0 + 1e-12) {
                    return Err(Error::NotPositiveDefinite { pivot, delta });
                }
                warn!("Gram matrix not positive definite at pivot {pivot} with delta {delta:e}; retrying with {next:e}");
                current = current.with_delta(T::lit(next))?;
            }
            Err(e) => return Err(e),
        }
    }
}
