//! Stationary base covariances and HDMR-type additive kernels built from them.
//!
//! An [`AdditiveKernelSpec`] is a sum of one base kernel applied to several
//! coordinate subsets. Subsets are stored 0-based; the text representation
//! prints them 1-based, matching the usual `x1..xD` column naming.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, domain, Error, Result};
use crate::num::Scalar;
use crate::textfmt;

/// Closed-form members of the Matern family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// nu = 1/2
    Exponential,
    /// nu = 3/2
    Matern32,
    /// nu = 5/2
    Matern52,
    /// nu -> infinity
    SquaredExponential,
}

impl KernelFamily {
    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Exponential => "exponential",
            KernelFamily::Matern32 => "matern32",
            KernelFamily::Matern52 => "matern52",
            KernelFamily::SquaredExponential => "squared_exponential",
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exponential" | "matern12" | "exp" => Ok(KernelFamily::Exponential),
            "matern32" => Ok(KernelFamily::Matern32),
            "matern52" => Ok(KernelFamily::Matern52),
            "squared_exponential" | "se" | "rbf" | "gaussian" => {
                Ok(KernelFamily::SquaredExponential)
            }
            other => Err(domain(format!("unknown kernel family `{other}`"))),
        }
    }
}

/// A base covariance: family, log length scale and amplitude.
///
/// The length scale is `exp(log_length_scale)`, so the squared exponential reads
/// `A * exp(-r^2 / (2 exp(l)^2))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec<T> {
    pub family: KernelFamily,
    pub log_length_scale: T,
    pub amplitude: T,
}

impl<T: Scalar> KernelSpec<T> {
    pub fn new(family: KernelFamily, log_length_scale: T) -> Self {
        Self {
            family,
            log_length_scale,
            amplitude: T::one(),
        }
    }

    pub fn squared_exponential(log_length_scale: T) -> Self {
        Self::new(KernelFamily::SquaredExponential, log_length_scale)
    }

    pub fn with_amplitude(mut self, amplitude: T) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn length_scale(&self) -> T {
        self.log_length_scale.exp()
    }

    /// Covariance at distance `r`.
    pub fn eval(&self, r: T) -> Result<T> {
        if !r.is_finite() || r < T::zero() {
            return Err(domain(format!("distance must be finite and nonnegative, got {r}")));
        }
        Ok(self.prepare().eval_sq(r * r))
    }

    pub(crate) fn prepare(&self) -> PreparedKernel<T> {
        let l = self.log_length_scale.exp();
        PreparedKernel {
            family: self.family,
            amplitude: self.amplitude,
            l,
            two_l2: T::lit(2.0) * l * l,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.log_length_scale.is_finite() {
            return Err(domain("log length scale must be finite"));
        }
        if !(self.amplitude > T::zero()) || !self.amplitude.is_finite() {
            return Err(domain("amplitude must be positive and finite"));
        }
        Ok(())
    }
}

/// Base kernel with the length-scale reciprocals precomputed.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PreparedKernel<T> {
    family: KernelFamily,
    amplitude: T,
    l: T,
    two_l2: T,
}

impl<T: Scalar> PreparedKernel<T> {
    /// Covariance from a squared distance.
    #[inline]
    pub(crate) fn eval_sq(&self, r2: T) -> T {
        match self.family {
            KernelFamily::SquaredExponential => self.amplitude * (-(r2 / self.two_l2)).exp(),
            KernelFamily::Exponential => {
                let s = r2.sqrt() / self.l;
                self.amplitude * (-s).exp()
            }
            KernelFamily::Matern32 => {
                let s = T::lit(3.0).sqrt() * r2.sqrt() / self.l;
                self.amplitude * (T::one() + s) * (-s).exp()
            }
            KernelFamily::Matern52 => {
                let s = T::lit(5.0).sqrt() * r2.sqrt() / self.l;
                self.amplitude * (T::one() + s + s * s / T::lit(3.0)) * (-s).exp()
            }
        }
    }
}

/// Free-function form of [`KernelSpec::eval`].
pub fn eval_base<T: Scalar>(spec: &KernelSpec<T>, r: T) -> Result<T> {
    spec.eval(r)
}

/// All strictly increasing `order`-tuples of `0..dim`, in lexicographic order.
pub fn subsets_of_order(dim: usize, order: usize) -> Result<Vec<Vec<usize>>> {
    if order == 0 || order > dim {
        return Err(domain(format!("coupling order {order} must lie in 1..={dim}")));
    }
    Ok((0..dim).combinations(order).collect())
}

/// A sum of one base kernel over coordinate subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditiveKernelSpec<T> {
    dim: usize,
    subsets: Vec<Vec<usize>>,
    base: KernelSpec<T>,
}

impl<T: Scalar> AdditiveKernelSpec<T> {
    pub fn new(dim: usize, subsets: Vec<Vec<usize>>, base: KernelSpec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("kernel dimension must be positive"));
        }
        if subsets.is_empty() {
            return Err(domain("additive kernel needs at least one subset"));
        }
        base.validate()?;
        for s in &subsets {
            if s.is_empty() {
                return Err(domain("empty coordinate subset"));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(domain(format!("subset {s:?} is not strictly increasing")));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad, len: dim });
            }
        }
        let mut sorted: Vec<&Vec<usize>> = subsets.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("duplicate coordinate subset"));
        }
        Ok(Self { dim, subsets, base })
    }

    /// One singleton subset per coordinate.
    pub fn first_order(dim: usize, base: KernelSpec<T>) -> Result<Self> {
        Self::of_order(dim, 1, base)
    }

    /// Every subset of size `order`.
    pub fn of_order(dim: usize, order: usize, base: KernelSpec<T>) -> Result<Self> {
        Self::new(dim, subsets_of_order(dim, order)?, base)
    }

    /// The single full subset, i.e. a plain multidimensional kernel.
    pub fn full(dim: usize, base: KernelSpec<T>) -> Result<Self> {
        Self::new(dim, vec![(0..dim).collect()], base)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn base(&self) -> &KernelSpec<T> {
        &self.base
    }

    pub fn is_first_order(&self) -> bool {
        self.subsets.len() == self.dim
            && self.subsets.iter().enumerate().all(|(i, s)| s.len() == 1 && s[0] == i)
    }

    /// Value at zero distance: the diagonal of the Gram matrix before regularization.
    pub fn zero_distance_value(&self) -> T {
        self.base.amplitude * T::from_usize_lossy(self.subsets.len())
    }

    pub fn eval(&self, x: &[T], x_prime: &[T]) -> Result<T> {
        check_len(self.dim, x.len())?;
        check_len(self.dim, x_prime.len())?;
        Ok(self.eval_prepared(&self.base.prepare(), x, x_prime))
    }

    #[inline]
    pub(crate) fn eval_prepared(&self, k: &PreparedKernel<T>, x: &[T], x_prime: &[T]) -> T {
        let mut acc = T::zero();
        for s in &self.subsets {
            acc += k.eval_sq(subset_sq_dist(s, x, x_prime));
        }
        acc
    }

    /// Per-subset covariance terms of `k(x, x')`, in subset order.
    pub(crate) fn subset_terms<'a>(
        &'a self,
        k: &'a PreparedKernel<T>,
        x: &'a [T],
        x_prime: &'a [T],
    ) -> impl Iterator<Item = T> + 'a {
        self.subsets.iter().map(move |s| k.eval_sq(subset_sq_dist(s, x, x_prime)))
    }
}

#[inline]
fn subset_sq_dist<T: Scalar>(subset: &[usize], x: &[T], x_prime: &[T]) -> T {
    let mut r2 = T::zero();
    for &i in subset {
        let d = x[i] - x_prime[i];
        r2 += d * d;
    }
    r2
}

/// Free-function form of [`AdditiveKernelSpec::eval`].
pub fn eval_additive<T: Scalar>(spec: &AdditiveKernelSpec<T>, x: &[T], x_prime: &[T]) -> Result<T> {
    spec.eval(x, x_prime)
}

impl<T: Scalar> fmt::Display for KernelSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family = {}", self.family)?;
        writeln!(f, "log_length_scale = {}", self.log_length_scale)?;
        writeln!(f, "amplitude = {}", self.amplitude)
    }
}

impl<T: Scalar> FromStr for KernelSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let mut log_l = None;
        let mut amplitude = T::one();
        for entry in textfmt::parse_key_values(s)? {
            match entry.key.as_str() {
                "family" => family = Some(entry.value.parse::<KernelFamily>()?),
                "log_length_scale" => log_l = Some(entry.parse_scalar::<T>()?),
                "amplitude" => amplitude = entry.parse_scalar::<T>()?,
                _ => {}
            }
        }
        let spec = KernelSpec {
            family: family.ok_or_else(|| domain("missing `family`"))?,
            log_length_scale: log_l.ok_or_else(|| domain("missing `log_length_scale`"))?,
            amplitude,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl<T: Scalar> fmt::Display for AdditiveKernelSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        writeln!(f, "dim = {}", self.dim)?;
        let subsets = self
            .subsets
            .iter()
            .map(|s| format!("({})", s.iter().map(|i| i + 1).join(",")))
            .join(" ");
        writeln!(f, "subsets = {subsets}")
    }
}

impl<T: Scalar> FromStr for AdditiveKernelSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let base: KernelSpec<T> = s.parse()?;
        let mut dim = None;
        let mut subsets = None;
        for entry in textfmt::parse_key_values(s)? {
            match entry.key.as_str() {
                "dim" => dim = Some(entry.parse_usize()?),
                "subsets" => subsets = Some(parse_subsets(&entry.value, entry.line)?),
                _ => {}
            }
        }
        let dim = dim.ok_or_else(|| domain("missing `dim`"))?;
        let subsets = subsets.ok_or_else(|| domain("missing `subsets`"))?;
        AdditiveKernelSpec::new(dim, subsets, base)
    }
}

fn parse_subsets(text: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let err = |message: String| Error::Parse { line, message };
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| err(format!("expected `(` in `{rest}`")))?;
        let close = open.find(')').ok_or_else(|| err("unterminated subset".into()))?;
        let subset = open[..close]
            .split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(err(format!("bad subset index `{}`", t.trim()))),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(subset);
        rest = open[close + 1..].trim_start();
    }
    Ok(out)
}
