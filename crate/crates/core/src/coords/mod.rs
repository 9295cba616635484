//! Redundant coordinates `y = W x` generated by fixed rules, and feature scaling.
//!
//! Two rules build `W` without any fitting: the pairwise scheme repeatedly
//! appends averages of all pairs of existing rows, and the Sobol scheme takes
//! consecutive points of a low-discrepancy sequence as rows. There are no biases.

mod direction_numbers;
mod scaler;
mod sobol;

use std::fmt;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, domain, Error, Result};
use crate::num::Scalar;
use crate::rng::SeededRng;

pub use scaler::{FeatureScaler, ScalerMode};
pub use sobol::{sobol_points, SobolSequence, MAX_SOBOL_DIM};

/// Seeded cap on the number of pairs appended per pairwise cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCap {
    pub max_pairs: usize,
    pub seed: u64,
}

/// How a [`CoordinateMap`] was generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Provenance {
    Identity,
    Pairwise { cycles: usize, cap: Option<PairCap> },
    Sobol { skip: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "provenance=identity"),
            Provenance::Pairwise { cycles, cap: None } => {
                write!(f, "provenance=pairwise cycles={cycles}")
            }
            Provenance::Pairwise { cycles, cap: Some(c) } => write!(
                f,
                "provenance=pairwise cycles={cycles} max_pairs={} seed={}",
                c.max_pairs, c.seed
            ),
            Provenance::Sobol { skip } => write!(f, "provenance=sobol skip={skip}"),
        }
    }
}

/// The `N x D` weight matrix of the hidden layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMap<T> {
    weights: Array2<T>,
    provenance: Provenance,
}

impl<T: Scalar> CoordinateMap<T> {
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("input dimension must be positive"));
        }
        Ok(Self {
            weights: Array2::eye(dim),
            provenance: Provenance::Identity,
        })
    }

    /// A map with explicit weights. Provenance is recorded as given.
    pub fn from_weights(weights: Array2<T>, provenance: Provenance) -> Result<Self> {
        if weights.nrows() == 0 || weights.ncols() == 0 {
            return Err(domain("coordinate map must be non-empty"));
        }
        if weights.iter().any(|v| !v.is_finite()) {
            return Err(domain("coordinate map rows must be finite"));
        }
        let d = weights.ncols();
        let leading_identity = weights.nrows() >= d
            && (0..d).all(|i| (0..d).all(|j| weights[(i, j)] == if i == j { T::one() } else { T::zero() }));
        match provenance {
            Provenance::Identity if weights.nrows() != d || !leading_identity => {
                Err(domain("identity provenance requires the D x D identity"))
            }
            Provenance::Pairwise { .. } if !leading_identity => {
                Err(domain("pairwise provenance requires leading identity rows"))
            }
            _ => Ok(Self { weights, provenance }),
        }
    }

    pub fn weights(&self) -> &Array2<T> {
        &self.weights
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Number of redundant coordinates (neurons).
    pub fn n_coords(&self) -> usize {
        self.weights.nrows()
    }

    /// Input dimension.
    pub fn dim(&self) -> usize {
        self.weights.ncols()
    }

    /// `W x`.
    pub fn apply(&self, x: ArrayView1<T>) -> Result<Array1<T>> {
        check_len(self.dim(), x.len())?;
        Ok(self.weights.dot(&x))
    }

    /// Maps every row of `x` (`M x D`) to an `M x N` matrix.
    pub fn apply_rows(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        check_len(self.dim(), x.ncols())?;
        Ok(x.dot(&self.weights.t()))
    }

    /// Append pair averages for `cycles` rounds.
    pub fn pairwise_expand(&self, cycles: usize) -> Result<Self> {
        self.expand(cycles, None)
    }

    /// As [`pairwise_expand`](Self::pairwise_expand), appending at most
    /// `cap.max_pairs` seeded-uniformly chosen pairs per cycle.
    pub fn pairwise_expand_capped(&self, cycles: usize, cap: PairCap) -> Result<Self> {
        if cap.max_pairs == 0 {
            return Err(domain("pair cap must be positive"));
        }
        self.expand(cycles, Some(cap))
    }

    fn expand(&self, cycles: usize, cap: Option<PairCap>) -> Result<Self> {
        if cycles < 1 {
            return Err(domain("pairwise expansion needs at least one cycle"));
        }
        if self.n_coords() < 2 {
            return Err(domain("pairwise expansion needs at least two rows"));
        }
        let done = match (self.provenance, cap) {
            (Provenance::Identity, _) => 0,
            (Provenance::Pairwise { cycles, cap: prev }, _) if prev == cap => cycles,
            (Provenance::Pairwise { .. }, _) => {
                return Err(domain("cannot continue a pairwise expansion with a different cap"))
            }
            (Provenance::Sobol { .. }, _) => {
                return Err(domain("pairwise expansion applies to identity or pairwise maps"))
            }
        };
        let mut rng = cap.map(|c| SeededRng::new(c.seed));
        let half = T::lit(0.5);
        let d = self.dim();
        let mut rows: Vec<Vec<T>> = self.weights.rows().into_iter().map(|r| r.to_vec()).collect();
        for _ in 0..cycles {
            let n = rows.len();
            let mut pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            if let (Some(c), Some(rng)) = (cap, rng.as_mut()) {
                if pairs.len() > c.max_pairs {
                    let mut keep = rng.sample_indices(pairs.len(), c.max_pairs);
                    keep.sort_unstable();
                    pairs = keep.into_iter().map(|k| pairs[k]).collect();
                }
            }
            for (i, j) in pairs {
                let avg = (0..d).map(|k| (rows[i][k] + rows[j][k]) * half).collect();
                rows.push(avg);
            }
        }
        let weights = Array2::from_shape_vec((rows.len(), d), rows.concat()).expect("rectangular");
        Ok(Self {
            weights,
            provenance: Provenance::Pairwise { cycles: done + cycles, cap },
        })
    }

    /// `n` rows taken from the Sobol' sequence in `[0,1)^dim`, after skipping `skip` points.
    pub fn sobol(dim: usize, n: usize, skip: u64) -> Result<Self> {
        Ok(Self {
            weights: sobol_points(dim, n, skip)?,
            provenance: Provenance::Sobol { skip },
        })
    }

    /// Restrict to a subset of rows, in the given order. Provenance is kept.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.n_coords()) {
            return Err(Error::IndexOutOfRange { index: bad, len: self.n_coords() });
        }
        Ok(Self {
            weights: self.weights.select(ndarray::Axis(0), rows),
            provenance: self.provenance,
        })
    }

    /// Text block: a provenance header comment, then one comma-separated row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# coordinate_map rows={} dim={} {}\n",
            self.n_coords(),
            self.dim(),
            self.provenance
        );
        for row in self.weights.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| domain("empty coordinate map block"))?;
        let field = |key: &str| {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        };
        let perr = |message: String| Error::Parse { line: 1, message };
        let num = |key: &str| -> Result<u64> {
            field(key)
                .ok_or_else(|| perr(format!("missing {key}=")))?
                .parse()
                .map_err(|_| perr(format!("bad {key}=")))
        };
        let provenance = match field("provenance") {
            Some("identity") => Provenance::Identity,
            Some("pairwise") => Provenance::Pairwise {
                cycles: num("cycles")? as usize,
                cap: match field("max_pairs") {
                    Some(_) => Some(PairCap { max_pairs: num("max_pairs")? as usize, seed: num("seed")? }),
                    None => None,
                },
            },
            Some("sobol") => Provenance::Sobol { skip: num("skip")? },
            _ => return Err(perr("missing or unknown provenance".into())),
        };
        let mut values = Vec::new();
        let mut rows = 0;
        let mut dim = None;
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|t| t.trim().parse::<f64>().map(T::lit))
                .collect::<std::result::Result<Vec<T>, _>>()
                .map_err(|_| Error::Parse { line: i + 2, message: format!("bad row `{line}`") })?;
            if *dim.get_or_insert(row.len()) != row.len() {
                return Err(Error::Parse { line: i + 2, message: "ragged row".into() });
            }
            values.extend(row);
            rows += 1;
        }
        let weights = Array2::from_shape_vec((rows, dim.unwrap_or(0)), values).expect("rectangular");
        Self::from_weights(weights, provenance)
    }
}

/// Free-function forms of the map operations.
pub fn pairwise_expand<T: Scalar>(map: &CoordinateMap<T>, cycles: usize) -> Result<CoordinateMap<T>> {
    map.pairwise_expand(cycles)
}

pub fn sobol_map<T: Scalar>(dim: usize, n: usize, skip: u64) -> Result<CoordinateMap<T>> {
    CoordinateMap::sobol(dim, n, skip)
}

pub fn apply_map<T: Scalar>(map: &CoordinateMap<T>, x: ArrayView1<T>) -> Result<Array1<T>> {
    map.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn pairwise_row_counts() {
        let id = CoordinateMap::<f64>::identity(3).unwrap();
        let counts: Vec<usize> = (1..=3).map(|k| id.pairwise_expand(k).unwrap().n_coords()).collect();
        assert_eq!(counts, vec![6, 21, 231]);
        // cycles compose
        let twice = id.pairwise_expand(1).unwrap().pairwise_expand(1).unwrap();
        assert_eq!(twice, id.pairwise_expand(2).unwrap());
        assert_eq!(twice.provenance(), Provenance::Pairwise { cycles: 2, cap: None });
    }

    #[test]
    fn pairwise_rows() {
        let m2 = CoordinateMap::<f64>::identity(2).unwrap().pairwise_expand(1).unwrap();
        assert_eq!(m2.weights(), &array![[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]);
        let m3 = CoordinateMap::<f64>::identity(3).unwrap().pairwise_expand(1).unwrap();
        assert_eq!(
            m3.weights().slice(ndarray::s![3.., ..]),
            array![[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]]
        );
        assert!(CoordinateMap::<f64>::identity(3).unwrap().pairwise_expand(0).is_err());
        assert!(CoordinateMap::<f64>::identity(1).unwrap().pairwise_expand(1).is_err());
    }

    #[test]
    fn capped_pairs_are_seeded_subsets() {
        let id = CoordinateMap::<f64>::identity(4).unwrap();
        let cap = PairCap { max_pairs: 10, seed: 9 };
        let a = id.pairwise_expand_capped(2, cap).unwrap();
        let b = id.pairwise_expand_capped(2, cap).unwrap();
        assert_eq!(a, b);
        // cycle 1: 4 + min(6, 10) = 10; cycle 2: 10 + min(45, 10) = 20
        assert_eq!(a.n_coords(), 20);
        let full = id.pairwise_expand(1).unwrap();
        assert_eq!(a.weights().slice(ndarray::s![..10, ..]), full.weights());
    }

    #[test]
    fn sobol_maps() {
        let m = CoordinateMap::<f64>::sobol(2, 1, 1).unwrap();
        assert_eq!(m.weights(), &array![[0.5, 0.5]]);
        let big = CoordinateMap::<f64>::sobol(3, 231, 1).unwrap();
        assert_eq!(big.weights().dim(), (231, 3));
        assert!(big.weights().iter().all(|&v| (0.0..1.0).contains(&v)));
        assert!(big.apply(array![0.0, 0.0, 0.0].view()).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sobol_points_examples() {
        let p = sobol_points::<f64>(1, 3, 1).unwrap();
        assert_eq!(p.column(0).to_vec(), vec![0.5, 0.75, 0.25]);
        assert_eq!(sobol_points::<f64>(2, 1, 0).unwrap(), array![[0.0, 0.0]]);
        assert_eq!(
            sobol_points::<f64>(2, 3, 1).unwrap(),
            array![[0.5, 0.5], [0.75, 0.25], [0.25, 0.75]]
        );
        assert!(matches!(
            sobol_points::<f64>(MAX_SOBOL_DIM + 1, 1, 0),
            Err(Error::UnsupportedDimension { .. })
        ));
        assert!(MAX_SOBOL_DIM >= 50);
        assert_eq!(sobol_points::<f32>(2, 3, 1).unwrap()[(1, 0)], 0.75f32);
    }

    #[test]
    fn apply_examples() {
        let id = CoordinateMap::<f64>::identity(2).unwrap();
        assert_eq!(id.apply(array![2.0, 4.0].view()).unwrap(), array![2.0, 4.0]);
        let m = id.pairwise_expand(1).unwrap();
        assert_eq!(m.apply(array![2.0, 4.0].view()).unwrap(), array![2.0, 4.0, 3.0]);
        assert!(m.apply(array![1.0].view()).is_err());
    }

    #[test]
    fn provenance_invariants() {
        assert!(CoordinateMap::from_weights(array![[1.0, 0.0], [1.0, 1.0]], Provenance::Identity).is_err());
        assert!(CoordinateMap::from_weights(
            array![[0.5, 0.5], [1.0, 0.0]],
            Provenance::Pairwise { cycles: 1, cap: None }
        )
        .is_err());
        assert!(CoordinateMap::from_weights(array![[f64::NAN]], Provenance::Sobol { skip: 0 }).is_err());
    }

    #[test]
    fn text_round_trip() {
        for m in [
            CoordinateMap::<f64>::identity(3).unwrap().pairwise_expand(2).unwrap(),
            CoordinateMap::<f64>::identity(4)
                .unwrap()
                .pairwise_expand_capped(1, PairCap { max_pairs: 3, seed: 5 })
                .unwrap(),
            CoordinateMap::<f64>::sobol(5, 17, 1).unwrap(),
            CoordinateMap::<f64>::identity(2).unwrap(),
        ] {
            let text = m.to_text();
            assert!(text.starts_with("# coordinate_map"));
            assert_eq!(CoordinateMap::<f64>::from_text(&text).unwrap(), m);
        }
    }

    proptest! {
        #[test]
        fn maps_are_linear(x in prop::collection::vec(-10.0f64..10.0, 3), n in 1usize..40) {
            let m = CoordinateMap::<f64>::sobol(3, n, 1).unwrap();
            let x = Array1::from(x);
            let y = m.apply(x.view()).unwrap();
            let y_neg = m.apply((-&x).view()).unwrap();
            prop_assert_eq!(y_neg, -y);
        }
    }
}
