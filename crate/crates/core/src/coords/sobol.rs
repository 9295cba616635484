//! Unscrambled Sobol' points by the Gray-code construction.

use ndarray::Array2;

use super::direction_numbers::PRIMITIVES;
use crate::error::{domain, Error, Result};
use crate::num::Scalar;

const BITS: usize = 32;

/// Highest dimension covered by the shipped direction-number table.
pub const MAX_SOBOL_DIM: usize = PRIMITIVES.len() + 1;

/// Sobol' sequence state over `dim` dimensions, as 32-bit fixed-point integers.
#[derive(Clone, Debug)]
pub struct SobolSequence {
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl SobolSequence {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("Sobol dimension must be positive"));
        }
        if dim > MAX_SOBOL_DIM {
            return Err(Error::UnsupportedDimension {
                requested: dim,
                max: MAX_SOBOL_DIM,
            });
        }
        let directions = (0..dim).map(direction_vectors).collect();
        Ok(Self {
            directions,
            state: vec![0; dim],
            index: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    /// Index of the point the next call to [`next_point`](Self::next_point) returns.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// The current point as integers; the real value is `v / 2^32`.
    pub fn next_point(&mut self) -> Option<Vec<u32>> {
        if self.index >= 1u64 << BITS {
            return None;
        }
        let out = self.state.clone();
        // x_{n+1} = x_n ^ v_c, c = position of the lowest zero bit of n
        let c = self.index.trailing_ones() as usize;
        if c < BITS {
            for (s, v) in self.state.iter_mut().zip(&self.directions) {
                *s ^= v[c];
            }
        }
        self.index += 1;
        Some(out)
    }

    pub fn skip(&mut self, n: u64) {
        for _ in 0..n {
            self.next_point();
        }
    }
}

fn direction_vectors(axis: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if axis == 0 {
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1 << (BITS - 1 - k);
        }
        return v;
    }
    let p = &PRIMITIVES[axis - 1];
    let s = p.degree as usize;
    for k in 0..s.min(BITS) {
        v[k] = p.initial[k] << (BITS - 1 - k);
    }
    for k in s..BITS {
        let mut x = v[k - s] ^ (v[k - s] >> s);
        for i in 1..s {
            if (p.coeffs >> (s - 1 - i)) & 1 == 1 {
                x ^= v[k - i];
            }
        }
        v[k] = x;
    }
    v
}

/// `count` consecutive Sobol' points in `[0, 1)^dim`, after dropping the first `skip`.
pub fn sobol_points<T: Scalar>(dim: usize, count: usize, skip: u64) -> Result<Array2<T>> {
    if count == 0 {
        return Err(domain("Sobol point count must be positive"));
    }
    let mut seq = SobolSequence::new(dim)?;
    if skip + count as u64 > 1u64 << BITS {
        return Err(domain("requested Sobol points exceed 2^32"));
    }
    seq.skip(skip);
    let scale = 1.0 / (1u64 << BITS) as f64;
    let mut out = Array2::zeros((count, dim));
    for mut row in out.rows_mut() {
        let p = seq.next_point().expect("bounded above");
        for (dst, v) in row.iter_mut().zip(p) {
            let mut t = T::lit(v as f64 * scale);
            if t >= T::one() {
                // narrow types can round 1 - 2^-32 up to 1
                t = T::one() - T::epsilon();
            }
            *dst = t;
        }
    }
    Ok(out)
}
