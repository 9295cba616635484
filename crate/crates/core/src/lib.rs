//! Additive Gaussian process regression in redundant coordinates, read out as
//! a single-hidden-layer network.
//!
//! Inputs `x` are mapped to `y = W x` (pairwise averaging or Sobol weights),
//! scaled, and fitted with a first-order additive kernel. Each component
//! function of the fit is one neuron's activation; the output layer sums them
//! with unit weights and no bias.
//!
//! All numerical types are generic over [`num::Scalar`] (`f32` or `f64`);
//! the aliases below fix the precision.

pub mod coords;
pub mod datasets;
pub mod error;
pub mod gpr;
pub mod kernels;
pub mod neuralize;
pub mod num;
pub mod rng;
pub mod spd_solver;
pub mod textfmt;

pub use coords::{CoordinateMap, FeatureScaler, PairCap, Provenance, ScalerMode};
pub use datasets::{Dataset, SplitSpec, SynthSpec};
pub use error::{Error, Result};
pub use gpr::{ComponentStats, GprConfig, InputSpace, TrainedGpr};
pub use kernels::{AdditiveKernelSpec, KernelFamily, KernelSpec};
pub use neuralize::{CoordinateScheme, NeuralAdditiveModel, NeuralConfig, PruneScanRow, ScaleTarget};
pub use num::Scalar;
pub use rng::SeededRng;
pub use spd_solver::{GramSystem, JitterPolicy};

pub type KernelSpecF64 = KernelSpec<f64>;
pub type AdditiveKernelF64 = AdditiveKernelSpec<f64>;
pub type CoordinateMapF64 = CoordinateMap<f64>;
pub type GprConfigF64 = GprConfig<f64>;
pub type GprF64 = TrainedGpr<f64>;
pub type NeuralConfigF64 = NeuralConfig<f64>;
pub type NeuralModelF64 = NeuralAdditiveModel<f64>;
pub type DatasetF64 = Dataset<f64>;

pub type KernelSpecF32 = KernelSpec<f32>;
pub type AdditiveKernelF32 = AdditiveKernelSpec<f32>;
pub type CoordinateMapF32 = CoordinateMap<f32>;
pub type GprConfigF32 = GprConfig<f32>;
pub type GprF32 = TrainedGpr<f32>;
pub type NeuralConfigF32 = NeuralConfig<f32>;
pub type NeuralModelF32 = NeuralAdditiveModel<f32>;
pub type DatasetF32 = Dataset<f32>;
