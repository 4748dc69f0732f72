//! weylkit: phase-space quantization at desk scale.
//!
//! The crate is organized around one exact layer and several numeric layers:
//!
//! * [`symbolic`] — polynomial symbols with formal ħ grading, star products,
//!   Moyal/Poisson brackets, operator words and their differential images,
//!   and exponential flows. Everything here is exact.
//! * [`grid`] — complex samples on rectangular phase-space grids, truncated
//!   star products with finite-difference derivatives, Wigner transforms.
//! * [`hilbert`] — position-grid wavefunctions and operator matrices, the
//!   symbol/operator transform pair, integral kernels and their actions.
//! * [`maps`] — the catalogue of canonical transformations with closed-form
//!   kernels, the implicit point-map solver, the generating-function solver,
//!   kernel residuals and composition.
//! * [`propagator`] — phase-space propagators from generator flows and from
//!   kernels, and the cubic-flow worked case with its Airy reduction.
//!
//! Numeric modules are generic over the floating type via [`scalar::Real`];
//! the exact layer is generic over the coefficient ring via
//! [`scalar::Coeff`]. The aliases below fix the defaults used by the CLI.

pub mod error;
pub mod grid;
pub mod hilbert;
pub mod maps;
pub mod propagator;
pub mod scalar;
pub mod symbolic;

pub use error::Error;

/// Default floating scalar.
pub type Real = f64;
/// Default complex number.
pub type C64 = num_complex::Complex<f64>;
/// Exact coefficient ring (Gaussian rationals).
pub type Exact = scalar::ExactC;

/// Exact polynomial symbol with the default coefficient ring.
pub type Symbol = symbolic::PolySymbol<Exact>;
/// Operator word with the default coefficient ring.
pub type Word = symbolic::OperatorWord<Exact>;
/// Differential image with the default coefficient ring.
pub type Image = symbolic::BoppOperator<Exact>;

/// Grid types at the default precision.
pub type GridSpec = grid::GridSpec<Real>;
pub type GridSymbol = grid::GridSymbol<Real>;
pub type Wavefunction = hilbert::Wavefunction<Real>;
pub type MomentumWavefunction = hilbert::MomentumWavefunction<Real>;
pub type OperatorMatrix = hilbert::OperatorMatrix<Real>;
pub type IntegralKernel = hilbert::IntegralKernel<Real>;
pub type MapSpec = maps::MapSpec;
