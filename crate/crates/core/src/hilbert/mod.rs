//! Finite-dimensional position-basis realization of the symbol/operator
//! correspondence: wavefunctions, operator matrices, integral kernels.

pub mod kernel;
pub mod operator;
pub mod wavefunction;

pub use kernel::{
    kernel_from_u, kernel_from_u_mixed, kernel_from_u_momentum, kernel_from_u_momentum_out,
    unitarity_residual, Grid1, IntegralKernel, KernelVariant, TransformedField,
};
pub use operator::{
    canonical_symbol_spec, momentum_operator, operator_of_symbol, symbol_of_operator,
    OperatorMatrix,
};
pub use wavefunction::{
    interp_uniform, MomentumWavefunction, Samples1D, Wavefunction,
};
