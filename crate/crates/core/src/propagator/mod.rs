//! Phase-space propagators: generator-flow realizations, kernel-derived
//! star sandwiches, dense tables at reduced resolution, and the worked
//! cubic-shear case with its Airy reduction.

pub mod airy;
pub mod flow;
pub mod kernel;
pub mod u30;

pub use airy::{airy_ai, cubic_phase_integral_closed, cubic_phase_integral_quadrature};
pub use flow::{interp2, propagator_apply_flow};
pub use kernel::{
    apply_propagator, dense_from_star, propagator_from_kernel, star_inverse, PropagatorKernel,
};
pub use u30::{u30_case, u30_transform_momentum, U30Report};
