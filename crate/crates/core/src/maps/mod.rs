//! The catalogue of canonical transformations: map families with their
//! coordinate evaluators, closed-form phase-space kernels, point kernels,
//! the implicit point-map solver, the generating-function solver, kernel
//! residual checks and star composition.

pub mod ccr;
pub mod contact;
pub mod func;
pub mod gen_t;
pub mod kernels;
pub mod residual;
pub mod spec;

pub use ccr::{ccr_report, CcrReport};
pub use contact::{contact_solve, rational_contact_residuals, ContactSolution};
pub use func::NamedFunc;
pub use gen_t::{generating_t, GeneratingT};
pub use kernels::{
    c_darboux, contact_kernel, darboux_apply, darboux_b, darboux_kernel, fourier_u,
    gauge_kernel, lp_mixed_kernel, sl2_delta_kernel, sl2_position_kernel_closed_form,
    sl2_u_value, u_contact, u_gauge, u_linear_potential, u_sl2, DarbouxVariant,
    FOURIER_PREFACTOR_ALTERNATE, FOURIER_PREFACTOR_FAMILY,
};
pub use residual::{compose_u, kernel_residual};
pub use spec::{MapDomain, MapFamily, MapSpec};
