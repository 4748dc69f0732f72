//! Numeric phase-space functions on rectangular grids.

pub mod fd;
pub mod spec;
pub mod star;
pub mod symbol;
pub mod wigner;

pub use fd::{derivative_1d, fd_weights};
pub use spec::GridSpec;
pub use star::{grid_moyal_bracket, grid_star, StarResult};
pub use symbol::GridSymbol;
pub use wigner::{wigner_from_momentum, wigner_transform};
