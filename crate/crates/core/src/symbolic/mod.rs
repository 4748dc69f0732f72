//! Exact, truncation-free symbol algebra: star products, brackets, operator
//! words, their differential images, and exponential flows. All identities
//! here hold at the coefficient level; ħ is a formal grading.

pub mod bopp;
pub mod ccr;
pub mod flow;
pub mod hbar;
pub mod poly;
pub mod word;

pub use bopp::{bopp_image, monomial_image, BoppOperator};
pub use ccr::{
    ccr_exact, ccr_numeric, image_commutator_check, poisson_numeric, regular_lattice,
    solve_gauge_function, ExactCcrReport, ImageCommutatorReport, NumericCcrReport,
};
pub use flow::{
    characteristic_endpoint, flow_apply, flow_exact, flow_series, FlowMode, FlowOutcome,
    FlowSymbol, RationalSymbol,
};
pub use hbar::HbarSeries;
pub use poly::{
    bidiff, moyal_bracket_poly, poisson_bracket_poly, star_poly, PolySymbol,
};
pub use word::{symbol_of_word, Letter, OperatorWord};
