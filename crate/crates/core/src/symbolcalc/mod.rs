//! Kohn–Nirenberg symbols of the operators `X_m`.
//!
//! Symbols use `D = −i∂`, so `∂^α` has symbol `i^{|α|} ξ^α`. Everything here
//! is computed from the symbol recursions alone and serves as an independent
//! route to quantities the operator tier also produces.

mod generic;
mod phase;
mod steps;

pub use generic::{
    generic_symbol_chain, invariant_structure, sphere_monomial_average, GenericSymbol,
    InvariantStructure, VFactors,
};
pub use phase::{GradedSymbol, PhaseSymbol, SymbolKey};
pub use steps::{
    check_symbol_grading, full_symbol_of, full_symbol_step, identity_symbol, initial_symbols,
    principal_of, principal_step, rho_odd, rho_odd_with, sigma_top, subprincipal_of,
    subprincipal_step, symbol_chain, symbol_of,
};
