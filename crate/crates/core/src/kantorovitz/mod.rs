//! The Kantorovitz expansion of `e^{−tH}` around `e^{−tA}`.
//!
//! With `B = ħ²V`, the heat semigroup factors as
//! `e^{−tH} = (Σ_m (−t)^m/m! X_m) e^{−tA}`, where `X_m` is built by
//! [`next_x`]. The defect of the diagonal kernel, normalised by the free
//! prefactor `P(s, ħ) = (4πħ²s)^{−n/2}(1+ħs)^n`, is
//!
//! `D = Σ_{m≥1} (−1)^{m+1} t^m/m! · (X_m e)(x, x) = ħ² Σ_k ħ^{2k} Υ_k(s, x)`
//!
//! where `e` is the Mehler exponential and `t = t(s, ħ)`.

mod diagonal;
mod laurent;
mod recursion;
mod upsilon;

pub use diagonal::{c_mu, diagonal_eval, diagonal_structure, DiagonalStructure};
pub use laurent::{GaussianLaurent, HSeries, SLaurent, ScalarSeries};
pub use recursion::{
    check_grading, closed_form_x, next_x, oscillator_generator, perturbed_generator, x_chain,
    KantorovitzOp, CLOSED_FORM_MAX,
};
pub use upsilon::{assemble_upsilon, defect_series, MAX_SYMBOLIC_ORDER};
