//! Numerical ground truth: `H = A + ħ²V` diagonalised in the Hermite basis.

mod fit;
mod hermite;
mod model;

pub use fit::{fit_expansion, FitOptions, HSweepFit, DEFAULT_HBARS};
pub use hermite::{hermite_functions, position_matrix, position_powers};
pub use model::{
    auto_basis, build_hamiltonian, build_pointwise, ModelPotential, SpectralModel, Truncated,
    MAX_MATRIX_DIM, MAX_POTENTIAL_DEGREE, MIN_BASIS,
};
