//! State representations, tensor-structure operations and state factories.

pub mod factory;
pub mod io;
pub mod ops;
pub mod state;

pub use factory::{
    basis_state, bell_state, derive_seed, ghz_state, random_isometry, random_mixed_state,
    random_mixed_state_with, random_pure_state, random_pure_state_with, random_unitary,
    rng_from_seed, w_state, werner_state, StateRng,
};
pub use io::{parse_state_json, state_to_json, StateFile, StateKind};
pub use ops::{
    amplitude_matrix, apply_local_unitary, hermitian_eigenvalues, hermitian_eigh,
    partial_trace, partial_transpose, partial_transpose_matrix, psd_sqrt, reduced_density,
    schmidt_coefficients, tensor_product, tensor_product_mixed, to_density, trace_norm,
};
pub use state::{Bipartition, CMatrix, CVector, DensityMatrix, PureState, SchmidtSpectrum, State};
