//! Series arrays of Josephson junctions driven by a common bias current and
//! shunted by an LRC load.

pub mod circuit;
pub mod fourier;
pub mod natural;
pub mod params;
pub mod reduced;

pub use circuit::{full_circuit_rhs, CircuitModel, CircuitState, LoadStart};
pub use fourier::{fourier_A, fourier_series, fourier_sine, response_B_beta, DEFAULT_QUADRATURE_POINTS};
pub use natural::{phi_of_psi, psi_of_phi, sin_phi_of_psi};
pub use params::{
    dimensionless_coeffs, natural_frequency, scaled_load, DimensionlessJunction, Junction, JunctionArraySpec,
    LoadCircuit, FLUX_QUANTUM,
};
pub use reduced::{
    identical_coupling, reduced_coefficients, reduced_drift, CouplingSign, ReducedModel,
    IDENTICAL_TOLERANCE,
};
