//! Non-Hermitian Hamiltonians, their generalized symmetries, and the
//! transpose-pairing expectation value `(A) = psi^T A psi`, which is a
//! constant of motion whenever `H^T = -A H A^-1`.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the `*64`
//! aliases below fix double precision.

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod operator;
pub mod scalar;
pub mod spectral;
pub mod symmetry;

pub use dynamics::{
    ehrenfest_rhs, evolve, evolve_eigenbasis, evolve_with, expectation, expectation_dagger,
    expectation_t, inner_t, intensities, site_intensities, total_power, uniform_times, Convention,
    EvolveOptions, ObservableSeries, Propagator, State, Trajectory,
};
pub use error::{Error, Result};
pub use model::{
    bloch_hamiltonian, build_dimer, build_lattice, dimer_chiral, dimer_pseudochiral,
    lattice_pseudochiral, parity_operator, pauli, plaquette_flux, site_index, sublattice_operator,
    DimerSpec, GainProfile, LatticeSpec, Pauli, Sublattice,
};
pub use operator::{OperatorMatrix, Role, SiteMap};
pub use scalar::{Real, C};
pub use spectral::{
    chirality_map, chirality_map_with, decompose, decompose_with, pair_modes, select_modes,
    ChiralityMap, DecomposeOptions, ModePairing, PairingOptions, SpectralDecomposition,
    SpectralWindow,
};
pub use symmetry::{
    check_relation, operator_parity, spectrum_mismatch, spectrum_symmetry, OperatorParity,
    SpectrumSymmetry, SymmetryKind, SymmetryReport,
};

pub type C64 = C<f64>;
pub type Operator64 = OperatorMatrix<f64>;
pub type Decomposition64 = SpectralDecomposition<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type DimerSpec64 = DimerSpec<f64>;
pub type LatticeSpec64 = LatticeSpec<f64>;
pub type State64 = State<f64>;

pub type Operator32 = OperatorMatrix<f32>;
pub type Decomposition32 = SpectralDecomposition<f32>;
