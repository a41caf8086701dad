//! Builders for the Hamiltonians and symmetry operators of the two model systems.

mod bloch;
mod dimer;
mod lattice;

pub use bloch::bloch_hamiltonian;
pub use dimer::{build_dimer, dimer_chiral, dimer_pseudochiral, pauli, DimerSpec, Pauli};
pub use lattice::{
    build_lattice, lattice_pseudochiral, parity_operator, plaquette_flux, site_index,
    sublattice_operator, GainProfile, LatticeSpec, Sublattice,
};
