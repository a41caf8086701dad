use nalgebra::{ComplexField, DMatrix};

use crate::operator::{OperatorMatrix, Role};
use crate::scalar::{i_pow, Real, C};

/// Rows in the magnetic unit cell: the row phase `i^m` repeats every four rows.
pub const MAGNETIC_CELL: usize = 4;

/// Bloch Hamiltonian of the infinite lossless lattice over the four-row
/// magnetic unit cell, lattice constant 1.
///
/// Uses the periodic gauge `psi(m, j) = exp(i (kx j + ky m)) u_m`, so every
/// vertical link carries `exp(+-i ky)` and the magnetic zone is
/// `kx in [-pi, pi]`, `ky in [-pi/4, pi/4]`.
pub fn bloch_hamiltonian<T: Real>(kx: T, ky: T, g: T) -> OperatorMatrix<T> {
    let g = C::new(g, T::zero());
    let ekx = C::new(T::zero(), kx).exp();
    let eky = C::new(T::zero(), ky).exp();
    let mut h = DMatrix::from_element(MAGNETIC_CELL, MAGNETIC_CELL, C::new(T::zero(), T::zero()));
    for r in 0..MAGNETIC_CELL {
        let phase = i_pow::<T>(r as i64 + 1);
        h[(r, r)] = g * (phase * ekx.conj() + phase.conj() * ekx);
        let s = (r + 1) % MAGNETIC_CELL;
        h[(r, s)] += g * eky;
        h[(s, r)] += g * eky.conj();
    }
    OperatorMatrix::from_parts(h, Role::Hamiltonian, None)
}
