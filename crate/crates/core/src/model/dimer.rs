use nalgebra::{dmatrix, DMatrix};

use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, Role};
use crate::scalar::{is_finite, Real, C};

/// Complex field `b` of the pseudo-spin Hamiltonian `b . sigma`, in units of
/// a reference coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerSpec<T: Real> {
    pub b1: C<T>,
    pub b2: C<T>,
    pub b3: C<T>,
}

impl<T: Real> DimerSpec<T> {
    pub fn new(b1: C<T>, b2: C<T>, b3: C<T>) -> Self {
        DimerSpec { b1, b2, b3 }
    }

    pub fn is_hermitian(&self) -> bool {
        [self.b1, self.b2, self.b3]
            .iter()
            .all(|b| b.im == T::zero())
    }

    /// `b1^2 + b2^2 + b3^2`; the eigenvalues are its two square roots.
    pub fn discriminant(&self) -> C<T> {
        self.b1 * self.b1 + self.b2 * self.b2 + self.b3 * self.b3
    }

    fn validate(&self) -> Result<()> {
        if [self.b1, self.b2, self.b3].iter().all(is_finite) {
            Ok(())
        } else {
            Err(Error::NonFinite("dimer field"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

pub fn pauli<T: Real>(which: Pauli) -> DMatrix<C<T>> {
    let o = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    let i = C::new(T::zero(), T::one());
    match which {
        Pauli::X => dmatrix![o, one; one, o],
        Pauli::Y => dmatrix![o, -i; i, o],
        Pauli::Z => dmatrix![one, o; o, -one],
    }
}

/// `H = b1 sx + b2 sy + b3 sz = [[b3, b1 - i b2], [b1 + i b2, -b3]]`.
pub fn build_dimer<T: Real>(spec: &DimerSpec<T>) -> Result<OperatorMatrix<T>> {
    spec.validate()?;
    let i = C::new(T::zero(), T::one());
    let DimerSpec { b1, b2, b3 } = *spec;
    let m = dmatrix![b3, b1 - i * b2; b1 + i * b2, -b3];
    Ok(OperatorMatrix::from_parts(m, Role::Hamiltonian, None))
}

/// `Pi = b3 sx - b1 sz`, which anticommutes with the dimer Hamiltonian.
pub fn dimer_chiral<T: Real>(spec: &DimerSpec<T>) -> Result<OperatorMatrix<T>> {
    spec.validate()?;
    let m = pauli::<T>(Pauli::X) * spec.b3 - pauli::<T>(Pauli::Z) * spec.b1;
    Ok(OperatorMatrix::from_parts(m, Role::Symmetry, None))
}

/// `sigma_y`, the pseudo-chiral operator of every dimer.
pub fn dimer_pseudochiral<T: Real>() -> OperatorMatrix<T> {
    OperatorMatrix::from_parts(pauli(Pauli::Y), Role::Symmetry, None)
}
