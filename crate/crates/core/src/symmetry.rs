//! Residual checks for the generalized symmetry relations of a non-Hermitian
//! Hamiltonian and the spectral structure they imply.

use std::fmt;

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::{greedy_match, inverse, spectral_norm};
use crate::operator::OperatorMatrix;
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryKind {
    /// `H^dagger = S H S^-1`
    PseudoHermiticity,
    /// `H^T = -S H S^-1`
    PseudoChirality,
    /// `S H^dagger S^-1 = -H`
    PseudoAntiHermiticity,
    /// `{S, H} = 0`
    Chiral,
    /// `S conj(H) S^-1 = H`, i.e. `[S K, H] = 0` with `K` complex conjugation.
    Pt,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 5] = [
        SymmetryKind::PseudoHermiticity,
        SymmetryKind::PseudoChirality,
        SymmetryKind::PseudoAntiHermiticity,
        SymmetryKind::Chiral,
        SymmetryKind::Pt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::PseudoHermiticity => "pseudo_hermiticity",
            SymmetryKind::PseudoChirality => "pseudo_chirality",
            SymmetryKind::PseudoAntiHermiticity => "pseudo_anti_hermiticity",
            SymmetryKind::Chiral => "chiral",
            SymmetryKind::Pt => "pt",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport<T: Real> {
    pub kind: SymmetryKind,
    /// Spectral norm of the defect of the defining relation, divided by `|H|`.
    pub residual: T,
    pub holds: bool,
}

pub fn default_tolerance<T: Real>() -> T {
    T::lit(T::SYMMETRY_TOL)
}

pub fn check_relation<T: Real>(
    h: &OperatorMatrix<T>,
    s: &OperatorMatrix<T>,
    kind: SymmetryKind,
    tol: T,
) -> Result<SymmetryReport<T>> {
    let hm = h.matrix();
    let sm = s.matrix();
    if hm.nrows() != sm.nrows() {
        return Err(Error::DimensionMismatch {
            expected: hm.nrows(),
            found: sm.nrows(),
        });
    }
    let defect: DMatrix<C<T>> = match kind {
        SymmetryKind::Chiral => sm * hm + hm * sm,
        _ => {
            let s_inv = inverse(sm)?;
            match kind {
                SymmetryKind::PseudoHermiticity => hm.adjoint() - sm * hm * &s_inv,
                SymmetryKind::PseudoChirality => hm.transpose() + sm * hm * &s_inv,
                SymmetryKind::PseudoAntiHermiticity => sm * hm.adjoint() * &s_inv + hm,
                SymmetryKind::Pt => sm * hm.map(|z| z.conj()) * &s_inv - hm,
                SymmetryKind::Chiral => unreachable!(),
            }
        }
    };
    let scale = spectral_norm(hm);
    let residual = spectral_norm(&defect) / if scale > T::zero() { scale } else { T::one() };
    Ok(SymmetryReport {
        kind,
        residual,
        holds: residual < tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorParity {
    Symmetric,
    Antisymmetric,
    Neither,
}

/// Classifies `S` by `|S - S^T|` and `|S + S^T|` against `tol |S|` (Frobenius norms).
pub fn operator_parity<T: Real>(s: &OperatorMatrix<T>, tol: T) -> OperatorParity {
    let m = s.matrix();
    let t = m.transpose();
    let scale = m.norm();
    let bound = tol * if scale > T::zero() { scale } else { T::one() };
    if (m - &t).norm() <= bound {
        OperatorParity::Symmetric
    } else if (m + &t).norm() <= bound {
        OperatorParity::Antisymmetric
    } else {
        OperatorParity::Neither
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumSymmetry {
    /// `{w} = {-w}`
    Origin,
    /// `{w} = {-conj(w)}`
    RealAxisMirror,
}

/// Largest distance in a minimum-distance matching of `{w}` onto its image.
pub fn spectrum_mismatch<T: Real>(eigs: &[C<T>], kind: SpectrumSymmetry) -> T {
    let image: Vec<C<T>> = eigs
        .iter()
        .map(|&w| match kind {
            SpectrumSymmetry::Origin => -w,
            SpectrumSymmetry::RealAxisMirror => -w.conj(),
        })
        .collect();
    greedy_match(eigs.len(), image.len(), |i, j| {
        (eigs[i] - image[j]).modulus()
    })
    .into_iter()
    .fold(T::zero(), |acc, slot| {
        let d = slot.map_or(T::max_value().unwrap(), |(_, d)| d);
        if d > acc {
            d
        } else {
            acc
        }
    })
}

/// Whether the multiset of eigenvalues is closed under the given reflection within `tol` (absolute).
pub fn spectrum_symmetry<T: Real>(eigs: &[C<T>], kind: SpectrumSymmetry, tol: T) -> bool {
    spectrum_mismatch(eigs, kind) < tol
}
