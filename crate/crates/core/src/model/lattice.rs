//! Square lattice with a pi/2 flux per plaquette in the Landau gauge, edge
//! gain and loss, and its sublattice, parity and pseudo-chiral operators.
//!
//! Sites are `(row, col)` with 1-based indices, row 1 at the bottom. Row `m`
//! carries the horizontal hopping `<(m, j+1)| H |(m, j)> = g i^m`, the reverse
//! hopping is its conjugate, and vertical hoppings are `g`.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, Role, SiteMap};
use crate::scalar::{i_pow, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub enum GainProfile<T: Real> {
    /// `+i gamma` on column 1, `-i gamma` on column n.
    LeftGainRightLoss,
    /// `+i gamma` on columns 1 and n.
    BothEdgesGain,
    /// Imaginary on-site potential per site, row-major over all `n^2` sites
    /// (row 1 first). Entries of removed sites are ignored.
    Custom(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec<T: Real> {
    pub n: usize,
    pub g: T,
    pub gamma: T,
    pub gain_profile: GainProfile<T>,
    pub removed_sites: Vec<(usize, usize)>,
}

impl<T: Real> LatticeSpec<T> {
    /// Gain on the left edge, loss on the right edge, no removed sites.
    pub fn new(n: usize, g: T, gamma: T) -> Self {
        LatticeSpec {
            n,
            g,
            gamma,
            gain_profile: GainProfile::LeftGainRightLoss,
            removed_sites: Vec::new(),
        }
    }

    pub fn with_profile(mut self, profile: GainProfile<T>) -> Self {
        self.gain_profile = profile;
        self
    }

    pub fn with_removed(mut self, removed: Vec<(usize, usize)>) -> Self {
        self.removed_sites = removed;
        self
    }

    pub fn site_map(&self) -> Result<SiteMap> {
        SiteMap::new(self.n, &self.removed_sites)
    }

    pub fn validate(&self) -> Result<SiteMap> {
        if !self.g.is_finite() || self.g <= T::zero() {
            return Err(Error::InvalidLattice(format!(
                "g must be positive and finite, got {}",
                self.g
            )));
        }
        if !self.gamma.is_finite() || self.gamma < T::zero() {
            return Err(Error::InvalidLattice(format!(
                "gamma must be non-negative and finite, got {}",
                self.gamma
            )));
        }
        if let GainProfile::Custom(values) = &self.gain_profile {
            if values.len() != self.n * self.n {
                return Err(Error::InvalidLattice(format!(
                    "custom gain profile needs {} entries, got {}",
                    self.n * self.n,
                    values.len()
                )));
            }
            if !values.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite("custom gain profile"));
            }
        }
        self.site_map()
    }

    fn onsite(&self, row: usize, col: usize) -> T {
        let n = self.n;
        match &self.gain_profile {
            GainProfile::LeftGainRightLoss => {
                let mut v = T::zero();
                if col == 1 {
                    v += self.gamma;
                }
                if col == n {
                    v -= self.gamma;
                }
                v
            }
            GainProfile::BothEdgesGain => {
                if col == 1 || col == n {
                    self.gamma
                } else {
                    T::zero()
                }
            }
            GainProfile::Custom(values) => values[(row - 1) * n + (col - 1)],
        }
    }
}

/// Tight-binding Hamiltonian of the lattice described by `spec`.
///
/// Removing sites deletes their rows and columns. A removal pattern that
/// disconnects the lattice is accepted; [`SiteMap::is_connected`] reports it.
pub fn build_lattice<T: Real>(spec: &LatticeSpec<T>) -> Result<OperatorMatrix<T>> {
    let map = spec.validate()?;
    let dim = map.len();
    let g = C::new(spec.g, T::zero());
    let mut h = DMatrix::from_element(dim, dim, C::new(T::zero(), T::zero()));
    for (a, &(row, col)) in map.sites().iter().enumerate() {
        if let Some(b) = map.get(row, col + 1) {
            let hop = g * i_pow::<T>(row as i64);
            h[(b, a)] = hop;
            h[(a, b)] = hop.conj();
        }
        if let Some(b) = map.get(row + 1, col) {
            h[(a, b)] = g;
            h[(b, a)] = g;
        }
        h[(a, a)] = C::new(T::zero(), spec.onsite(row, col));
    }
    Ok(OperatorMatrix::from_parts(h, Role::Hamiltonian, Some(map)))
}

/// `C = P_A - P_B` together with the two sublattice projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Sublattice<T: Real> {
    pub c: OperatorMatrix<T>,
    pub pa: OperatorMatrix<T>,
    pub pb: OperatorMatrix<T>,
}

/// Sublattice A is the set of sites with even `row + col`.
pub fn sublattice_operator<T: Real>(n: usize, removed: &[(usize, usize)]) -> Result<Sublattice<T>> {
    let map = SiteMap::new(n, removed)?;
    let dim = map.len();
    let zero = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    let mut c = DMatrix::from_element(dim, dim, zero);
    let mut pa = c.clone();
    let mut pb = c.clone();
    for (k, &(row, col)) in map.sites().iter().enumerate() {
        if (row + col) % 2 == 0 {
            c[(k, k)] = one;
            pa[(k, k)] = one;
        } else {
            c[(k, k)] = -one;
            pb[(k, k)] = one;
        }
    }
    Ok(Sublattice {
        c: OperatorMatrix::from_parts(c, Role::Symmetry, Some(map.clone())),
        pa: OperatorMatrix::from_parts(pa, Role::Projector, Some(map.clone())),
        pb: OperatorMatrix::from_parts(pb, Role::Projector, Some(map)),
    })
}

/// Left-right mirror `(row, col) -> (row, n + 1 - col)` as a permutation matrix.
pub fn parity_operator<T: Real>(n: usize, removed: &[(usize, usize)]) -> Result<OperatorMatrix<T>> {
    let map = SiteMap::new(n, removed)?;
    if !map.is_mirror_symmetric() {
        return Err(Error::ParityUndefined);
    }
    let dim = map.len();
    let mut p = DMatrix::from_element(dim, dim, C::new(T::zero(), T::zero()));
    for (k, &(row, col)) in map.sites().iter().enumerate() {
        let image = map.index(row, n + 1 - col)?;
        p[(image, k)] = C::new(T::one(), T::zero());
    }
    Ok(OperatorMatrix::from_parts(p, Role::Symmetry, Some(map)))
}

/// `A = P C`. Antisymmetric with `A^2 = -I` for even `n`, symmetric with
/// `A^2 = I` for odd `n` (without removals).
pub fn lattice_pseudochiral<T: Real>(
    n: usize,
    removed: &[(usize, usize)],
) -> Result<OperatorMatrix<T>> {
    let p = parity_operator::<T>(n, removed)?;
    let c = sublattice_operator::<T>(n, removed)?.c;
    let a = p.matrix() * c.matrix();
    Ok(OperatorMatrix::from_parts(
        a,
        Role::Symmetry,
        p.site_map().cloned(),
    ))
}

pub fn site_index(row: usize, col: usize, n: usize, removed: &[(usize, usize)]) -> Result<usize> {
    SiteMap::new(n, removed)?.index(row, col)
}

/// Phase of `<s1|H|s2><s2|H|s3><s3|H|s4><s4|H|s1>` for the counterclockwise
/// loop `s1 = (row, col)`, `s2 = (row, col+1)`, `s3 = (row+1, col+1)`, `s4 = (row+1, col)`.
pub fn plaquette_flux<T: Real>(h: &OperatorMatrix<T>, row: usize, col: usize) -> Result<T> {
    let map = h.site_map().ok_or(Error::MissingSiteMap)?;
    let loop_sites = [
        (row, col),
        (row, col + 1),
        (row + 1, col + 1),
        (row + 1, col),
    ];
    let mut idx = [0usize; 4];
    for (slot, &(r, c)) in idx.iter_mut().zip(loop_sites.iter()) {
        *slot = map.index(r, c)?;
    }
    let m = h.matrix();
    let product = (0..4).fold(C::new(T::one(), T::zero()), |acc, k| {
        acc * m[(idx[k], idx[(k + 1) % 4])]
    });
    Ok(product.argument())
}
