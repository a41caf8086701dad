//! Dense operators and the lattice site bookkeeping attached to them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Real, C};

/// What an [`OperatorMatrix`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Hamiltonian,
    Symmetry,
    Projector,
}

/// Row-major numbering of the sites of an `n x n` lattice with some sites removed.
///
/// Rows and columns are 1-based; row 1 is the bottom row and column 1 the left
/// column. Removed sites are skipped, so indices stay dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteMap {
    n: usize,
    removed: Vec<(usize, usize)>,
    sites: Vec<(usize, usize)>,
    lookup: Vec<Option<usize>>,
    connected: bool,
}

impl SiteMap {
    pub fn new(n: usize, removed: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLattice(format!(
                "n must be at least 2, got {n}"
            )));
        }
        let mut lookup = vec![Some(0); n * n];
        let mut sorted = Vec::with_capacity(removed.len());
        for &(row, col) in removed {
            if row == 0 || col == 0 || row > n || col > n {
                return Err(Error::InvalidLattice(format!(
                    "removed site ({row}, {col}) lies outside the {n}x{n} lattice"
                )));
            }
            let slot = &mut lookup[(row - 1) * n + (col - 1)];
            if slot.is_none() {
                return Err(Error::InvalidLattice(format!(
                    "site ({row}, {col}) removed twice"
                )));
            }
            *slot = None;
            sorted.push((row, col));
        }
        if sorted.len() == n * n {
            return Err(Error::InvalidLattice("every site was removed".into()));
        }
        sorted.sort_unstable();

        let mut sites = Vec::with_capacity(n * n - sorted.len());
        for row in 1..=n {
            for col in 1..=n {
                let slot = &mut lookup[(row - 1) * n + (col - 1)];
                if slot.is_some() {
                    *slot = Some(sites.len());
                    sites.push((row, col));
                }
            }
        }
        let mut map = SiteMap {
            n,
            removed: sorted,
            sites,
            lookup,
            connected: true,
        };
        map.connected = map.count_components() == 1;
        Ok(map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Removed sites, sorted.
    pub fn removed(&self) -> &[(usize, usize)] {
        &self.removed
    }

    pub fn sites(&self) -> &[(usize, usize)] {
        &self.sites
    }

    pub fn index(&self, row: usize, col: usize) -> Result<usize> {
        self.get(row, col).ok_or(Error::NoSuchSite { row, col })
    }

    pub fn get(&self, row: usize, col: usize) -> Option<usize> {
        if row == 0 || col == 0 || row > self.n || col > self.n {
            return None;
        }
        self.lookup[(row - 1) * self.n + (col - 1)]
    }

    pub fn site(&self, index: usize) -> (usize, usize) {
        self.sites[index]
    }

    /// True for sites on the outer frame of the lattice.
    pub fn is_boundary(&self, index: usize) -> bool {
        let (row, col) = self.sites[index];
        row == 1 || col == 1 || row == self.n || col == self.n
    }

    /// False when the removals split the nearest-neighbour graph. Such lattices
    /// are still built; this is the warning flag.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Whether the removals are invariant under the left-right mirror `col -> n + 1 - col`.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.removed
            .iter()
            .all(|&(row, col)| self.removed.binary_search(&(row, self.n + 1 - col)).is_ok())
    }

    fn count_components(&self) -> usize {
        let mut seen = vec![false; self.sites.len()];
        let mut components = 0;
        let mut stack = Vec::new();
        for start in 0..self.sites.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (row, col) = self.sites[k];
                let neighbours = [
                    (row + 1, col),
                    (row.wrapping_sub(1), col),
                    (row, col + 1),
                    (row, col.wrapping_sub(1)),
                ];
                for (r, c) in neighbours {
                    if let Some(j) = self.get(r, c) {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        components
    }
}

/// Dense complex square matrix tagged with its role.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    matrix: DMatrix<C<T>>,
    role: Role,
    site_map: Option<SiteMap>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn new(matrix: DMatrix<C<T>>, role: Role) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if !matrix.iter().all(is_finite) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(OperatorMatrix {
            matrix,
            role,
            site_map: None,
        })
    }

    /// Attaches lattice bookkeeping; the map must cover exactly `dim` sites.
    pub fn with_site_map(mut self, site_map: SiteMap) -> Result<Self> {
        if site_map.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: site_map.len(),
            });
        }
        self.site_map = Some(site_map);
        Ok(self)
    }

    pub(crate) fn from_parts(matrix: DMatrix<C<T>>, role: Role, site_map: Option<SiteMap>) -> Self {
        OperatorMatrix {
            matrix,
            role,
            site_map,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C<T>> {
        self.matrix
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn site_map(&self) -> Option<&SiteMap> {
        self.site_map.as_ref()
    }

    /// Same operator with a different role tag.
    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn transpose(&self) -> DMatrix<C<T>> {
        self.matrix.transpose()
    }

    pub fn adjoint(&self) -> DMatrix<C<T>> {
        self.matrix.adjoint()
    }
}
