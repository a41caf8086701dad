//! Biorthogonal eigendecomposition, particle-hole pairing and the
//! pseudo-chirality map from right to left eigenstates.

use std::cmp::Ordering;

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, eigen, greedy_match, inverse, spectral_norm, vec_norm};
use crate::operator::{OperatorMatrix, SiteMap};
use crate::scalar::{Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeOptions<T: Real> {
    /// Modes with `|lbar^T r| < ep_threshold |lbar| |r|` are flagged as near an exceptional point.
    pub ep_threshold: T,
    /// Eigenvalues of `H` and `H^T` must match within `match_tol * |H|`.
    pub match_tol: T,
}

impl<T: Real> Default for DecomposeOptions<T> {
    fn default() -> Self {
        DecomposeOptions {
            ep_threshold: T::lit(T::EP_THRESHOLD),
            match_tol: T::lit(T::MATCH_TOL),
        }
    }
}

/// Eigenvalues `w` with right vectors `H r = w r` and left vectors
/// `H^T l = w l`, normalized so that `l_mu^T r_nu = delta_mu_nu` for every mode
/// away from an exceptional point.
///
/// Right vectors have unit 2-norm; their largest component is real and
/// positive. Modes are ordered by real part, then imaginary part.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Real> {
    eigenvalues: Vec<C<T>>,
    right: DMatrix<C<T>>,
    left: DMatrix<C<T>>,
    biorth_condition: Vec<T>,
    ep_flags: Vec<bool>,
    norm: T,
    site_map: Option<SiteMap>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[C<T>] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, mu: usize) -> C<T> {
        self.eigenvalues[mu]
    }

    pub fn right(&self, mu: usize) -> DVector<C<T>> {
        self.right.column(mu).into_owned()
    }

    pub fn left(&self, mu: usize) -> DVector<C<T>> {
        self.left.column(mu).into_owned()
    }

    /// Right eigenvectors as columns.
    pub fn right_vectors(&self) -> &DMatrix<C<T>> {
        &self.right
    }

    /// Left eigenvectors as columns.
    pub fn left_vectors(&self) -> &DMatrix<C<T>> {
        &self.left
    }

    /// `|lbar^T r| / (|lbar| |r|)` before normalization. For a degenerate
    /// block this is the smallest singular value of the block overlap matrix.
    pub fn biorth_condition(&self) -> &[T] {
        &self.biorth_condition
    }

    pub fn ep_flags(&self) -> &[bool] {
        &self.ep_flags
    }

    pub fn is_ep(&self, mu: usize) -> bool {
        self.ep_flags[mu]
    }

    pub fn has_ep(&self) -> bool {
        self.ep_flags.iter().any(|&f| f)
    }

    /// Spectral norm of the decomposed matrix.
    pub fn hamiltonian_norm(&self) -> T {
        self.norm
    }

    pub fn site_map(&self) -> Option<&SiteMap> {
        self.site_map.as_ref()
    }

    pub fn max_abs_eigenvalue(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |acc, w| {
            let m = w.modulus();
            if m > acc {
                m
            } else {
                acc
            }
        })
    }

    /// Expansion coefficients `b_mu = lbar_mu^T psi`.
    pub fn coefficients(&self, psi: &DVector<C<T>>) -> Result<Vec<C<T>>> {
        if psi.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: psi.len(),
            });
        }
        Ok((0..self.len())
            .map(|mu| bilinear(&self.left(mu), psi))
            .collect())
    }

    /// `sum_mu b_mu r_mu`.
    pub fn synthesize(&self, coefficients: &[C<T>]) -> Result<DVector<C<T>>> {
        if coefficients.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let b = DVector::from_column_slice(coefficients);
        Ok(&self.right * b)
    }

    /// Fraction of `|r_mu|^2` on the outer frame of the lattice.
    pub fn edge_fraction(&self, mu: usize) -> Result<T> {
        let map = self.site_map.as_ref().ok_or(Error::MissingSiteMap)?;
        self.check_mode(mu)?;
        let col = self.right.column(mu);
        let mut edge = T::zero();
        let mut total = T::zero();
        for (k, z) in col.iter().enumerate() {
            let w = z.norm_sqr();
            total += w;
            if map.is_boundary(k) {
                edge += w;
            }
        }
        Ok(if total > T::zero() {
            edge / total
        } else {
            T::zero()
        })
    }

    fn check_mode(&self, mu: usize) -> Result<()> {
        if mu < self.len() {
            Ok(())
        } else {
            Err(Error::NoSuchMode {
                index: mu,
                len: self.len(),
            })
        }
    }
}

pub fn decompose<T: Real>(h: &OperatorMatrix<T>) -> Result<SpectralDecomposition<T>> {
    decompose_with(h, &DecomposeOptions::default())
}

pub fn decompose_with<T: Real>(
    h: &OperatorMatrix<T>,
    opts: &DecomposeOptions<T>,
) -> Result<SpectralDecomposition<T>> {
    let m = h.matrix();
    let n = m.nrows();
    let norm = spectral_norm(m);
    let right = eigen(m)?;
    let left = eigen(&m.transpose())?;

    let matching = greedy_match(n, n, |i, j| (right.values[i] - left.values[j]).modulus());
    let tol = opts.match_tol * if norm > T::zero() { norm } else { T::one() };
    let mut partner = Vec::with_capacity(n);
    for (i, slot) in matching.iter().enumerate() {
        let (j, d) = slot.expect("square matching is complete");
        if d > tol && !(right.defective[i] && left.defective[j]) {
            return Err(Error::AmbiguousMatch {
                distance: d.as_f64(),
                tolerance: tol.as_f64(),
            });
        }
        partner.push(j);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (right.values[a], right.values[b]);
        x.re.partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
    });

    let eigenvalues: Vec<C<T>> = order.iter().map(|&k| right.values[k]).collect();
    let rvecs = DMatrix::from_fn(n, n, |r, c| right.vectors[(r, order[c])]);
    let mut lvecs = DMatrix::from_fn(n, n, |r, c| left.vectors[(r, partner[order[c]])]);
    let cluster: Vec<usize> = order.iter().map(|&k| right.cluster[k]).collect();
    let defective: Vec<bool> = order.iter().map(|&k| right.defective[k]).collect();

    let mut biorth_condition = vec![T::zero(); n];
    let mut ep_flags = vec![false; n];
    let mut done = vec![false; n];
    for start in 0..n {
        if done[start] {
            continue;
        }
        let block: Vec<usize> = (start..n)
            .filter(|&k| cluster[k] == cluster[start])
            .collect();
        block.iter().for_each(|&k| done[k] = true);
        let size = block.len();
        let r_block = DMatrix::from_fn(n, size, |r, c| rvecs[(r, block[c])]);
        let mut l_block = DMatrix::from_fn(n, size, |r, c| lvecs[(r, block[c])]);
        for mut col in l_block.column_iter_mut() {
            let nrm = col.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
            if nrm > T::zero() {
                col /= C::new(nrm, T::zero());
            }
        }
        let gram = l_block.transpose() * &r_block;
        let condition = if size == 1 {
            gram[(0, 0)].modulus()
        } else {
            gram.clone().svd(false, false).singular_values.iter().fold(
                T::max_value().unwrap(),
                |a, &s| {
                    if s < a {
                        s
                    } else {
                        a
                    }
                },
            )
        };
        let is_ep = condition < opts.ep_threshold || block.iter().any(|&k| defective[k]);
        if !is_ep {
            let fixed = if size == 1 {
                l_block / gram[(0, 0)]
            } else {
                let gram_inv =
                    inverse(&gram.transpose()).map_err(|_| Error::ExceptionalPoint(block[0]))?;
                l_block * gram_inv
            };
            for (c, &k) in block.iter().enumerate() {
                lvecs.set_column(k, &fixed.column(c));
            }
        } else {
            for (c, &k) in block.iter().enumerate() {
                lvecs.set_column(k, &l_block.column(c));
            }
        }
        for &k in &block {
            biorth_condition[k] = condition;
            ep_flags[k] = is_ep;
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        right: rvecs,
        left: lvecs,
        biorth_condition,
        ep_flags,
        norm,
        site_map: h.site_map().cloned(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingOptions<T: Real> {
    /// `|w_mu + w_nu| < pair_tol * max|w|` for a pair.
    pub pair_tol: T,
    /// `|w| < zero_tol * max|w|` for a zero mode.
    pub zero_tol: T,
}

impl<T: Real> Default for PairingOptions<T> {
    fn default() -> Self {
        PairingOptions {
            pair_tol: T::lit(T::PAIR_TOL),
            zero_tol: T::lit(T::ZERO_TOL),
        }
    }
}

impl<T: Real> PairingOptions<T> {
    fn absolute(&self, dec: &SpectralDecomposition<T>) -> (T, T) {
        let scale = dec.max_abs_eigenvalue();
        let scale = if scale > T::zero() { scale } else { T::one() };
        (self.pair_tol * scale, self.zero_tol * scale)
    }
}

/// Generalized particle-hole structure of a spectrum: pairs with
/// `w_mu = -w_nu`, zero modes (which are their own partners), and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModePairing {
    /// `(mu, nu)` with `mu < nu`.
    pub pairs: Vec<(usize, usize)>,
    pub zero_modes: Vec<usize>,
    pub unpaired: Vec<usize>,
}

impl ModePairing {
    /// Partner of `mu`; a zero mode is its own partner.
    pub fn partner(&self, mu: usize) -> Option<usize> {
        if self.zero_modes.contains(&mu) {
            return Some(mu);
        }
        self.pairs.iter().find_map(|&(a, b)| {
            if a == mu {
                Some(b)
            } else if b == mu {
                Some(a)
            } else {
                None
            }
        })
    }
}

pub fn pair_modes<T: Real>(
    dec: &SpectralDecomposition<T>,
    opts: &PairingOptions<T>,
) -> ModePairing {
    let (pair_tol, zero_tol) = opts.absolute(dec);
    let w = dec.eigenvalues();
    let mut out = ModePairing::default();
    let mut rest = Vec::new();
    for (k, z) in w.iter().enumerate() {
        if z.modulus() < zero_tol {
            out.zero_modes.push(k);
        } else {
            rest.push(k);
        }
    }
    let mut candidates = Vec::new();
    for (a, &i) in rest.iter().enumerate() {
        for &j in &rest[a + 1..] {
            let d = (w[i] + w[j]).modulus();
            if d < pair_tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then((a.1, a.2).cmp(&(b.1, b.2)))
    });
    let mut used = vec![false; w.len()];
    for (_, i, j) in candidates {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            out.pairs.push((i, j));
        }
    }
    out.pairs.sort_unstable();
    out.unpaired = rest.into_iter().filter(|&k| !used[k]).collect();
    out
}

/// Result of mapping a right eigenstate with a pseudo-chiral operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralityMap<T: Real> {
    /// Mode whose left eigenvector `A r_mu` is proportional to; `w_partner = -w_mu`.
    pub partner: usize,
    /// `A r_mu = c lbar_partner` in the gauge where `A r_partner = lbar_mu`.
    /// Gauge invariant; equals -1 for antisymmetric `A` and +1 for symmetric `A`.
    /// For a zero mode mapped onto itself this is the raw coefficient.
    pub coefficient: C<T>,
    /// `A r_mu = raw lbar_partner` in the decomposition's own normalization.
    pub raw: C<T>,
    /// `|A r_mu - raw lbar_partner| / |A r_mu|`.
    pub residual: T,
}

/// Residual above which `A r_mu` is not considered a left eigenvector.
pub fn default_map_tolerance<T: Real>() -> T {
    T::lit(T::SYMMETRY_TOL).sqrt()
}

pub fn chirality_map<T: Real>(
    dec: &SpectralDecomposition<T>,
    a: &OperatorMatrix<T>,
    mu: usize,
) -> Result<ChiralityMap<T>> {
    chirality_map_with(
        dec,
        a,
        mu,
        &PairingOptions::default(),
        default_map_tolerance(),
    )
}

pub fn chirality_map_with<T: Real>(
    dec: &SpectralDecomposition<T>,
    a: &OperatorMatrix<T>,
    mu: usize,
    opts: &PairingOptions<T>,
    map_tol: T,
) -> Result<ChiralityMap<T>> {
    dec.check_mode(mu)?;
    if a.dim() != dec.len() {
        return Err(Error::DimensionMismatch {
            expected: dec.len(),
            found: a.dim(),
        });
    }
    inverse(a.matrix())?;
    if dec.is_ep(mu) {
        return Err(Error::ExceptionalPoint(mu));
    }
    let (pair_tol, _) = opts.absolute(dec);
    let target = -dec.eigenvalue(mu);
    let candidates: Vec<usize> = (0..dec.len())
        .filter(|&nu| !dec.is_ep(nu) && (dec.eigenvalue(nu) - target).modulus() < pair_tol)
        .collect();
    if candidates.is_empty() {
        return Err(Error::NoPartner(mu));
    }
    let image = a.matrix() * dec.right(mu);
    let (nu, raw, residual) = candidates
        .iter()
        .map(|&nu| {
            let (c, r) = fit(&image, &dec.left(nu));
            (nu, c, r)
        })
        .min_by(|x, y| x.2.partial_cmp(&y.2).unwrap_or(Ordering::Equal))
        .expect("non-empty candidates");
    if residual > map_tol {
        return Err(Error::NotPseudoChiral {
            mode: mu,
            residual: residual.as_f64(),
        });
    }
    let coefficient = if nu == mu {
        raw
    } else {
        let back = a.matrix() * dec.right(nu);
        let (raw_back, back_residual) = fit(&back, &dec.left(mu));
        if back_residual > map_tol {
            return Err(Error::NotPseudoChiral {
                mode: nu,
                residual: back_residual.as_f64(),
            });
        }
        raw / raw_back
    };
    Ok(ChiralityMap {
        partner: nu,
        coefficient,
        raw,
        residual,
    })
}

/// Least-squares `c` in `v ~ c u` and the relative residual.
fn fit<T: Real>(v: &DVector<C<T>>, u: &DVector<C<T>>) -> (C<T>, T) {
    let uu = u.dotc(u);
    let c = u.dotc(v) / uu;
    let vn = vec_norm(v);
    let r = vec_norm(&(v - u * c));
    (c, if vn > T::zero() { r / vn } else { r })
}

/// Rectangle in the complex plane, bounds inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow<T: Real> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Real> SpectralWindow<T> {
    pub fn new(re_min: T, re_max: T, im_min: T, im_max: T) -> Self {
        SpectralWindow {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// Lower band gap of the lattice in units of `g`: `Re w in [-2.6, -1.1]`, `|Im w| <= 0.01`.
    pub fn lower_gap(g: T) -> Self {
        SpectralWindow::new(
            T::lit(-2.6) * g,
            T::lit(-1.1) * g,
            T::lit(-0.01) * g,
            T::lit(0.01) * g,
        )
    }

    /// Mirror image of [`SpectralWindow::lower_gap`] about the imaginary axis.
    pub fn upper_gap(g: T) -> Self {
        SpectralWindow::new(
            T::lit(1.1) * g,
            T::lit(2.6) * g,
            T::lit(-0.01) * g,
            T::lit(0.01) * g,
        )
    }

    pub fn contains(&self, w: C<T>) -> bool {
        w.re >= self.re_min && w.re <= self.re_max && w.im >= self.im_min && w.im <= self.im_max
    }

    fn validate(&self) -> Result<()> {
        let all = [self.re_min, self.re_max, self.im_min, self.im_max];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidWindow("bounds must be finite".into()));
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(Error::InvalidWindow(
                "lower bound exceeds upper bound".into(),
            ));
        }
        Ok(())
    }
}

/// Modes inside `window` whose edge fraction exceeds `edge_threshold`,
/// ordered by real part. An empty result is `Ok(vec![])`; a malformed window is an error.
pub fn select_modes<T: Real>(
    dec: &SpectralDecomposition<T>,
    window: &SpectralWindow<T>,
    edge_threshold: T,
) -> Result<Vec<usize>> {
    window.validate()?;
    if !edge_threshold.is_finite() || edge_threshold < T::zero() || edge_threshold > T::one() {
        return Err(Error::InvalidWindow(
            "edge threshold must lie in [0, 1]".into(),
        ));
    }
    let mut out = Vec::new();
    for mu in 0..dec.len() {
        if window.contains(dec.eigenvalue(mu))
            && !dec.is_ep(mu)
            && dec.edge_fraction(mu)? > edge_threshold
        {
            out.push(mu);
        }
    }
    // Already sorted by real part through the decomposition order.
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_dimer, dimer_pseudochiral, DimerSpec};
    use crate::operator::Role;
    use nalgebra::dmatrix;

    fn cx(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn dimer(b: [C<f64>; 3]) -> OperatorMatrix<f64> {
        build_dimer(&DimerSpec::new(b[0], b[1], b[2])).unwrap()
    }

    #[test]
    fn dimer_eigenvalues_are_plus_minus_root() {
        let b = [cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.1)];
        let dec = decompose(&dimer(b)).unwrap();
        let lambda = cx(2.99, 0.2).sqrt();
        let w = dec.eigenvalues();
        let d1 = (w[0] + lambda).modulus() + (w[1] - lambda).modulus();
        let d2 = (w[0] - lambda).modulus() + (w[1] + lambda).modulus();
        assert!(d1.min(d2) < 1e-12);
        assert!(!dec.has_ep());
    }

    #[test]
    fn exceptional_point_is_flagged() {
        let dec = decompose(&dimer([cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0)])).unwrap();
        assert!(dec.ep_flags().iter().all(|&f| f));
        assert!(dec.eigenvalues().iter().all(|w| w.modulus() < 1e-7));
        assert!(dec.biorth_condition().iter().all(|&c| c < 1e-6));
    }

    #[test]
    fn symmetric_matrix_has_parallel_left_and_right_vectors() {
        let h = OperatorMatrix::new(
            dmatrix![cx(1.0, 0.0), cx(0.5, 0.0), cx(0.0, 0.0);
                     cx(0.5, 0.0), cx(-0.3, 0.0), cx(0.2, 0.0);
                     cx(0.0, 0.0), cx(0.2, 0.0), cx(2.0, 0.0)],
            Role::Hamiltonian,
        )
        .unwrap();
        let dec = decompose(&h).unwrap();
        for mu in 0..3 {
            let (l, r) = (dec.left(mu), dec.right(mu));
            let overlap = l.dotc(&r).modulus();
            assert!((overlap - vec_norm(&l) * vec_norm(&r)).abs() < 1e-12);
        }
    }

    #[test]
    fn biorthonormal_for_generic_matrix() {
        let h = OperatorMatrix::new(
            DMatrix::from_fn(6, 6, |i, j| {
                cx(
                    ((i * 7 + j * 3) % 5) as f64 - 2.0,
                    ((i + 2 * j) % 3) as f64 * 0.3,
                )
            }),
            Role::Hamiltonian,
        )
        .unwrap();
        let dec = decompose(&h).unwrap();
        let overlap = dec.left_vectors().transpose() * dec.right_vectors();
        assert!((overlap - DMatrix::identity(6, 6)).norm() < 1e-9);
    }

    #[test]
    fn degenerate_block_is_biorthogonalized() {
        // Non-normal matrix with a doubly degenerate, diagonalizable eigenvalue.
        let s = dmatrix![cx(1.0, 0.0), cx(0.3, 0.1), cx(0.0, 0.0);
                         cx(0.2, 0.0), cx(1.0, 0.0), cx(0.5, 0.0);
                         cx(0.0, 0.4), cx(0.0, 0.0), cx(1.0, 0.0)];
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            cx(2.0, 0.0),
            cx(2.0, 0.0),
            cx(-1.0, 0.5),
        ]));
        let m = &s * d * s.clone().try_inverse().unwrap();
        let dec = decompose(&OperatorMatrix::new(m.clone(), Role::Hamiltonian).unwrap()).unwrap();
        assert!(!dec.has_ep());
        let overlap = dec.left_vectors().transpose() * dec.right_vectors();
        assert!((overlap - DMatrix::identity(3, 3)).norm() < 1e-9);
        for mu in 0..3 {
            let r = dec.right(mu);
            assert!(vec_norm(&(&m * &r - &r * dec.eigenvalue(mu))) < 1e-10);
        }
    }

    #[test]
    fn dimer_pairing_and_map() {
        let dec = decompose(&dimer([cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.1)])).unwrap();
        let pairing = pair_modes(&dec, &PairingOptions::default());
        assert_eq!(pairing.pairs, vec![(0, 1)]);
        assert!(pairing.zero_modes.is_empty() && pairing.unpaired.is_empty());
        let a = dimer_pseudochiral::<f64>();
        for mu in 0..2 {
            let map = chirality_map(&dec, &a, mu).unwrap();
            assert_eq!(map.partner, 1 - mu);
            assert!((map.coefficient - cx(-1.0, 0.0)).modulus() < 1e-12);
        }
    }

    #[test]
    fn map_rejects_non_pseudochiral_operator() {
        let dec = decompose(&dimer([cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.1)])).unwrap();
        let x = OperatorMatrix::new(
            dmatrix![cx(0.0, 0.0), cx(1.0, 0.0); cx(1.0, 0.0), cx(0.0, 0.0)],
            Role::Symmetry,
        )
        .unwrap();
        assert!(matches!(
            chirality_map(&dec, &x, 0),
            Err(Error::NotPseudoChiral { .. })
        ));
        let singular = OperatorMatrix::new(DMatrix::zeros(2, 2), Role::Symmetry).unwrap();
        assert_eq!(chirality_map(&dec, &singular, 0), Err(Error::Singular));
    }

    #[test]
    fn unpaired_spectrum() {
        let h = OperatorMatrix::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                cx(1.0, 0.0),
                cx(2.0, 0.0),
                cx(-1.0, 0.0),
                cx(0.0, 0.0),
            ])),
            Role::Hamiltonian,
        )
        .unwrap();
        let dec = decompose(&h).unwrap();
        let p = pair_modes(&dec, &PairingOptions::default());
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.zero_modes.len(), 1);
        assert_eq!(p.unpaired.len(), 1);
        assert_eq!(dec.eigenvalue(p.unpaired[0]), cx(2.0, 0.0));
        let zero = p.zero_modes[0];
        assert_eq!(p.partner(zero), Some(zero));
        assert_eq!(p.partner(p.unpaired[0]), None);
    }

    #[test]
    fn window_validation() {
        let dec = decompose(&dimer([cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.1)])).unwrap();
        let w = SpectralWindow::new(1.0, -1.0, 0.0, 0.0);
        assert!(matches!(
            select_modes(&dec, &w, 0.5),
            Err(Error::InvalidWindow(_))
        ));
        // No site map on the dimer, but an empty window never asks for one.
        let w = SpectralWindow::new(10.0, 11.0, -1.0, 1.0);
        assert_eq!(select_modes(&dec, &w, 0.5), Ok(vec![]));
    }
}
