//! Dense linear-algebra helpers over complex matrices.

use std::cmp::Ordering;

use nalgebra::{ComplexField, DMatrix, DVector, Schur};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Largest singular value.
pub fn spectral_norm<T: Real>(m: &DMatrix<C<T>>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(T::zero(), |acc, &s| if s > acc { s } else { acc })
}

/// Inverse of `m`, rejecting matrices whose reciprocal condition number is at
/// roundoff level.
pub fn inverse<T: Real>(m: &DMatrix<C<T>>) -> Result<DMatrix<C<T>>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let sv = m.clone().svd(false, false).singular_values;
    let (lo, hi) = sv
        .iter()
        .fold((T::max_value().unwrap(), T::zero()), |(lo, hi), &s| {
            (if s < lo { s } else { lo }, if s > hi { s } else { hi })
        });
    let floor = T::default_epsilon() * T::lit(m.nrows() as f64) * hi;
    if hi == T::zero() || lo <= floor {
        return Err(Error::Singular);
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

pub(crate) fn vec_norm<T: Real>(v: &DVector<C<T>>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Bilinear (unconjugated) product `a^T b`.
pub(crate) fn bilinear<T: Real>(a: &DVector<C<T>>, b: &DVector<C<T>>) -> C<T> {
    a.iter()
        .zip(b.iter())
        .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + *x * *y)
}

/// Scales `v` to unit 2-norm and rotates its phase so that the largest
/// component is real and positive.
pub(crate) fn normalize_with_phase<T: Real>(v: &mut DVector<C<T>>) {
    let norm = vec_norm(v);
    if norm == T::zero() {
        return;
    }
    let mut best = 0;
    let mut best_mod = T::zero();
    for (k, z) in v.iter().enumerate() {
        let m = z.modulus();
        // Ties within roundoff go to the lowest index.
        if m > best_mod * (T::one() + T::lit(1e3) * T::default_epsilon()) {
            best = k;
            best_mod = m;
        }
    }
    let phase = v[best] / C::new(v[best].modulus(), T::zero());
    let scale = C::new(norm, T::zero()) * phase;
    v.iter_mut().for_each(|z| *z /= scale);
}

/// Greedy minimum-cost bipartite matching: all pairs are ranked by cost and
/// accepted whenever both ends are still free. Returns, for every element of
/// `left`, its partner in `right` and the pair cost.
pub(crate) fn greedy_match<T: Real>(
    left: usize,
    right: usize,
    cost: impl Fn(usize, usize) -> T,
) -> Vec<Option<(usize, T)>> {
    let mut candidates = Vec::with_capacity(left * right);
    for i in 0..left {
        for j in 0..right {
            candidates.push((cost(i, j), i, j));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut taken = vec![false; right];
    let mut out = vec![None; left];
    for (d, i, j) in candidates {
        if out[i].is_none() && !taken[j] {
            out[i] = Some((j, d));
            taken[j] = true;
        }
    }
    out
}

/// Right eigen-decomposition of a general complex matrix.
#[derive(Debug, Clone)]
pub(crate) struct Eigen<T: Real> {
    pub values: Vec<C<T>>,
    /// Unit-norm, phase-fixed eigenvectors as columns.
    pub vectors: DMatrix<C<T>>,
    /// Cluster label per eigenvalue; eigenvalues within the cluster tolerance share one.
    pub cluster: Vec<usize>,
    /// Set for members of clusters whose eigenspace is smaller than the cluster (Jordan structure).
    pub defective: Vec<bool>,
}

/// Eigenvalues from the complex Schur form; eigenvectors by back-substitution
/// on the triangular factor for isolated eigenvalues, and by a null-space /
/// Rayleigh-Ritz step for clusters.
pub(crate) fn eigen<T: Real>(m: &DMatrix<C<T>>) -> Result<Eigen<T>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigen {
            values: vec![],
            vectors: DMatrix::zeros(0, 0),
            cluster: vec![],
            defective: vec![],
        });
    }
    let scale = spectral_norm(m);
    if scale == T::zero() {
        return Ok(Eigen {
            values: vec![C::new(T::zero(), T::zero()); n],
            vectors: DMatrix::identity(n, n),
            cluster: vec![0; n],
            defective: vec![false; n],
        });
    }
    let schur = Schur::try_new(m.clone(), T::default_epsilon(), 1000 * n.max(10))
        .ok_or(Error::EigenFailure)?;
    let (q, t) = schur.unpack();
    let values: Vec<C<T>> = (0..n).map(|k| t[(k, k)]).collect();
    let cluster_tol = T::lit(T::CLUSTER_TOL) * scale;
    let cluster = clusters(&values, cluster_tol);

    let mut vectors = DMatrix::zeros(n, n);
    let mut defective = vec![false; n];
    let n_clusters = cluster.iter().copied().max().map_or(0, |c| c + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
    for (k, &c) in cluster.iter().enumerate() {
        members[c].push(k);
    }
    for group in &members {
        if group.len() == 1 {
            let k = group[0];
            let y = triangular_eigenvector(&t, k, scale);
            let mut v = &q * y;
            normalize_with_phase(&mut v);
            vectors.set_column(k, &v);
        } else {
            let (vecs, is_defective) = cluster_eigenvectors(m, &values, group, scale, cluster_tol)?;
            for (slot, &k) in group.iter().enumerate() {
                let mut v = vecs.column(slot).into_owned();
                normalize_with_phase(&mut v);
                vectors.set_column(k, &v);
                defective[k] = is_defective;
            }
        }
    }
    Ok(Eigen {
        values,
        vectors,
        cluster,
        defective,
    })
}

fn clusters<T: Real>(values: &[C<T>], tol: T) -> Vec<usize> {
    // Union-find over the "closer than tol" relation.
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut k: usize) -> usize {
        while parent[k] != k {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        k
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).modulus() < tol {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|k| {
            let r = root(&mut parent, k);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}

/// Solves `(T - t_kk) y = 0` with `y_k = 1` and `y_j = 0` for `j > k`.
fn triangular_eigenvector<T: Real>(t: &DMatrix<C<T>>, k: usize, scale: T) -> DVector<C<T>> {
    let n = t.nrows();
    let mut y = DVector::from_element(n, C::new(T::zero(), T::zero()));
    y[k] = C::new(T::one(), T::zero());
    let small = T::default_epsilon() * scale;
    let lambda = t[(k, k)];
    for i in (0..k).rev() {
        let mut acc = C::new(T::zero(), T::zero());
        for j in i + 1..=k {
            acc += t[(i, j)] * y[j];
        }
        let mut denom = t[(i, i)] - lambda;
        if denom.modulus() < small {
            denom = C::new(small, T::zero());
        }
        y[i] = -acc / denom;
    }
    y
}

fn cluster_eigenvectors<T: Real>(
    m: &DMatrix<C<T>>,
    values: &[C<T>],
    group: &[usize],
    scale: T,
    cluster_tol: T,
) -> Result<(DMatrix<C<T>>, bool)> {
    let n = m.nrows();
    let k = group.len();
    let mean = group
        .iter()
        .fold(C::new(T::zero(), T::zero()), |acc, &i| acc + values[i])
        / C::new(T::lit(k as f64), T::zero());
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= mean;
    }
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap_or(Ordering::Equal)
    });
    let null_count = order
        .iter()
        .take_while(|&&i| svd.singular_values[i] < cluster_tol)
        .count();
    let basis = DMatrix::from_fn(n, k, |r, c| v_t[(order[c], r)].conj());

    if null_count < k {
        // Jordan structure: fewer eigenvectors than eigenvalues. Every member
        // gets one of the available null vectors.
        let available = null_count.max(1);
        let vecs = DMatrix::from_fn(n, k, |r, c| basis[(r, c % available)]);
        return Ok((vecs, true));
    }

    // Rayleigh-Ritz inside the invariant subspace.
    let projected = basis.adjoint() * m * &basis;
    let mut spread = projected.clone();
    for i in 0..k {
        spread[(i, i)] -= mean;
    }
    if spread.norm() < cluster_tol {
        // The block is already scalar; Schur iteration can stall on it when the mean is zero.
        return Ok((basis, false));
    }
    let small_schur = Schur::try_new(projected, T::default_epsilon(), 1000 * k.max(10))
        .ok_or(Error::EigenFailure)?;
    let (qs, ts) = small_schur.unpack();
    let ritz: Vec<C<T>> = (0..k).map(|i| ts[(i, i)]).collect();
    let mut ys = DMatrix::zeros(k, k);
    for i in 0..k {
        let mut y = &qs * triangular_eigenvector(&ts, i, scale);
        normalize_with_phase(&mut y);
        ys.set_column(i, &y);
    }
    let sv = ys.clone().svd(false, false).singular_values;
    let smin = sv
        .iter()
        .fold(T::max_value().unwrap(), |a, &s| if s < a { s } else { a });
    if smin < T::lit(1e-6) {
        // Numerically exact degeneracy: any orthonormal basis of the eigenspace will do.
        return Ok((basis, false));
    }
    let ritz_vectors = &basis * ys;
    let assignment = greedy_match(k, k, |a, b| (values[group[a]] - ritz[b]).modulus());
    let vecs = DMatrix::from_fn(n, k, |r, c| {
        let (j, _) = assignment[c].expect("square assignment is complete");
        ritz_vectors[(r, j)]
    });
    Ok((vecs, false))
}
