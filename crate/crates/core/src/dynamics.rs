//! Time evolution under `i d/dt psi = H psi` (hbar = 1) and the two
//! expectation-value conventions: the transpose pairing `(A) = psi^T A psi`
//! and the usual `<A> = psi^dagger A psi`. Neither is normalized by the norm of
//! the state.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, spectral_norm, vec_norm};
use crate::operator::{OperatorMatrix, SiteMap};
use crate::scalar::{Real, C};
use crate::spectral::{decompose, SpectralDecomposition};

pub type State<T> = DVector<C<T>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `psi^T A psi`
    Transpose,
    /// `psi^dagger A psi`
    Dagger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Propagator {
    /// Exact superposition of eigenmodes; unavailable when populated modes sit at an exceptional point.
    Eigenbasis,
    /// `exp(-i H dt)` by scaling and squaring.
    MatrixExponential,
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
}

impl Propagator {
    pub fn name(self) -> &'static str {
        match self {
            Propagator::Eigenbasis => "eigenbasis",
            Propagator::MatrixExponential => "matrix_exponential",
            Propagator::Rk4 => "rk4",
        }
    }
}

/// Default Runge-Kutta step in units of `1/g`.
pub const DEFAULT_DT: f64 = 0.01;

// |H| dt beyond this leaves the RK4 stability region on the imaginary axis (2 sqrt 2).
const RK4_STABILITY: f64 = 2.5;

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `phi^T psi`, no complex conjugation.
pub fn inner_t<T: Real>(phi: &State<T>, psi: &State<T>) -> Result<C<T>> {
    check_dim(phi.len(), psi.len())?;
    Ok(bilinear(phi, psi))
}

/// `(A) = psi^T A psi`.
pub fn expectation_t<T: Real>(psi: &State<T>, a: &DMatrix<C<T>>) -> Result<C<T>> {
    check_dim(a.nrows(), psi.len())?;
    Ok(bilinear(psi, &(a * psi)))
}

/// `<A> = psi^dagger A psi`.
pub fn expectation_dagger<T: Real>(psi: &State<T>, a: &DMatrix<C<T>>) -> Result<C<T>> {
    check_dim(a.nrows(), psi.len())?;
    Ok(psi.dotc(&(a * psi)))
}

pub fn expectation<T: Real>(
    psi: &State<T>,
    a: &DMatrix<C<T>>,
    convention: Convention,
) -> Result<C<T>> {
    match convention {
        Convention::Transpose => expectation_t(psi, a),
        Convention::Dagger => expectation_dagger(psi, a),
    }
}

/// Time derivative of the expectation value of a time-independent `A`:
/// `-i psi^dagger (A H - H^dagger A) psi` or `-i psi^T (A H + H^T A) psi`.
pub fn ehrenfest_rhs<T: Real>(
    psi: &State<T>,
    a: &DMatrix<C<T>>,
    h: &DMatrix<C<T>>,
    convention: Convention,
) -> Result<C<T>> {
    check_dim(h.nrows(), psi.len())?;
    check_dim(a.nrows(), psi.len())?;
    let minus_i = C::new(T::zero(), -T::one());
    let generator = match convention {
        Convention::Dagger => a * h - h.adjoint() * a,
        Convention::Transpose => a * h + h.transpose() * a,
    };
    Ok(minus_i * expectation(psi, &generator, convention)?)
}

/// `|psi_i|^2` per site, in index order.
pub fn intensities<T: Real>(psi: &State<T>) -> Vec<T> {
    psi.iter().map(|z| z.norm_sqr()).collect()
}

/// Intensities keyed by `(row, col)` using the lattice bookkeeping.
pub fn site_intensities<T: Real>(
    psi: &State<T>,
    map: &SiteMap,
) -> Result<Vec<((usize, usize), T)>> {
    check_dim(map.len(), psi.len())?;
    Ok(map.sites().iter().copied().zip(intensities(psi)).collect())
}

/// `sum_i |psi_i|^2`.
pub fn total_power<T: Real>(psi: &State<T>) -> T {
    psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    times: Vec<T>,
    states: Vec<State<T>>,
    method: Propagator,
    dt: Option<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[State<T>] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &State<T> {
        &self.states[k]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn method(&self) -> Propagator {
        self.method
    }

    /// Internal Runge-Kutta step, when one was used.
    pub fn dt(&self) -> Option<T> {
        self.dt
    }

    pub fn expectation_series(
        &self,
        name: impl Into<String>,
        a: &DMatrix<C<T>>,
        convention: Convention,
    ) -> Result<ObservableSeries<T>> {
        let values = self
            .states
            .iter()
            .map(|psi| expectation(psi, a, convention))
            .collect::<Result<Vec<_>>>()?;
        Ok(ObservableSeries {
            name: name.into(),
            values,
            convention,
        })
    }

    pub fn power_series(&self) -> Vec<T> {
        self.states.iter().map(total_power).collect()
    }

    /// Largest pointwise `|psi_k - phi_k| / max(|psi_k|, 1)` against another trajectory on the same grid.
    pub fn max_deviation(&self, other: &Trajectory<T>) -> Result<T> {
        check_dim(self.len(), other.len())?;
        let mut worst = T::zero();
        for (a, b) in self.states.iter().zip(&other.states) {
            check_dim(a.len(), b.len())?;
            let scale = vec_norm(a);
            let scale = if scale > T::one() { scale } else { T::one() };
            let d = vec_norm(&(a - b)) / scale;
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }
}

/// A named expectation value sampled along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries<T: Real> {
    pub name: String,
    pub values: Vec<C<T>>,
    pub convention: Convention,
}

impl<T: Real> ObservableSeries<T> {
    /// `max_k |v_k - v_0|`.
    pub fn drift(&self) -> T {
        let Some(&first) = self.values.first() else {
            return T::zero();
        };
        self.values.iter().fold(T::zero(), |acc, &v| {
            let d = (v - first).modulus();
            if d > acc {
                d
            } else {
                acc
            }
        })
    }

    /// `max_k |v_k|`.
    pub fn peak(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| {
            let m = v.modulus();
            if m > acc {
                m
            } else {
                acc
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions<T: Real> {
    /// Runge-Kutta step; other propagators ignore it.
    pub dt: T,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        EvolveOptions {
            dt: T::lit(DEFAULT_DT),
        }
    }
}

fn check_times<T: Real>(times: &[T]) -> Result<()> {
    if times.is_empty()
        || !times.iter().all(|t| t.is_finite())
        || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidTimeGrid);
    }
    Ok(())
}

fn check_state<T: Real>(psi0: &State<T>, dim: usize) -> Result<()> {
    check_dim(dim, psi0.len())?;
    if psi0.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("initial state"))
    }
}

/// Evolves `psi0`, given at `times[0]`, to every entry of `times`.
pub fn evolve<T: Real>(
    h: &OperatorMatrix<T>,
    psi0: &State<T>,
    times: &[T],
    method: Propagator,
) -> Result<Trajectory<T>> {
    evolve_with(h, psi0, times, method, &EvolveOptions::default())
}

pub fn evolve_with<T: Real>(
    h: &OperatorMatrix<T>,
    psi0: &State<T>,
    times: &[T],
    method: Propagator,
    opts: &EvolveOptions<T>,
) -> Result<Trajectory<T>> {
    check_times(times)?;
    check_state(psi0, h.dim())?;
    match method {
        Propagator::Eigenbasis => {
            let dec = decompose(h)?;
            evolve_eigenbasis(&dec, psi0, times)
        }
        Propagator::MatrixExponential => Ok(evolve_expm(h.matrix(), psi0, times)),
        Propagator::Rk4 => evolve_rk4(h.matrix(), psi0, times, opts.dt),
    }
}

/// `psi(t) = sum_mu b_mu exp(-i w_mu (t - t0)) r_mu` with `b_mu = lbar_mu^T psi0`.
pub fn evolve_eigenbasis<T: Real>(
    dec: &SpectralDecomposition<T>,
    psi0: &State<T>,
    times: &[T],
) -> Result<Trajectory<T>> {
    check_times(times)?;
    check_state(psi0, dec.len())?;
    let mut b = dec.coefficients(psi0)?;
    for (mu, coeff) in b.iter_mut().enumerate() {
        if dec.is_ep(mu) {
            *coeff = C::new(T::zero(), T::zero());
        }
    }
    let rebuilt = dec.synthesize(&b)?;
    let scale = vec_norm(psi0);
    if vec_norm(&(rebuilt - psi0))
        > T::lit(T::EP_THRESHOLD) * if scale > T::zero() { scale } else { T::one() }
    {
        return Err(Error::EpPopulated);
    }
    let t0 = times[0];
    let states = times
        .iter()
        .map(|&t| {
            let phases: Vec<C<T>> = b
                .iter()
                .zip(dec.eigenvalues())
                .map(|(&bm, &w)| bm * (w * C::new(T::zero(), -(t - t0))).exp())
                .collect();
            dec.synthesize(&phases)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        method: Propagator::Eigenbasis,
        dt: None,
    })
}

fn evolve_expm<T: Real>(h: &DMatrix<C<T>>, psi0: &State<T>, times: &[T]) -> Trajectory<T> {
    let mut states = Vec::with_capacity(times.len());
    states.push(psi0.clone());
    let mut cached: Option<(T, DMatrix<C<T>>)> = None;
    let reuse_tol = T::lit(1e-12);
    for w in times.windows(2) {
        let step = w[1] - w[0];
        let reuse = matches!(&cached, Some((s, _)) if (*s - step).abs() <= reuse_tol * step);
        if !reuse {
            let u = (h * C::new(T::zero(), -step)).exp();
            cached = Some((step, u));
        }
        let u = &cached.as_ref().expect("propagator cached").1;
        let next = u * states.last().expect("non-empty");
        states.push(next);
    }
    Trajectory {
        times: times.to_vec(),
        states,
        method: Propagator::MatrixExponential,
        dt: None,
    }
}

fn evolve_rk4<T: Real>(
    h: &DMatrix<C<T>>,
    psi0: &State<T>,
    times: &[T],
    dt: T,
) -> Result<Trajectory<T>> {
    if !dt.is_finite() || dt <= T::zero() {
        return Err(Error::InvalidTimeGrid);
    }
    let norm = spectral_norm(h);
    if norm * dt > T::lit(RK4_STABILITY) {
        return Err(Error::UnstableStep((norm * dt).as_f64()));
    }
    let minus_i = C::new(T::zero(), -T::one());
    let rhs = |psi: &State<T>| (h * psi) * minus_i;
    let two = C::new(T::lit(2.0), T::zero());
    let mut states = Vec::with_capacity(times.len());
    states.push(psi0.clone());
    let mut psi = psi0.clone();
    for w in times.windows(2) {
        let span = w[1] - w[0];
        let substeps = (span / dt - T::lit(1e-9)).ceil().as_f64().max(1.0) as usize;
        let step = span / T::lit(substeps as f64);
        let hstep = C::new(step, T::zero());
        let half = C::new(step / T::lit(2.0), T::zero());
        let sixth = C::new(step / T::lit(6.0), T::zero());
        for _ in 0..substeps {
            let k1 = rhs(&psi);
            let k2 = rhs(&(&psi + &k1 * half));
            let k3 = rhs(&(&psi + &k2 * half));
            let k4 = rhs(&(&psi + &k3 * hstep));
            psi += (k1 + k2 * two + k3 * two + k4) * sixth;
        }
        states.push(psi.clone());
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        method: Propagator::Rk4,
        dt: Some(dt),
    })
}

/// `n + 1` equally spaced samples on `[0, t_max]`, computed as `t_max * (k / n)`.
pub fn uniform_times<T: Real>(t_max: T, steps: usize) -> Vec<T> {
    let n = T::lit(steps.max(1) as f64);
    (0..=steps.max(1))
        .map(|k| t_max * (T::lit(k as f64) / n))
        .collect()
}
