//! The four experiments. Each returns its files in memory; nothing touches
//! the filesystem until the caller decides the run succeeded.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::{json, Value};

use pseudochiral::{
    bloch_hamiltonian, build_dimer, build_lattice, check_relation, decompose, dimer_chiral,
    dimer_pseudochiral, evolve, evolve_eigenbasis, expectation_t, lattice_pseudochiral, pair_modes,
    parity_operator, select_modes, spectrum_mismatch, sublattice_operator,
    symmetry::default_tolerance, total_power, uniform_times, Decomposition64, Error, Operator64,
    PairingOptions, Propagator, Role, SpectralWindow, SpectrumSymmetry, SymmetryKind,
    SymmetryReport, Trajectory64, C64,
};

use crate::config::{ExperimentConfig, ExperimentKind, Gap, ObservableToken, PropagatorChoice};
use crate::error::{CliError, CliResult};
use crate::table::{complex_columns, Artifacts, ResultTable, Row};

/// Absolute tolerance on spectrum symmetry checks, relative to `max(1, max|w|)`.
pub const SPECTRUM_TOL: f64 = 1e-9;

/// Everything one run produced.
#[derive(Debug)]
pub struct RunOutput {
    pub artifacts: Artifacts,
    pub symmetry: Vec<SymmetryReport<f64>>,
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    match cfg.kind()? {
        ExperimentKind::Dimer => run_dimer(cfg),
        ExperimentKind::LatticeSpectrum => run_lattice_spectrum(cfg),
        ExperimentKind::Bands => run_bands(cfg),
        ExperimentKind::Wavepacket => run_wavepacket(cfg),
    }
}

fn report_json(cfg: &ExperimentConfig, symmetry: &[SymmetryReport<f64>], summary: Value) -> Value {
    json!({
        "toolkit": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "config": cfg,
        "symmetry_reports": symmetry.iter().map(|r| json!({
            "relation": r.kind.name(),
            "residual": r.residual,
            "holds": r.holds,
        })).collect::<Vec<_>>(),
        "summary": summary,
    })
}

fn finish(
    cfg: &ExperimentConfig,
    tables: Vec<(&str, ResultTable)>,
    symmetry: Vec<SymmetryReport<f64>>,
    summary: Value,
) -> CliResult<RunOutput> {
    let mut artifacts = Artifacts::default();
    for (name, table) in &tables {
        artifacts.add_table(name, table)?;
    }
    artifacts.add_json("report.json", &report_json(cfg, &symmetry, summary))?;
    Ok(RunOutput {
        artifacts,
        symmetry,
    })
}

fn relation(h: &Operator64, s: &Operator64, kind: SymmetryKind) -> CliResult<SymmetryReport<f64>> {
    Ok(check_relation(h, s, kind, default_tolerance())?)
}

fn identity(dim: usize) -> Operator64 {
    Operator64::new(DMatrix::identity(dim, dim), Role::Symmetry)
        .expect("identity is square and finite")
}

/// Evolves with the configured propagator; `auto` prefers the eigenbasis and
/// falls back to the matrix exponential when populated modes sit at an exceptional point.
fn propagate(
    h: &Operator64,
    dec: Option<&Decomposition64>,
    psi0: &DVector<C64>,
    times: &[f64],
    choice: PropagatorChoice,
    dt: f64,
) -> CliResult<Trajectory64> {
    let opts = pseudochiral::EvolveOptions { dt };
    let eigen = |h: &Operator64| match dec {
        Some(dec) => evolve_eigenbasis(dec, psi0, times),
        None => pseudochiral::evolve_with(h, psi0, times, Propagator::Eigenbasis, &opts),
    };
    let traj = match choice {
        PropagatorChoice::Eigenbasis => eigen(h)?,
        PropagatorChoice::MatrixExponential => {
            evolve(h, psi0, times, Propagator::MatrixExponential)?
        }
        PropagatorChoice::Rk4 => pseudochiral::evolve_with(h, psi0, times, Propagator::Rk4, &opts)?,
        PropagatorChoice::Auto => match eigen(h) {
            Err(Error::EpPopulated | Error::ExceptionalPoint(_)) => {
                evolve(h, psi0, times, Propagator::MatrixExponential)?
            }
            other => other?,
        },
    };
    Ok(traj)
}

fn observable_header(tokens: &[ObservableToken]) -> Vec<String> {
    tokens
        .iter()
        .flat_map(|t| complex_columns(t.name()))
        .collect()
}

fn series_summary(tokens: &[ObservableToken], series: &[Vec<C64>]) -> Value {
    let mut out = serde_json::Map::new();
    for (tok, values) in tokens.iter().zip(series) {
        let first = values[0];
        let drift = values
            .iter()
            .map(|v| (v - first).norm())
            .fold(0.0, f64::max);
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        out.insert(
            tok.name().to_string(),
            json!({ "initial": [first.re, first.im], "drift": drift, "peak": peak }),
        );
    }
    Value::Object(out)
}

fn times_of(cfg: &ExperimentConfig) -> (Vec<f64>, f64) {
    let time = cfg.time.unwrap_or_default();
    (uniform_times(time.t_max, time.steps()), time.dt)
}

pub fn run_dimer(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let spec = cfg.dimer_spec()?;
    let h = build_dimer(&spec)?;
    let sigma2 = dimer_pseudochiral::<f64>();
    let pi = dimer_chiral(&spec)?;
    let symmetry = vec![
        relation(&h, &sigma2, SymmetryKind::PseudoChirality)?,
        relation(&h, &pi, SymmetryKind::Chiral)?,
    ];

    let ops: Vec<Operator64> = cfg
        .observables
        .iter()
        .map(|tok| match tok {
            ObservableToken::Sigma2 => sigma2.clone(),
            ObservableToken::Pi => pi.clone(),
            _ => identity(2),
        })
        .collect();

    let psi0 = DVector::from_vec(cfg.initial_dimer_state());
    let (times, dt) = times_of(cfg);
    let choice = cfg.propagator.unwrap_or(PropagatorChoice::Auto);
    let traj = propagate(&h, None, &psi0, &times, choice, dt)?;

    let mut header = vec!["t".to_string(), "intensity_1".into(), "intensity_2".into()];
    header.extend(observable_header(&cfg.observables));
    let mut table = ResultTable::new(header);
    let mut series = vec![Vec::with_capacity(times.len()); ops.len()];
    for (k, &t) in times.iter().enumerate() {
        let psi = traj.state(k);
        let mut row = Row::new()
            .real(t)
            .real(psi[0].norm_sqr())
            .real(psi[1].norm_sqr());
        for (op, s) in ops.iter().zip(series.iter_mut()) {
            let v = expectation_t(psi, op.matrix())?;
            s.push(v);
            row = row.complex(v);
        }
        table.push(row);
    }

    let eigs = decompose(&h).map(|d| d.eigenvalues().to_vec());
    let summary = json!({
        "propagator": traj.method().name(),
        "eigenvalues": eigs.as_ref().map(|e| e.iter().map(|w| [w.re, w.im]).collect::<Vec<_>>()).ok(),
        "exceptional_point": matches!(decompose(&h), Ok(ref d) if d.has_ep()),
        "observables": series_summary(&cfg.observables, &series),
    });
    finish(cfg, vec![("dimer.csv", table)], symmetry, summary)
}

/// Symmetry operators of a lattice; the mirror-based ones exist only for mirror-symmetric removals.
struct LatticeOperators {
    c: Operator64,
    p: Option<Operator64>,
    a: Option<Operator64>,
}

fn lattice_operators(n: usize, removed: &[(usize, usize)]) -> CliResult<LatticeOperators> {
    let c = sublattice_operator::<f64>(n, removed)?.c;
    let optional = |r: pseudochiral::Result<Operator64>| match r {
        Ok(op) => Ok(Some(op)),
        Err(Error::ParityUndefined) => Ok(None),
        Err(e) => Err(CliError::from(e)),
    };
    Ok(LatticeOperators {
        c,
        p: optional(parity_operator(n, removed))?,
        a: optional(lattice_pseudochiral(n, removed))?,
    })
}

fn lattice_reports(h: &Operator64, ops: &LatticeOperators) -> CliResult<Vec<SymmetryReport<f64>>> {
    let mut out = vec![relation(h, &ops.c, SymmetryKind::PseudoAntiHermiticity)?];
    if let Some(a) = &ops.a {
        out.push(relation(h, a, SymmetryKind::PseudoChirality)?);
    }
    if let Some(p) = &ops.p {
        out.push(relation(h, p, SymmetryKind::Pt)?);
    }
    Ok(out)
}

fn lattice_observable(
    tok: ObservableToken,
    ops: &LatticeOperators,
    dim: usize,
) -> CliResult<Operator64> {
    let missing = || {
        CliError::config(format!(
            "observable {} needs a mirror-symmetric lattice",
            tok.name()
        ))
    };
    match tok {
        ObservableToken::C => Ok(ops.c.clone()),
        ObservableToken::P => ops.p.clone().ok_or_else(missing),
        ObservableToken::APc => ops.a.clone().ok_or_else(missing),
        ObservableToken::Identity => Ok(identity(dim)),
        ObservableToken::Sigma2 | ObservableToken::Pi => Err(CliError::config(format!(
            "observable {} is defined for the dimer only",
            tok.name()
        ))),
    }
}

pub fn run_lattice_spectrum(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let spec = cfg.lattice_spec()?;
    let map = spec.validate()?;
    let h = build_lattice(&spec)?;
    let ops = lattice_operators(spec.n, &spec.removed_sites)?;
    let symmetry = lattice_reports(&h, &ops)?;

    let dec = decompose(&h)?;
    let pairing = pair_modes(&dec, &PairingOptions::default());
    let mut table = ResultTable::new([
        "index",
        "omega_re",
        "omega_im",
        "edge_fraction",
        "partner",
        "zero_mode",
    ]);
    for mu in 0..dec.len() {
        let partner = pairing.partner(mu).map_or(-1, |p| p as i64);
        let zero = pairing.zero_modes.contains(&mu);
        table.push(
            Row::new()
                .int(mu as i64)
                .complex(dec.eigenvalue(mu))
                .real(dec.edge_fraction(mu)?)
                .int(partner)
                .int(zero as i64),
        );
    }

    let eigs = dec.eigenvalues();
    let tol = SPECTRUM_TOL * dec.max_abs_eigenvalue().max(1.0);
    let spectrum = |kind| {
        let mismatch = spectrum_mismatch(eigs, kind);
        json!({ "mismatch": mismatch, "holds": mismatch < tol })
    };
    let min_abs = eigs.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
    let summary = json!({
        "modes": dec.len(),
        "connected": map.is_connected(),
        "exceptional_points": dec.ep_flags().iter().filter(|&&f| f).count(),
        "pairs": pairing.pairs.len(),
        "zero_modes": pairing.zero_modes,
        "unpaired": pairing.unpaired,
        "min_abs_eigenvalue": min_abs,
        "spectrum_symmetry": {
            "tolerance": tol,
            "origin": spectrum(SpectrumSymmetry::Origin),
            "real_axis_mirror": spectrum(SpectrumSymmetry::RealAxisMirror),
        },
    });
    finish(cfg, vec![("spectrum.csv", table)], symmetry, summary)
}

/// `top * i / (n - 1)` for `i = 0..n`, exact at both ends.
fn grid(n: usize, top: f64) -> Vec<f64> {
    (0..n).map(|i| top * (i as f64 / (n - 1) as f64)).collect()
}

fn bands_at(kx: f64, ky: f64, g: f64) -> [f64; 4] {
    let h = bloch_hamiltonian(kx, ky, g);
    let mut e: Vec<f64> = h
        .matrix()
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(|a, b| a.total_cmp(b));
    [e[0], e[1], e[2], e[3]]
}

pub fn run_bands(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let k = cfg.k_grid.unwrap_or_default();
    let g = cfg.coupling();
    let points: Vec<(f64, f64)> = grid(k.nky, std::f64::consts::FRAC_PI_4)
        .into_iter()
        .flat_map(|ky| {
            grid(k.nkx, std::f64::consts::PI)
                .into_iter()
                .map(move |kx| (kx, ky))
        })
        .collect();
    // Indexed collect keeps the row order independent of the thread count.
    let energies: Vec<[f64; 4]> = points
        .par_iter()
        .map(|&(kx, ky)| bands_at(kx, ky, g))
        .collect();

    let mut table = ResultTable::new(["kx", "ky", "band_1", "band_2", "band_3", "band_4"]);
    let mut lower_max = f64::NEG_INFINITY;
    let mut upper_min = f64::INFINITY;
    let mut direct = f64::INFINITY;
    let mut pairing = 0.0f64;
    for (&(kx, ky), e) in points.iter().zip(&energies) {
        table.push(
            Row::new()
                .real(kx)
                .real(ky)
                .real(e[0])
                .real(e[1])
                .real(e[2])
                .real(e[3]),
        );
        lower_max = lower_max.max(e[0]);
        upper_min = upper_min.min(e[1]);
        direct = direct.min(e[1] - e[0]);
        pairing = pairing.max((e[0] + e[3]).abs()).max((e[1] + e[2]).abs());
    }

    let h0 = bloch_hamiltonian(0.0, 0.0, g);
    let symmetry = vec![relation(
        &h0,
        &identity(4),
        SymmetryKind::PseudoHermiticity,
    )?];
    let gamma = bands_at(0.0, 0.0, g);
    let summary = json!({
        "points": points.len(),
        "gamma_point": gamma,
        "gamma_degeneracy": (gamma[2] - gamma[1]).abs(),
        "energy_pairing": pairing,
        "lower_gap": { "global": upper_min - lower_max, "direct": direct },
    });
    finish(cfg, vec![("bands.csv", table)], symmetry, summary)
}

/// Gaussian amplitudes over `len` band modes.
pub fn gaussian_weights(len: usize, center: Option<f64>, width: Option<f64>) -> Vec<f64> {
    let c = center.unwrap_or((len as f64 - 1.0) / 2.0);
    let w = width.unwrap_or(len as f64 / 6.0);
    (0..len)
        .map(|i| (-(i as f64 - c).powi(2) / (2.0 * w * w)).exp())
        .collect()
}

/// Weight given to the zero mode when it is added to a packet.
pub const ZERO_MODE_WEIGHT: f64 = 1.0;

pub fn run_wavepacket(cfg: &ExperimentConfig) -> CliResult<RunOutput> {
    let wp = cfg.wavepacket.clone().unwrap_or_default();
    let spec = cfg.lattice_spec()?;
    let map = spec.validate()?;
    let h = build_lattice(&spec)?;
    let ops = lattice_operators(spec.n, &spec.removed_sites)?;
    let symmetry = lattice_reports(&h, &ops)?;
    let observables: Vec<Operator64> = cfg
        .observables
        .iter()
        .map(|&t| lattice_observable(t, &ops, h.dim()))
        .collect::<CliResult<_>>()?;

    let dec = decompose(&h)?;
    let window = match wp.band_selector.gap {
        Gap::BD1 => SpectralWindow::lower_gap(spec.g),
        Gap::BD2 => SpectralWindow::upper_gap(spec.g),
    };
    let band = select_modes(&dec, &window, wp.band_selector.edge_fraction)?;
    if band.is_empty() {
        return Err(CliError::Experiment("band selection is empty".into()));
    }
    let weights = gaussian_weights(
        band.len(),
        wp.weight_profile.center_index,
        wp.weight_profile.width,
    );
    if weights.iter().all(|&w| w.abs() < 1e-300) {
        return Err(CliError::Experiment(
            "packet weights vanish on the selected band".into(),
        ));
    }

    let pairing = pair_modes(&dec, &PairingOptions::default());
    let mut b = vec![C64::new(0.0, 0.0); dec.len()];
    for (&mu, &w) in band.iter().zip(&weights) {
        b[mu] += C64::new(w, 0.0);
    }
    let mut partners = Vec::new();
    if wp.include_ccw_partners {
        for (&mu, &w) in band.iter().zip(&weights) {
            let nu = pairing
                .partner(mu)
                .ok_or_else(|| CliError::Experiment(format!("mode {mu} has no partner")))?;
            b[nu] += C64::new(w, 0.0);
            partners.push(nu);
        }
    }
    let zero_mode = if wp.include_zero_mode {
        let z = *pairing
            .zero_modes
            .first()
            .ok_or_else(|| CliError::Experiment("lattice has no zero mode".into()))?;
        b[z] += C64::new(ZERO_MODE_WEIGHT, 0.0);
        Some(z)
    } else {
        None
    };
    if let Some(mu) = (0..dec.len()).find(|&mu| dec.is_ep(mu) && b[mu].norm() > 0.0) {
        return Err(CliError::Numerical(Error::ExceptionalPoint(mu)));
    }
    let psi0 = dec.synthesize(&b)?;

    let (times, dt) = times_of(cfg);
    let choice = cfg.propagator.unwrap_or(PropagatorChoice::Auto);
    let traj = propagate(&h, Some(&dec), &psi0, &times, choice, dt)?;

    let n = spec.n;
    let mut header = vec!["t".to_string(), "power".into()];
    header.extend(observable_header(&cfg.observables));
    header.extend([
        "edge_power".to_string(),
        "left_edge_power".into(),
        "right_edge_power".into(),
    ]);
    let mut table = ResultTable::new(header);
    let mut series = vec![Vec::with_capacity(times.len()); observables.len()];
    for (k, &t) in times.iter().enumerate() {
        let psi = traj.state(k);
        let mut row = Row::new().real(t).real(total_power(psi));
        for (op, s) in observables.iter().zip(series.iter_mut()) {
            let v = expectation_t(psi, op.matrix())?;
            s.push(v);
            row = row.complex(v);
        }
        let (mut edge, mut left, mut right) = (0.0, 0.0, 0.0);
        for (idx, z) in psi.iter().enumerate() {
            let w = z.norm_sqr();
            let (_, col) = map.site(idx);
            if map.is_boundary(idx) {
                edge += w;
            }
            if col == 1 {
                left += w;
            }
            if col == n {
                right += w;
            }
        }
        table.push(row.real(edge).real(left).real(right));
    }

    let mut tables = vec![("wavepacket.csv", table)];
    if !wp.snapshot_times.is_empty() {
        let mut snaps = ResultTable::new(["t", "row", "col", "intensity"]);
        for &ts in &wp.snapshot_times {
            let k = nearest(&times, ts);
            for (idx, z) in traj.state(k).iter().enumerate() {
                let (r, c) = map.site(idx);
                snaps.push(
                    Row::new()
                        .real(times[k])
                        .int(r as i64)
                        .int(c as i64)
                        .real(z.norm_sqr()),
                );
            }
        }
        tables.push(("snapshots.csv", snaps));
    }

    let power = traj.power_series();
    let summary = json!({
        "propagator": traj.method().name(),
        "band": band,
        "band_eigenvalues": band.iter().map(|&mu| { let w = dec.eigenvalue(mu); [w.re, w.im] }).collect::<Vec<_>>(),
        "weights": weights,
        "ccw_partners": partners,
        "zero_mode": zero_mode,
        "initial_power": power[0],
        "max_power": power.iter().copied().fold(0.0, f64::max),
        "observables": series_summary(&cfg.observables, &series),
    });
    finish(cfg, tables, symmetry, summary)
}

fn nearest(times: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (k, &s) in times.iter().enumerate() {
        if (s - t).abs() < (times[best] - t).abs() {
            best = k;
        }
    }
    best
}
