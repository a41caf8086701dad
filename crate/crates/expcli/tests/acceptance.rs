//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use pseudochiral::{
    build_dimer, build_lattice, check_relation, chirality_map, decompose, dimer_pseudochiral,
    ehrenfest_rhs, evolve, evolve_eigenbasis, evolve_with, expectation_t, lattice_pseudochiral,
    operator_parity, pair_modes, parity_operator, select_modes, spectrum_mismatch,
    sublattice_operator, uniform_times, Convention, DimerSpec64, EvolveOptions, GainProfile,
    LatticeSpec64, Operator64, OperatorParity, PairingOptions, Propagator, Role, SpectralWindow,
    SpectrumSymmetry, SymmetryKind, C64,
};
use pseudochiral_expcli::config::random_profile;
use pseudochiral_expcli::{run, ExperimentConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_c(r: &mut ChaCha8Rng, scale: f64) -> C64 {
    cx(r.random_range(-scale..scale), r.random_range(-scale..scale))
}

fn random_state(r: &mut ChaCha8Rng, dim: usize) -> DVector<C64> {
    DVector::from_fn(dim, |_, _| random_c(r, 1.0))
}

fn reference_dimers() -> [DimerSpec64; 2] {
    [
        DimerSpec64::new(cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.1)),
        DimerSpec64::new(cx(-2f64.sqrt(), 0.0), cx(0.0, 0.0), cx(1.0, 0.1)),
    ]
}

fn random_dimers(seed: u64, count: usize) -> Vec<DimerSpec64> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            DimerSpec64::new(
                random_c(&mut r, 2.0),
                random_c(&mut r, 2.0),
                random_c(&mut r, 2.0),
            )
        })
        .collect()
}

fn lattice(n: usize, profile: GainProfile<f64>, removed: Vec<(usize, usize)>) -> Operator64 {
    build_lattice(
        &LatticeSpec64::new(n, 1.0, 0.1)
            .with_profile(profile)
            .with_removed(removed),
    )
    .unwrap()
}

fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn cli_run(json: &str) -> Value {
    let cfg = ExperimentConfig::from_json(json)
        .unwrap()
        .resolve()
        .unwrap();
    let out = run(&cfg).unwrap();
    serde_json::from_slice(out.artifacts.get("report.json").unwrap()).unwrap()
}

fn dimer_spectrum() -> Outcome {
    let mut specs = random_dimers(1, 100);
    specs.extend(reference_dimers());
    let mut worst = 0.0f64;
    for spec in &specs {
        let s = spec.discriminant().sqrt();
        let dec = decompose(&build_dimer(spec).unwrap()).map_err(|e| e.to_string())?;
        let w = dec.eigenvalues();
        let scale = s.norm().max(1.0);
        let direct = (w[0] - s).norm().max((w[1] + s).norm());
        let swapped = (w[0] + s).norm().max((w[1] - s).norm());
        worst = worst.max(direct.min(swapped) / scale);
    }
    ensure(
        worst < 1e-12,
        format!("worst relative eigenvalue error {worst:.2e}"),
    )?;
    Ok(format!(
        "{} dimers, worst relative error {worst:.2e}",
        specs.len()
    ))
}

fn universal_vanishing() -> Outcome {
    let t = uniform_times(20.0, 2000);
    let mut worst = 0.0f64;
    let mut r = rng(2);
    let sigma2 = dimer_pseudochiral::<f64>();
    let mut dimers = reference_dimers().to_vec();
    dimers.extend(random_dimers(3, 5));
    for spec in &dimers {
        let h = build_dimer(spec).unwrap();
        let psi0 = random_state(&mut r, 2);
        let traj =
            evolve(&h, &psi0, &t, Propagator::MatrixExponential).map_err(|e| e.to_string())?;
        let scale = traj.power_series().into_iter().fold(0.0, f64::max);
        let series = traj
            .expectation_series("sigma2", sigma2.matrix(), Convention::Transpose)
            .unwrap();
        worst = worst.max(series.peak() / scale);
    }

    let h = lattice(10, GainProfile::LeftGainRightLoss, vec![]);
    let a = lattice_pseudochiral::<f64>(10, &[]).unwrap();
    let dec = decompose(&h).unwrap();
    let band = select_modes(&dec, &SpectralWindow::lower_gap(1.0), 0.6).unwrap();
    let pairing = pair_modes(&dec, &PairingOptions::default());
    let mut b = vec![cx(0.0, 0.0); dec.len()];
    for &mu in &band {
        b[mu] = cx(1.0, 0.0);
    }
    let cw = dec.synthesize(&b).unwrap();
    for &mu in &band {
        b[pairing.partner(mu).unwrap()] = cx(0.5, 0.0);
    }
    let both = dec.synthesize(&b).unwrap();
    let packets = [cw, both, random_state(&mut r, dec.len())];
    for psi0 in &packets {
        let traj = evolve_eigenbasis(&dec, psi0, &t).map_err(|e| e.to_string())?;
        let scale = traj.power_series().into_iter().fold(0.0, f64::max);
        let series = traj
            .expectation_series("A_PC", a.matrix(), Convention::Transpose)
            .unwrap();
        worst = worst.max(series.peak() / scale);
    }
    ensure(worst < 1e-12, format!("max |(A)|/power = {worst:.2e}"))?;
    Ok(format!(
        "{} dimer + {} lattice trajectories, max |(A)|/power {worst:.2e}",
        dimers.len(),
        packets.len()
    ))
}

fn dimer_conservation() -> Outcome {
    let mut lines = Vec::new();
    for (tag, b1, b2, pi_conserved) in [
        ("a", [1.0, 0.0], [1.0, 0.0], false),
        ("b", [-2f64.sqrt(), 0.0], [0.0, 0.0], true),
    ] {
        let cfg = format!(
            r#"{{"experiment": "dimer", "model": {{"kind": "dimer", "b1": {b1:?}, "b2": {b2:?}, "b3": [1.0, 0.1]}},
                "initial_state": [[2, 0], [1, 0]], "time": {{"t_max": 20, "dt": 0.01}}}}"#
        );
        let report = cli_run(&cfg);
        let obs = &report["summary"]["observables"];
        let s_drift = obs["sigma2"]["drift"].as_f64().unwrap();
        let p_drift = obs["Pi"]["drift"].as_f64().unwrap();
        let p_peak = obs["Pi"]["peak"].as_f64().unwrap();
        ensure(
            s_drift < 1e-8,
            format!("({tag}) sigma2 drift {s_drift:.2e}"),
        )?;
        if pi_conserved {
            ensure(p_drift < 1e-8, format!("({tag}) Pi drift {p_drift:.2e}"))?;
        } else {
            ensure(
                p_drift > 0.1 * p_peak,
                format!("({tag}) Pi varies only {p_drift:.2e} of peak {p_peak:.2e}"),
            )?;
        }
        lines.push(format!(
            "({tag}) sigma2 drift {s_drift:.1e}, Pi drift {p_drift:.2e} / peak {p_peak:.2e}"
        ));
    }
    Ok(lines.join("; "))
}

fn symmetry_residuals() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut record = |h: &Operator64, s: &Operator64, kind| -> Result<(), String> {
        let rep = check_relation(h, s, kind, 1e-12).map_err(|e| e.to_string())?;
        worst = worst.max(rep.residual);
        count += 1;
        ensure(
            rep.residual < 1e-12,
            format!("{} residual {:.2e}", kind, rep.residual),
        )
    };
    let sigma2 = dimer_pseudochiral::<f64>();
    let mut dimers = reference_dimers().to_vec();
    dimers.extend(random_dimers(4, 10));
    for spec in &dimers {
        record(
            &build_dimer(spec).unwrap(),
            &sigma2,
            SymmetryKind::PseudoChirality,
        )?;
    }
    for (n, removed) in [(10, vec![]), (11, vec![]), (11, vec![(11, 6)])] {
        let h = lattice(n, GainProfile::LeftGainRightLoss, removed.clone());
        let c = sublattice_operator::<f64>(n, &removed).unwrap().c;
        record(
            &h,
            &lattice_pseudochiral(n, &removed).unwrap(),
            SymmetryKind::PseudoChirality,
        )?;
        record(&h, &c, SymmetryKind::PseudoAntiHermiticity)?;
        record(&h, &parity_operator(n, &removed).unwrap(), SymmetryKind::Pt)?;
        let both = lattice(n, GainProfile::BothEdgesGain, removed.clone());
        record(&both, &c, SymmetryKind::PseudoAntiHermiticity)?;
    }
    for seed in 0..20u64 {
        let n = if seed % 2 == 0 { 10 } else { 11 };
        let h = lattice(n, GainProfile::Custom(random_profile(n, 0.5, seed)), vec![]);
        let c = sublattice_operator::<f64>(n, &[]).unwrap().c;
        record(&h, &c, SymmetryKind::PseudoAntiHermiticity)?;
    }
    Ok(format!("{count} relations, worst residual {worst:.2e}"))
}

fn spectrum_symmetries() -> Outcome {
    let lgrl = decompose(&lattice(11, GainProfile::LeftGainRightLoss, vec![])).unwrap();
    let origin = spectrum_mismatch(lgrl.eigenvalues(), SpectrumSymmetry::Origin);
    let mirror = spectrum_mismatch(lgrl.eigenvalues(), SpectrumSymmetry::RealAxisMirror);
    ensure(
        origin < 1e-9 && mirror < 1e-9,
        format!("left-gain-right-loss mismatch {origin:.2e} / {mirror:.2e}"),
    )?;
    let beg = decompose(&lattice(11, GainProfile::BothEdgesGain, vec![])).unwrap();
    let b_origin = spectrum_mismatch(beg.eigenvalues(), SpectrumSymmetry::Origin);
    let b_mirror = spectrum_mismatch(beg.eigenvalues(), SpectrumSymmetry::RealAxisMirror);
    ensure(
        b_mirror < 1e-9,
        format!("both-edges-gain mirror mismatch {b_mirror:.2e}"),
    )?;
    ensure(
        b_origin > 1e-9,
        format!("both-edges-gain unexpectedly origin symmetric ({b_origin:.2e})"),
    )?;
    Ok(format!(
        "gain/loss: origin {origin:.1e}, mirror {mirror:.1e}; both-gain: mirror {b_mirror:.1e}, origin broken by {b_origin:.2e}"
    ))
}

fn operator_parity_law() -> Outcome {
    for (n, parity, sign) in [
        (10, OperatorParity::Antisymmetric, -1.0),
        (11, OperatorParity::Symmetric, 1.0),
    ] {
        let a = lattice_pseudochiral::<f64>(n, &[]).unwrap();
        let got = operator_parity(&a, 0.0);
        ensure(got == parity, format!("n={n}: PC is {got:?}"))?;
        let dim = a.dim();
        let defect = a.matrix() * a.matrix() - DMatrix::<C64>::identity(dim, dim) * cx(sign, 0.0);
        ensure(
            max_entry(&defect) == 0.0,
            format!("n={n}: A^2 defect {:.2e}", max_entry(&defect)),
        )?;
    }
    Ok("n=10 antisymmetric with A^2=-I, n=11 symmetric with A^2=I (exact)".into())
}

fn zero_mode() -> Outcome {
    let dec = decompose(&lattice(11, GainProfile::LeftGainRightLoss, vec![])).unwrap();
    let zeros: Vec<usize> = (0..dec.len())
        .filter(|&mu| dec.eigenvalue(mu).norm() < 1e-9)
        .collect();
    ensure(
        zeros.len() == 1,
        format!("n=11 has {} zero modes", zeros.len()),
    )?;
    let a = lattice_pseudochiral::<f64>(11, &[]).unwrap();
    let map = chirality_map(&dec, &a, zeros[0]).map_err(|e| e.to_string())?;
    ensure(
        map.partner == zeros[0],
        format!("zero mode maps to mode {}", map.partner),
    )?;
    let dec10 = decompose(&lattice(10, GainProfile::LeftGainRightLoss, vec![])).unwrap();
    let min10 = dec10
        .eigenvalues()
        .iter()
        .map(|w| w.norm())
        .fold(f64::INFINITY, f64::min);
    ensure(min10 > 0.01, format!("n=10 min |w| = {min10:.3e}"))?;
    Ok(format!(
        "n=11 zero mode {} (|w| {:.1e}) maps to itself, residual {:.1e}; n=10 min |w| {min10:.5}",
        zeros[0],
        dec.eigenvalue(zeros[0]).norm(),
        map.residual
    ))
}

fn c_minus_one() -> Outcome {
    let dec = decompose(&lattice(10, GainProfile::LeftGainRightLoss, vec![])).unwrap();
    let a = lattice_pseudochiral::<f64>(10, &[]).unwrap();
    let pairing = pair_modes(&dec, &PairingOptions::default());
    ensure(
        pairing.pairs.len() == 50,
        format!("{} pairs at n=10", pairing.pairs.len()),
    )?;
    let mut worst = 0.0f64;
    for &(mu, _) in &pairing.pairs {
        let map = chirality_map(&dec, &a, mu).map_err(|e| e.to_string())?;
        worst = worst.max((map.coefficient + 1.0).norm());
    }
    ensure(worst <= 1e-10, format!("lattice |c + 1| up to {worst:.2e}"))?;
    let sigma2 = dimer_pseudochiral::<f64>();
    let mut worst_dimer = 0.0f64;
    let mut specs = reference_dimers().to_vec();
    specs.extend(random_dimers(5, 20));
    for spec in &specs {
        let d = decompose(&build_dimer(spec).unwrap()).unwrap();
        for mu in 0..2 {
            let map = chirality_map(&d, &sigma2, mu).map_err(|e| e.to_string())?;
            worst_dimer = worst_dimer.max((map.coefficient + 1.0).norm());
        }
    }
    ensure(
        worst_dimer <= 1e-12,
        format!("dimer |c + 1| up to {worst_dimer:.2e}"),
    )?;
    Ok(format!(
        "50 lattice pairs |c+1| <= {worst:.1e}; {} dimers |c+1| <= {worst_dimer:.1e}",
        specs.len()
    ))
}

fn packet(removed: &str, zero: bool, ccw: bool) -> String {
    format!(
        r#"{{"experiment": "wavepacket", "model": {{"kind": "lattice", "n": 11, "removed_sites": {removed}}},
            "observables": ["A_PC"], "time": {{"t_max": 20, "dt": 0.01}},
            "wavepacket": {{"band_selector": {{"gap": "BD1"}}, "include_zero_mode": {zero}, "include_ccw_partners": {ccw}}}}}"#
    )
}

fn pair_excitation() -> Outcome {
    let mut notes = Vec::new();
    for (label, removed) in [("clean", "[]"), ("top-center removed", "[[11, 6]]")] {
        let pure = cli_run(&packet(removed, false, false));
        let peak = pure["summary"]["observables"]["A_PC"]["peak"]
            .as_f64()
            .unwrap();
        ensure(peak < 1e-8, format!("{label}: pure CW |(A)| = {peak:.2e}"))?;
        notes.push(format!("{label}: CW {peak:.1e}"));

        let mut variants = vec![("+CCW", packet(removed, false, true))];
        if removed == "[]" {
            variants.push(("+zero", packet(removed, true, false)));
        }
        for (tag, cfg) in variants {
            let rep = cli_run(&cfg);
            let a = &rep["summary"]["observables"]["A_PC"];
            let (value, drift) = (a["peak"].as_f64().unwrap(), a["drift"].as_f64().unwrap());
            let power = rep["summary"]["max_power"].as_f64().unwrap();
            ensure(
                value > 1e-3 * power,
                format!("{label} {tag}: |(A)| {value:.2e} vs power {power:.2e}"),
            )?;
            ensure(drift < 1e-8, format!("{label} {tag}: drift {drift:.2e}"))?;
            notes.push(format!(
                "{tag} |(A)| {value:.3} (power {power:.2}, drift {drift:.0e})"
            ));
        }
    }
    Ok(notes.join(", "))
}

fn random_matrix(r: &mut ChaCha8Rng, dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |_, _| random_c(r, 1.0))
}

fn ehrenfest() -> Outcome {
    let mut r = rng(6);
    let mut ratios = Vec::new();
    for trial in 0..10 {
        let dim = 3 + trial % 4;
        let raw = random_matrix(&mut r, dim);
        let norm = raw.clone().singular_values().max();
        let h = Operator64::new(raw / cx(norm, 0.0), Role::Hamiltonian).unwrap();
        let a = random_matrix(&mut r, dim);
        let psi0 = random_state(&mut r, dim);
        let mut errors = Vec::new();
        for steps in [20usize, 40] {
            let dt = 1.0 / steps as f64;
            let times = uniform_times(1.0, steps);
            let traj =
                evolve_with(&h, &psi0, &times, Propagator::Rk4, &EvolveOptions { dt }).unwrap();
            let mid = steps / 2;
            let ahead = expectation_t(traj.state(mid + 1), &a).unwrap();
            let behind = expectation_t(traj.state(mid - 1), &a).unwrap();
            let fd = (ahead - behind) / cx(2.0 * dt, 0.0);
            let exact =
                ehrenfest_rhs(traj.state(mid), &a, h.matrix(), Convention::Transpose).unwrap();
            errors.push((fd - exact).norm());
        }
        let ratio = errors[0] / errors[1];
        ensure(
            (ratio - 4.0).abs() <= 0.5,
            format!("trial {trial}: error ratio {ratio:.3}"),
        )?;
        ratios.push(ratio);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "10 random pairs, error ratio in [{lo:.3}, {hi:.3}]"
    ))
}

fn bands() -> Outcome {
    let rep = cli_run(
        r#"{"experiment": "bands", "model": {"kind": "lattice", "n": 4}, "k_grid": {"nkx": 50, "nky": 50}}"#,
    );
    let s = &rep["summary"];
    let degeneracy = s["gamma_degeneracy"].as_f64().unwrap();
    let pairing = s["energy_pairing"].as_f64().unwrap();
    let gap = s["lower_gap"]["global"].as_f64().unwrap();
    ensure(s["points"].as_u64() == Some(2500), "grid is not 50x50")?;
    ensure(
        degeneracy < 1e-10,
        format!("Gamma degeneracy {degeneracy:.2e}"),
    )?;
    ensure(
        pairing < 1e-10,
        format!("E -> -E pairing defect {pairing:.2e}"),
    )?;
    ensure(gap > 0.0, format!("lower gap {gap}"))?;
    let reference = 1.531208269255437;
    ensure(
        (gap - reference).abs() < 1e-9,
        format!("lower gap {gap:.15} differs from {reference}"),
    )?;
    Ok(format!(
        "Gamma split {degeneracy:.1e}, pairing {pairing:.1e}, lower gap {gap:.12}"
    ))
}

fn cross_method() -> Outcome {
    let mut r = rng(7);
    let times = uniform_times(10.0, 1000);
    let dimer = build_dimer(&reference_dimers()[0]).unwrap();
    let five = lattice(5, GainProfile::LeftGainRightLoss, vec![]);
    let mut notes = Vec::new();
    for (label, h, psi0) in [
        (
            "dimer",
            dimer,
            DVector::from_vec(vec![cx(2.0, 0.0), cx(1.0, 0.0)]),
        ),
        ("n=5", five, random_state(&mut r, 25)),
    ] {
        let eig = evolve(&h, &psi0, &times, Propagator::Eigenbasis).map_err(|e| e.to_string())?;
        let expm =
            evolve(&h, &psi0, &times, Propagator::MatrixExponential).map_err(|e| e.to_string())?;
        let rk4 = evolve(&h, &psi0, &times, Propagator::Rk4).map_err(|e| e.to_string())?;
        let d1 = eig.max_deviation(&expm).unwrap();
        let d2 = eig.max_deviation(&rk4).unwrap();
        let d3 = expm.max_deviation(&rk4).unwrap();
        let worst = d1.max(d2).max(d3);
        ensure(
            worst < 1e-6,
            format!("{label}: eig/expm {d1:.2e}, eig/rk4 {d2:.2e}, expm/rk4 {d3:.2e}"),
        )?;
        notes.push(format!("{label}: eig/expm {d1:.1e}, eig/rk4 {d2:.1e}"));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("dimer spectrum", dimer_spectrum),
        ("universal vanishing", universal_vanishing),
        ("dimer conservation", dimer_conservation),
        ("symmetry residuals", symmetry_residuals),
        ("spectrum symmetries", spectrum_symmetries),
        ("operator parity", operator_parity_law),
        ("zero mode", zero_mode),
        ("c = -1 law", c_minus_one),
        ("pair excitation", pair_excitation),
        ("ehrenfest consistency", ehrenfest),
        ("band structure", bands),
        ("cross-method evolution", cross_method),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
