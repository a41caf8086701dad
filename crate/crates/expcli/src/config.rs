//! JSON experiment configuration, schema version 1.
//!
//! Complex numbers are `[re, im]` pairs; lattice sites are 1-based
//! `[row, col]` pairs with row 1 at the bottom.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use pseudochiral::{DimerSpec64, GainProfile, LatticeSpec64, C64};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Dimer,
    LatticeSpectrum,
    Bands,
    Wavepacket,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Dimer => "dimer",
            ExperimentKind::LatticeSpectrum => "lattice_spectrum",
            ExperimentKind::Bands => "bands",
            ExperimentKind::Wavepacket => "wavepacket",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Dimer {
        b1: [f64; 2],
        b2: [f64; 2],
        b3: [f64; 2],
    },
    Lattice {
        n: usize,
        #[serde(default = "default_g")]
        g: f64,
        #[serde(default = "default_gamma")]
        gamma: f64,
        #[serde(default)]
        gain_profile: GainProfileConfig,
        #[serde(default)]
        removed_sites: Vec<[usize; 2]>,
    },
}

fn default_g() -> f64 {
    1.0
}

fn default_gamma() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainProfileConfig {
    #[default]
    LeftGainRightLoss,
    BothEdgesGain,
    /// Explicit imaginary on-site potentials, row-major over all `n^2` sites.
    Custom(Vec<f64>),
    /// Independent uniform draws in `[-amplitude, amplitude]`, seeded by the config seed.
    Random {
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub dt: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig {
            t_max: 20.0,
            dt: 0.01,
        }
    }
}

impl TimeConfig {
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt).round().max(1.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservableToken {
    #[serde(rename = "sigma2")]
    Sigma2,
    #[serde(rename = "Pi")]
    Pi,
    #[serde(rename = "A_PC")]
    APc,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "P")]
    P,
    #[serde(rename = "identity")]
    Identity,
}

impl ObservableToken {
    pub fn name(self) -> &'static str {
        match self {
            ObservableToken::Sigma2 => "sigma2",
            ObservableToken::Pi => "Pi",
            ObservableToken::APc => "A_PC",
            ObservableToken::C => "C",
            ObservableToken::P => "P",
            ObservableToken::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorChoice {
    /// Eigenbasis unless the populated modes sit at an exceptional point.
    Auto,
    Eigenbasis,
    MatrixExponential,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gap {
    BD1,
    BD2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSelector {
    pub gap: Gap,
    #[serde(default = "default_edge_fraction")]
    pub edge_fraction: f64,
}

fn default_edge_fraction() -> f64 {
    0.6
}

/// Gaussian weights over the selected band, indexed by ascending `Re w`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightProfile {
    /// Defaults to the middle of the band.
    #[serde(default)]
    pub center_index: Option<f64>,
    /// Defaults to a sixth of the band size.
    #[serde(default)]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketConfig {
    pub band_selector: BandSelector,
    #[serde(default)]
    pub weight_profile: WeightProfile,
    #[serde(default)]
    pub include_zero_mode: bool,
    #[serde(default)]
    pub include_ccw_partners: bool,
    /// Times at which site-resolved intensities are dumped (nearest grid point).
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

impl Default for WavepacketConfig {
    fn default() -> Self {
        WavepacketConfig {
            band_selector: BandSelector {
                gap: Gap::BD1,
                edge_fraction: default_edge_fraction(),
            },
            weight_profile: WeightProfile::default(),
            include_zero_mode: false,
            include_ccw_partners: false,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGrid {
    pub nkx: usize,
    pub nky: usize,
}

impl Default for KGrid {
    fn default() -> Self {
        KGrid { nkx: 50, nky: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub schema: u32,
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    pub model: ModelConfig,
    #[serde(default)]
    pub time: Option<TimeConfig>,
    #[serde(default)]
    pub observables: Vec<ObservableToken>,
    #[serde(default)]
    pub propagator: Option<PropagatorChoice>,
    /// Dimer initial state; defaults to `[2, 1]`.
    #[serde(default)]
    pub initial_state: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub wavepacket: Option<WavepacketConfig>,
    #[serde(default)]
    pub k_grid: Option<KGrid>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn complex(z: [f64; 2]) -> C64 {
    C64::new(z[0], z[1])
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("malformed config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn kind(&self) -> CliResult<ExperimentKind> {
        self.experiment
            .ok_or_else(|| CliError::config("experiment kind not given"))
    }

    /// Fills every defaulted field and validates the combination. Idempotent.
    pub fn resolve(mut self) -> CliResult<Self> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        let kind = self.kind()?;
        let is_dimer = matches!(self.model, ModelConfig::Dimer { .. });
        if (kind == ExperimentKind::Dimer) != is_dimer {
            return Err(CliError::config(format!(
                "experiment {} needs a {} model",
                kind.name(),
                if kind == ExperimentKind::Dimer {
                    "dimer"
                } else {
                    "lattice"
                }
            )));
        }
        self.validate_model()?;

        if matches!(kind, ExperimentKind::Dimer | ExperimentKind::Wavepacket) {
            let time = self.time.unwrap_or_default();
            if !(time.t_max.is_finite() && time.t_max > 0.0 && time.dt.is_finite() && time.dt > 0.0)
            {
                return Err(CliError::config("time.t_max and time.dt must be positive"));
            }
            self.time = Some(time);
            self.propagator = Some(self.propagator.unwrap_or(PropagatorChoice::Auto));
            if self.observables.is_empty() {
                self.observables = if is_dimer {
                    vec![ObservableToken::Sigma2, ObservableToken::Pi]
                } else {
                    vec![ObservableToken::APc]
                };
            }
        }
        for tok in &self.observables {
            self.check_observable(*tok)?;
        }

        match kind {
            ExperimentKind::Dimer => {
                let state = self
                    .initial_state
                    .take()
                    .unwrap_or_else(|| vec![[2.0, 0.0], [1.0, 0.0]]);
                if state.len() != 2 || !state.iter().flatten().all(|v| v.is_finite()) {
                    return Err(CliError::config(
                        "dimer initial_state needs two finite complex entries",
                    ));
                }
                self.initial_state = Some(state);
            }
            ExperimentKind::Wavepacket => {
                let mut wp = self.wavepacket.take().unwrap_or_default();
                let ef = wp.band_selector.edge_fraction;
                if !(0.0..=1.0).contains(&ef) {
                    return Err(CliError::config(
                        "band_selector.edge_fraction must lie in [0, 1]",
                    ));
                }
                if let Some(w) = wp.weight_profile.width {
                    if !(w.is_finite() && w > 0.0) {
                        return Err(CliError::config("weight_profile.width must be positive"));
                    }
                }
                if wp.snapshot_times.iter().any(|t| !t.is_finite()) {
                    return Err(CliError::config("snapshot_times must be finite"));
                }
                wp.snapshot_times
                    .sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                self.wavepacket = Some(wp);
            }
            ExperimentKind::Bands => {
                let grid = self.k_grid.unwrap_or_default();
                if grid.nkx < 2 || grid.nky < 2 {
                    return Err(CliError::config("k_grid needs at least 2 points per axis"));
                }
                self.k_grid = Some(grid);
            }
            ExperimentKind::LatticeSpectrum => {}
        }
        Ok(self)
    }

    fn validate_model(&self) -> CliResult<()> {
        match &self.model {
            ModelConfig::Dimer { b1, b2, b3 } => {
                if ![b1, b2, b3].iter().all(|b| b.iter().all(|v| v.is_finite())) {
                    return Err(CliError::config("dimer field must be finite"));
                }
            }
            ModelConfig::Lattice { .. } => {
                // Builds the spec, which runs every lattice invariant check.
                let spec = self.lattice_spec()?;
                spec.validate()
                    .map_err(|e| CliError::config(e.to_string()))?;
                if let GainProfileConfig::Random { amplitude } = self.gain_profile() {
                    if !(amplitude.is_finite() && *amplitude >= 0.0) {
                        return Err(CliError::config(
                            "random gain amplitude must be non-negative",
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn gain_profile(&self) -> &GainProfileConfig {
        match &self.model {
            ModelConfig::Lattice { gain_profile, .. } => gain_profile,
            ModelConfig::Dimer { .. } => &GainProfileConfig::LeftGainRightLoss,
        }
    }

    fn check_observable(&self, tok: ObservableToken) -> CliResult<()> {
        use ObservableToken::*;
        let ok = match (&self.model, tok) {
            (_, Identity) => true,
            (ModelConfig::Dimer { .. }, Sigma2 | Pi) => true,
            (ModelConfig::Lattice { .. }, C) => true,
            (ModelConfig::Lattice { .. }, APc | P) => {
                let removed = self.removed_sites();
                pseudochiral::SiteMap::new(self.lattice_n(), &removed)
                    .map(|m| m.is_mirror_symmetric())
                    .unwrap_or(false)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::config(format!(
                "observable {} cannot be built for this model",
                tok.name()
            )))
        }
    }

    pub fn dimer_spec(&self) -> CliResult<DimerSpec64> {
        match &self.model {
            ModelConfig::Dimer { b1, b2, b3 } => {
                Ok(DimerSpec64::new(complex(*b1), complex(*b2), complex(*b3)))
            }
            _ => Err(CliError::config("not a dimer model")),
        }
    }

    pub fn lattice_n(&self) -> usize {
        match &self.model {
            ModelConfig::Lattice { n, .. } => *n,
            ModelConfig::Dimer { .. } => 0,
        }
    }

    pub fn removed_sites(&self) -> Vec<(usize, usize)> {
        match &self.model {
            ModelConfig::Lattice { removed_sites, .. } => {
                removed_sites.iter().map(|s| (s[0], s[1])).collect()
            }
            ModelConfig::Dimer { .. } => Vec::new(),
        }
    }

    pub fn lattice_spec(&self) -> CliResult<LatticeSpec64> {
        let ModelConfig::Lattice {
            n,
            g,
            gamma,
            gain_profile,
            ..
        } = &self.model
        else {
            return Err(CliError::config("not a lattice model"));
        };
        let profile = match gain_profile {
            GainProfileConfig::LeftGainRightLoss => GainProfile::LeftGainRightLoss,
            GainProfileConfig::BothEdgesGain => GainProfile::BothEdgesGain,
            GainProfileConfig::Custom(values) => GainProfile::Custom(values.clone()),
            GainProfileConfig::Random { amplitude } => {
                GainProfile::Custom(random_profile(*n, *amplitude, self.seed))
            }
        };
        Ok(LatticeSpec64::new(*n, *g, *gamma)
            .with_profile(profile)
            .with_removed(self.removed_sites()))
    }

    pub fn coupling(&self) -> f64 {
        match &self.model {
            ModelConfig::Lattice { g, .. } => *g,
            ModelConfig::Dimer { .. } => 1.0,
        }
    }

    pub fn initial_dimer_state(&self) -> Vec<C64> {
        self.initial_state
            .as_ref()
            .map(|s| s.iter().map(|z| complex(*z)).collect())
            .unwrap_or_default()
    }
}

/// Seeded draws for a randomized gain/loss landscape, one per site of the full lattice.
pub fn random_profile(n: usize, amplitude: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * n)
        .map(|_| {
            if amplitude > 0.0 {
                rng.random_range(-amplitude..=amplitude)
            } else {
                0.0
            }
        })
        .collect()
}
