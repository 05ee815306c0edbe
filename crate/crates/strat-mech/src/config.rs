//! Experiment configuration: one TOML table per subcommand, every value a
//! scalar, a string or a short numeric array.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub classify: ClassifyConfig,
    pub simulate: Option<SimulateConfig>,
    #[serde(default)]
    pub compare: CompareConfig,
    pub plot: Option<PlotConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    #[serde(default)]
    pub points: Vec<PhaseSpec>,
}

/// A point of `T*S^9` given by the two columns of `q` and of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSpec {
    pub q1: [f64; 5],
    pub q2: [f64; 5],
    #[serde(default)]
    pub p1: [f64; 5],
    #[serde(default)]
    pub p2: [f64; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Exact geodesic flow (or RATTLE) on `T*S^9`.
    Full,
    /// Minimal-coupling flow on the reduced space.
    ReducedMcf,
    /// Lorentz flow on the base for a pole spin.
    ReducedLorentz,
    /// Wong's equations with a constant charge in `[-s, s]`.
    Wong,
}

impl Engine {
    pub fn label(&self) -> &'static str {
        match self {
            Engine::Full => "full",
            Engine::ReducedMcf => "reduced-mcf",
            Engine::ReducedLorentz => "reduced-lorentz",
            Engine::Wong => "wong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FullMethod {
    #[default]
    Exact,
    Rattle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinRegion {
    #[default]
    Regular,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Drawn from the seeded generator; the region defaults to `regular`
    /// for the full and minimal-coupling engines and to `pole` otherwise.
    Random {
        region: Option<SpinRegion>,
        speed: Option<f64>,
    },
    /// Frame `(a, b, α, β)`, horizontal covector `p0` and spin vector.
    Reduced {
        frame: [f64; 4],
        p0: [f64; 4],
        spin: [f64; 3],
    },
    Phase {
        q1: [f64; 5],
        q2: [f64; 5],
        #[serde(default)]
        p1: [f64; 5],
        #[serde(default)]
        p2: [f64; 5],
    },
    /// Base point on `S^2(1/2)`, tangent velocity and charge.
    Base {
        position: [f64; 3],
        velocity: [f64; 3],
        charge: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub engine: Engine,
    /// Orbit scale `s`.
    #[serde(default = "unit")]
    pub scale: f64,
    pub horizon: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub method: FullMethod,
    /// Strength of the invariant Gram-coupling potential used with RATTLE.
    #[serde(default)]
    pub coupling: f64,
    pub initial: InitialSpec,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default = "default_name")]
    pub name: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    #[serde(default = "default_cases")]
    pub cases: usize,
    pub seed: Option<u64>,
    /// Fixed orbit scale; drawn per case when absent.
    pub scale: Option<f64>,
    #[serde(default)]
    pub region: SpinRegion,
    #[serde(default = "unit")]
    pub horizon: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    /// Step of the reduced engine; equal to `step` when absent.
    pub reduced_step: Option<f64>,
    #[serde(default = "default_tol_distance")]
    pub tol_base: f64,
    #[serde(default = "default_tol_distance")]
    pub tol_spin: f64,
    #[serde(default = "default_tol_energy")]
    pub tol_energy: f64,
    #[serde(default = "default_compare_name")]
    pub name: String,
}

impl Default for CompareConfig {
    fn default() -> Self {
        toml::from_str("").expect("every compare field has a default")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotConfig {
    /// Trajectory CSV files, relative to the config file.
    pub inputs: Vec<PathBuf>,
}

fn unit() -> f64 {
    1.0
}

fn default_step() -> f64 {
    1e-3
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

fn default_name() -> String {
    "trajectory".into()
}

fn default_compare_name() -> String {
    "compare".into()
}

fn default_cases() -> usize {
    20
}

fn default_tol_distance() -> f64 {
    1e-4
}

fn default_tol_energy() -> f64 {
    1e-8
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn file_stem(name: &str) -> CliResult<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "output name {name:?} must be a nonempty [A-Za-z0-9_-] stem"
        )))
    }
}

impl SimulateConfig {
    pub fn validate(&self) -> CliResult<()> {
        positive("scale", self.scale)?;
        positive("horizon", self.horizon)?;
        positive("step", self.step)?;
        if self.coupling != 0.0
            && !(self.engine == Engine::Full && self.method == FullMethod::Rattle)
        {
            return Err(CliError::Validation(
                "coupling requires engine = \"full\" with method = \"rattle\"".into(),
            ));
        }
        if !self.coupling.is_finite() {
            return Err(CliError::Validation("coupling must be finite".into()));
        }
        if self.formats.is_empty() {
            return Err(CliError::Validation("formats must not be empty".into()));
        }
        if let InitialSpec::Random { speed: Some(v), .. } = self.initial {
            positive("speed", v)?;
        }
        file_stem(&self.name)
    }
}

impl CompareConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.cases == 0 {
            return Err(CliError::Validation("cases must be at least 1".into()));
        }
        if let Some(s) = self.scale {
            positive("scale", s)?;
        }
        positive("horizon", self.horizon)?;
        positive("step", self.step)?;
        if let Some(h) = self.reduced_step {
            positive("reduced_step", h)?;
        }
        positive("tol_base", self.tol_base)?;
        positive("tol_spin", self.tol_spin)?;
        positive("tol_energy", self.tol_energy)?;
        file_stem(&self.name)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::invalid("malformed config", e))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(&format!("cannot read {}", path.display()), e))?;
        Self::parse(&text)
    }
}
