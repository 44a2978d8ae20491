//! Experiment configuration: a TOML file with nested sections, overridable
//! from the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dqssa::centrality::{CentralityMethod, DEFAULT_GATEWAY_WEIGHT};
use dqssa::graph::{Delimiter, HeaderPolicy};
use dqssa::swarm::{BatParams, OppositionForm, PsoParams, QuantumParams};
use dqssa::{Algorithm, DatasetDescriptor, IdBase, InfectionProbability, SwarmConfig};
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// A seed selector: one of the swarm optimizers or a centrality ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Selector {
    Swarm(Algorithm),
    Centrality(CentralityMethod),
}

impl Selector {
    pub fn all() -> Vec<Selector> {
        Algorithm::ALL
            .into_iter()
            .map(Selector::Swarm)
            .chain(CentralityMethod::ALL.into_iter().map(Selector::Centrality))
            .collect()
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Swarm(a) => a.fmt(f),
            Selector::Centrality(c) => c.fmt(f),
        }
    }
}

impl FromStr for Selector {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Algorithm>()
            .map(Selector::Swarm)
            .or_else(|_| s.parse::<CentralityMethod>().map(Selector::Centrality))
            .map_err(|_| BenchError::Config(format!("unknown algorithm {s:?}")))
    }
}

impl TryFrom<String> for Selector {
    type Error = BenchError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Selector> for String {
    fn from(s: Selector) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeaderMode {
    #[default]
    Auto,
    None,
    SkipFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub id_base: u8,
    /// Single-character field separator; whitespace when absent.
    #[serde(default)]
    pub delimiter: Option<char>,
    #[serde(default)]
    pub header: HeaderMode,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            name: None,
            id_base: 0,
            delimiter: None,
            header: HeaderMode::Auto,
        }
    }

    pub fn descriptor(&self, base_dir: &Path) -> Result<DatasetDescriptor, BenchError> {
        let path = if self.path.is_absolute() {
            self.path.clone()
        } else {
            base_dir.join(&self.path)
        };
        let id_base = match self.id_base {
            0 => IdBase::Zero,
            1 => IdBase::One,
            other => {
                return Err(BenchError::Config(format!(
                    "{}: id_base must be 0 or 1, got {other}",
                    self.path.display()
                )))
            }
        };
        let mut d = DatasetDescriptor::new(path)
            .with_id_base(id_base)
            .with_header(match self.header {
                HeaderMode::Auto => HeaderPolicy::Auto,
                HeaderMode::None => HeaderPolicy::None,
                HeaderMode::SkipFirst => HeaderPolicy::SkipFirst,
            });
        if let Some(c) = self.delimiter {
            d = d.with_delimiter(Delimiter::Char(c));
        }
        if let Some(name) = &self.name {
            d = d.with_name(name.clone());
        }
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwarmSection {
    pub population: usize,
    pub iterations: usize,
    pub sigma: f64,
    pub elite_fraction: f64,
    pub mutation_fraction: f64,
    /// `printed` (μ(ub − lb) − x) or `classic` (μ(ub + lb) − x).
    pub opposition: String,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub min_frequency: f64,
    pub max_frequency: f64,
    pub loudness: f64,
    pub pulse_rate: f64,
}

impl Default for SwarmSection {
    fn default() -> Self {
        let q = QuantumParams::default();
        let pso = PsoParams::default();
        let bat = BatParams::default();
        Self {
            population: 20,
            iterations: 100,
            sigma: q.sigma,
            elite_fraction: q.elite_fraction,
            mutation_fraction: q.mutation_fraction,
            opposition: "printed".to_owned(),
            inertia: pso.inertia,
            cognitive: pso.cognitive,
            social: pso.social,
            min_frequency: bat.min_frequency,
            max_frequency: bat.max_frequency,
            loudness: bat.loudness,
            pulse_rate: bat.pulse_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffusionSection {
    pub simulations: usize,
}

impl Default for DiffusionSection {
    fn default() -> Self {
        Self {
            simulations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommunitySection {
    pub resolution: f64,
    pub pool_factor: f64,
    pub gateway_weight: f64,
}

impl Default for CommunitySection {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            pool_factor: 5.0,
            gateway_weight: DEFAULT_GATEWAY_WEIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetSpec>,
    pub algorithms: Vec<Selector>,
    pub spreader_fractions: Vec<f64>,
    /// Infection probability shared by LIE and the cascade model.
    pub p: f64,
    pub repetitions: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Concurrent cells; 0 uses every available core.
    pub workers: usize,
    pub swarm: SwarmSection,
    pub diffusion: DiffusionSection,
    pub community: CommunitySection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            algorithms: Selector::all(),
            spreader_fractions: vec![0.01, 0.02, 0.03, 0.04, 0.05],
            p: 0.1,
            repetitions: 10,
            seed: 42,
            out: PathBuf::from("results"),
            workers: 0,
            swarm: SwarmSection::default(),
            diffusion: DiffusionSection::default(),
            community: CommunitySection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Sorts and deduplicates the fractions, then checks every field.
    pub fn normalize(&mut self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        if self.datasets.is_empty() {
            return bad("no datasets configured".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms configured".into());
        }
        if let Some(f) = self
            .spreader_fractions
            .iter()
            .find(|f| !(**f > 0.0 && **f < 1.0))
        {
            return bad(format!("spreader fraction {f} not in (0, 1)"));
        }
        self.spreader_fractions.sort_by(f64::total_cmp);
        self.spreader_fractions.dedup();
        if self.spreader_fractions.is_empty() {
            return bad("no spreader fractions configured".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        InfectionProbability::new(self.p).map_err(|e| BenchError::Config(e.to_string()))?;
        if self.diffusion.simulations == 0 {
            return bad("diffusion.simulations must be at least 1".into());
        }
        self.opposition_form()?;
        // surface swarm parameter errors before any work starts
        self.swarm_config(Algorithm::Dqssa, 1, 0)
            .validate(usize::MAX)
            .map_err(|e| BenchError::Config(e.to_string()))?;
        Ok(())
    }

    fn opposition_form(&self) -> Result<OppositionForm, BenchError> {
        match self.swarm.opposition.as_str() {
            "printed" => Ok(OppositionForm::Printed),
            "classic" => Ok(OppositionForm::Classic),
            other => Err(BenchError::Config(format!(
                "swarm.opposition must be \"printed\" or \"classic\", got {other:?}"
            ))),
        }
    }

    pub fn swarm_config(&self, algorithm: Algorithm, k: usize, rng_seed: u64) -> SwarmConfig {
        let s = &self.swarm;
        let mut c = SwarmConfig::new(algorithm, k);
        c.population_size = s.population;
        c.max_iterations = s.iterations;
        c.rng_seed = rng_seed;
        c.p = InfectionProbability::new(self.p).unwrap_or_default();
        c.quantum = QuantumParams {
            sigma: s.sigma,
            elite_fraction: s.elite_fraction,
            mutation_fraction: s.mutation_fraction,
            opposition: self.opposition_form().unwrap_or_default(),
        };
        c.pso = PsoParams {
            inertia: s.inertia,
            cognitive: s.cognitive,
            social: s.social,
            ..PsoParams::default()
        };
        c.bat = BatParams {
            min_frequency: s.min_frequency,
            max_frequency: s.max_frequency,
            loudness: s.loudness,
            pulse_rate: s.pulse_rate,
            ..BatParams::default()
        };
        c
    }
}

/// Seed-set size for a spreader fraction: `max(1, round(fraction · n))`.
pub fn seed_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).round() as usize).max(1)
}
