//! Declarative experiment configs (JSON) and their lowering into runtime
//! objects. Parsing is strict: unknown keys are errors and the failure names
//! the first offending key path, never silently ignored.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::decomposition::{Mode, OracleParams};
use crate::error::{Error, Result};
use crate::family::{AtomBound, AtomRule, CoefficientFamily, DivergenceRule, FamilyRule};
use crate::limits::LimitParams;
use crate::slln::{CorrelationRule, DistributionSpec, GeneratorKind, GeneratorSpec, VarianceRule};
use crate::space::AtomicSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub masses: Vec<f64>,
    #[serde(default)]
    pub tail_mass: f64,
}

impl SpaceConfig {
    pub fn build(&self) -> Result<AtomicSpace> {
        AtomicSpace::new(self.masses.clone(), self.tail_mass)
    }
}

/// One atom of a declared family: its rule and its boundedness tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub rule: AtomRule,
    pub bound: AtomBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum FamilyConfig {
    /// One rule and tag per atom.
    PerAtom { atoms: Vec<AtomConfig> },
    /// The same rule and tag on every atom.
    Uniform {
        rule: AtomRule,
        bound: AtomBound,
        atom_count: usize,
    },
    /// Table family read from CSV (rows = n, columns = atoms, header names
    /// the atoms); the path is resolved relative to the config file.
    TableCsv {
        path: String,
        bounds: Vec<AtomBound>,
    },
    /// Table family inlined in the config.
    Table {
        rows: Vec<Vec<f64>>,
        bounds: Vec<AtomBound>,
    },
}

impl FamilyConfig {
    pub fn build(&self, base_dir: &Path) -> Result<CoefficientFamily> {
        match self {
            FamilyConfig::PerAtom { atoms } => {
                let rules: Vec<AtomRule> = atoms.iter().map(|a| a.rule.clone()).collect();
                let meta: Vec<AtomBound> = atoms.iter().map(|a| a.bound).collect();
                CoefficientFamily::new(FamilyRule::PerAtom(rules), meta, "per-atom family")
            }
            FamilyConfig::Uniform {
                rule,
                bound,
                atom_count,
            } => CoefficientFamily::new(
                FamilyRule::Uniform(rule.clone()),
                vec![*bound; *atom_count],
                "uniform family",
            ),
            FamilyConfig::TableCsv { path, bounds } => {
                let resolved = base_dir.join(path);
                CoefficientFamily::from_csv(&resolved, bounds.clone())
            }
            FamilyConfig::Table { rows, bounds } => CoefficientFamily::new(
                FamilyRule::Table(rows.clone()),
                bounds.clone(),
                "inline table family",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum WindowConfig {
    /// The identity window `1..=horizon`.
    Horizon { horizon: u64 },
    /// An explicit strictly increasing index list.
    Indices { indices: Vec<u64> },
    /// Subsequence selection with the given probing horizon and minimum
    /// surviving block.
    Select { horizon: u64, block: usize },
}

fn default_eps_grid() -> Vec<f64> {
    vec![0.5, 0.1, 0.01]
}

fn default_tol() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// `None` means `max(32, K / 4)`.
    #[serde(default)]
    pub stability_span: Option<usize>,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub divergence: DivergenceRule,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            stability_span: None,
            eps_grid: default_eps_grid(),
            divergence: DivergenceRule::default(),
        }
    }
}

impl ToleranceConfig {
    pub fn limit_params(&self) -> LimitParams {
        LimitParams {
            tol: self.tol,
            stability_span: self.stability_span,
            divergence: self.divergence,
        }
    }
}

fn default_paths() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case", tag = "kind")]
pub enum GeneratorConfig {
    Iid {
        distribution: DistributionSpec,
        length: usize,
        #[serde(default = "default_paths")]
        paths: usize,
    },
    MDependent {
        innovations: DistributionSpec,
        kernel: Vec<f64>,
        length: usize,
        #[serde(default = "default_paths")]
        paths: usize,
    },
    CorrelatedVariance {
        mean: f64,
        variance: VarianceRule,
        correlation: CorrelationRule,
        c: f64,
        length: usize,
        #[serde(default = "default_paths")]
        paths: usize,
    },
}

impl GeneratorConfig {
    pub fn to_spec(&self, seed: u64) -> Result<GeneratorSpec> {
        let spec = match self {
            GeneratorConfig::Iid {
                distribution,
                length,
                paths,
            } => GeneratorSpec::iid(*distribution, seed, *length, *paths),
            GeneratorConfig::MDependent {
                innovations,
                kernel,
                length,
                paths,
            } => GeneratorSpec::m_dependent(*innovations, kernel, seed, *length, *paths)?,
            GeneratorConfig::CorrelatedVariance {
                mean,
                variance,
                correlation,
                c,
                length,
                paths,
            } => GeneratorSpec {
                kind: GeneratorKind::CorrelatedVariance {
                    mean: *mean,
                    variance: *variance,
                    correlation: *correlation,
                    c: *c,
                },
                seed,
                length: *length,
                paths: *paths,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn declared_c(&self) -> Option<f64> {
        match self {
            GeneratorConfig::CorrelatedVariance { c, .. } => Some(*c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            lo: 0.5,
            hi: 1000.0,
            points: 64,
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Vec<f64>> {
        crate::decomposition::geometric_grid(self.lo, self.hi, self.points)
    }
}

fn default_combos() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub m_grid: GridConfig,
    #[serde(default = "default_combos")]
    pub combos: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            m_grid: GridConfig::default(),
            combos: default_combos(),
        }
    }
}

impl OracleConfig {
    pub fn params(&self, seed: u64) -> OracleParams {
        OracleParams {
            combos: self.combos,
            seed,
            ..OracleParams::default()
        }
    }
}

fn default_mode() -> Mode {
    Mode::Exact
}

/// A complete experiment description. Partition runs need `space`, `family`
/// and `window`; sampling runs need `generator`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowConfig>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
}

impl ExperimentConfig {
    /// Parse strictly from JSON text; errors carry the offending key path.
    pub fn from_json(text: &str) -> Result<Self> {
        let deserializer = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(deserializer).map_err(|e| Error::Config {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Epsilon grid, validated.
    pub fn eps_grid(&self) -> Result<Vec<f64>> {
        let grid = &self.tolerances.eps_grid;
        if grid.is_empty() || grid.iter().any(|&e| !(0.0 < e && e < 1.0)) {
            return Err(Error::Config {
                path: "tolerances.eps_grid".into(),
                message: format!("epsilons must lie in (0, 1), got {grid:?}"),
            });
        }
        Ok(grid.clone())
    }

    pub fn require_space(&self) -> Result<&SpaceConfig> {
        self.space.as_ref().ok_or(Error::Config {
            path: "space".into(),
            message: "missing (required for this run)".into(),
        })
    }

    pub fn require_family(&self) -> Result<&FamilyConfig> {
        self.family.as_ref().ok_or(Error::Config {
            path: "family".into(),
            message: "missing (required for this run)".into(),
        })
    }

    pub fn require_window(&self) -> Result<&WindowConfig> {
        self.window.as_ref().ok_or(Error::Config {
            path: "window".into(),
            message: "missing (required for this run)".into(),
        })
    }

    pub fn require_generator(&self) -> Result<&GeneratorConfig> {
        self.generator.as_ref().ok_or(Error::Config {
            path: "generator".into(),
            message: "missing (required for sampling runs)".into(),
        })
    }

    /// All tracked labels of the configured space.
    pub fn all_labels(&self) -> Result<BTreeSet<u32>> {
        Ok(self.require_space()?.build()?.label_set())
    }
}
