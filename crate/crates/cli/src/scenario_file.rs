//! TOML scenario files.
//!
//! ```toml
//! schema_version = 1
//! kind = "symmetric"
//!
//! [config]
//! server_freq = 1e11
//! device_freq = 1e10
//! energy_coeff = 1e-27
//! energy_budget = 5.0
//!
//! [symmetric]
//! count = 4
//! cache_count = 1
//! input_bits = 1e6
//! output_bits = 2e6
//! cycles_per_bit = 100.0
//! deadline = 0.02
//! ```
//!
//! Heterogeneous files set `kind = "heterogeneous"`, add `cache_bits` to
//! `[config]` and give exactly one of `[[heterogeneous.viewpoints]]` rows,
//! `heterogeneous.viewpoints_csv` (a path relative to the file) or a
//! `[heterogeneous.zipf]` generator stanza.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vr3c::hetero::{zipf_scenario, ZipfParams};
use vr3c::{ProjectionTask, Scenario, ScenarioKind, SystemConfig};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub config: ConfigBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<SymmetricBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heterogeneous: Option<HeterogeneousBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Symmetric,
    Heterogeneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigBlock {
    pub server_freq: f64,
    pub device_freq: f64,
    pub energy_coeff: f64,
    pub energy_budget: f64,
    /// Heterogeneous only; symmetric files size the cache in FOVs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_bits: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetricBlock {
    pub count: usize,
    pub cache_count: usize,
    pub input_bits: f64,
    pub output_bits: f64,
    pub cycles_per_bit: f64,
    pub deadline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeterogeneousBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewpoints_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewpoints: Option<Vec<ViewpointRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zipf: Option<ZipfStanza>,
}

/// One viewpoint; also the column layout of `viewpoints_csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewpointRow {
    pub probability: f64,
    pub input_bits: f64,
    pub output_bits: f64,
    pub cycles_per_bit: f64,
    pub deadline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZipfStanza {
    pub count: usize,
    pub exponent: f64,
    pub input_bits_min: f64,
    pub input_bits_max: f64,
    pub output_ratio: f64,
    pub cycles_per_bit: f64,
    pub deadline: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles_per_bit_overrides: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline_overrides: Option<Vec<f64>>,
}

impl From<ViewpointRow> for ProjectionTask {
    fn from(r: ViewpointRow) -> Self {
        ProjectionTask {
            input_bits: r.input_bits,
            output_bits: r.output_bits,
            cycles_per_bit: r.cycles_per_bit,
            deadline: r.deadline,
            probability: r.probability,
        }
    }
}

impl From<&ProjectionTask> for ViewpointRow {
    fn from(t: &ProjectionTask) -> Self {
        ViewpointRow {
            probability: t.probability,
            input_bits: t.input_bits,
            output_bits: t.output_bits,
            cycles_per_bit: t.cycles_per_bit,
            deadline: t.deadline,
        }
    }
}

impl From<&ZipfStanza> for ZipfParams {
    fn from(z: &ZipfStanza) -> Self {
        ZipfParams {
            count: z.count,
            exponent: z.exponent,
            input_bits_min: z.input_bits_min,
            input_bits_max: z.input_bits_max,
            output_ratio: z.output_ratio,
            cycles_per_bit: z.cycles_per_bit,
            deadline: z.deadline,
            seed: z.seed,
            cycles_per_bit_overrides: z.cycles_per_bit_overrides.clone(),
            deadline_overrides: z.deadline_overrides.clone(),
        }
    }
}

/// Prefixes the field named by a model validation error with its location
/// in the file.
fn locate(prefix: &str, e: vr3c::Error) -> CliError {
    match e {
        vr3c::Error::InvalidInput { field, reason } => {
            let is_config = matches!(
                field.as_str(),
                "server_freq" | "device_freq" | "energy_coeff" | "energy_budget" | "cache_bits"
            );
            let prefix = if is_config { "config" } else { prefix };
            CliError::input(format!("{prefix}.{field}: {reason}"))
        }
        vr3c::Error::ProbabilitySum { sum } => CliError::input(format!(
            "{prefix}: viewpoint probabilities sum to {sum}, expected 1"
        )),
        other => other.into(),
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| CliError::input(format!("scenario file: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::input(format!(
                "schema_version: unsupported version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario files are plain tables of numbers")
    }

    /// File for a heterogeneous scenario with every viewpoint written out.
    pub fn from_heterogeneous(scenario: &Scenario) -> Self {
        let cfg = scenario.config();
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Heterogeneous,
            config: ConfigBlock {
                server_freq: cfg.server_freq,
                device_freq: cfg.device_freq,
                energy_coeff: cfg.energy_coeff,
                energy_budget: cfg.energy_budget,
                cache_bits: Some(cfg.cache_bits),
            },
            symmetric: None,
            heterogeneous: Some(HeterogeneousBlock {
                viewpoints_csv: None,
                viewpoints: Some(scenario.tasks().iter().map(ViewpointRow::from).collect()),
                zipf: None,
            }),
        }
    }

    fn system_config(&self, cache_bits: f64) -> SystemConfig {
        SystemConfig {
            server_freq: self.config.server_freq,
            device_freq: self.config.device_freq,
            energy_coeff: self.config.energy_coeff,
            energy_budget: self.config.energy_budget,
            cache_bits,
        }
    }

    /// Builds the scenario. `base_dir` anchors a relative `viewpoints_csv`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Scenario> {
        match self.kind {
            Kind::Symmetric => self.resolve_symmetric(),
            Kind::Heterogeneous => self.resolve_heterogeneous(base_dir),
        }
    }

    fn resolve_symmetric(&self) -> Result<Scenario> {
        if self.heterogeneous.is_some() {
            return Err(CliError::input(
                "heterogeneous: block not allowed when kind = \"symmetric\"",
            ));
        }
        if self.config.cache_bits.is_some() {
            return Err(CliError::input(
                "config.cache_bits: not allowed for symmetric scenarios, set symmetric.cache_count",
            ));
        }
        let Some(b) = &self.symmetric else {
            return Err(CliError::input(
                "symmetric: block required when kind = \"symmetric\"",
            ));
        };
        let task = ProjectionTask {
            input_bits: b.input_bits,
            output_bits: b.output_bits,
            cycles_per_bit: b.cycles_per_bit,
            deadline: b.deadline,
            probability: 1.0,
        };
        let cfg = self.system_config(b.cache_count as f64 * b.input_bits);
        Scenario::symmetric(task, b.count, cfg).map_err(|e| locate("symmetric", e))
    }

    fn resolve_heterogeneous(&self, base_dir: &Path) -> Result<Scenario> {
        if self.symmetric.is_some() {
            return Err(CliError::input(
                "symmetric: block not allowed when kind = \"heterogeneous\"",
            ));
        }
        let Some(cache_bits) = self.config.cache_bits else {
            return Err(CliError::input(
                "config.cache_bits: required for heterogeneous scenarios",
            ));
        };
        let Some(b) = &self.heterogeneous else {
            return Err(CliError::input(
                "heterogeneous: block required when kind = \"heterogeneous\"",
            ));
        };
        let sources = [
            b.viewpoints.is_some(),
            b.viewpoints_csv.is_some(),
            b.zipf.is_some(),
        ];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(CliError::input(
                "heterogeneous: give exactly one of viewpoints, viewpoints_csv or zipf",
            ));
        }
        let cfg = self.system_config(cache_bits);
        if let Some(z) = &b.zipf {
            return zipf_scenario(&z.into(), cfg).map_err(|e| locate("heterogeneous.zipf", e));
        }
        let rows = match (&b.viewpoints, &b.viewpoints_csv) {
            (Some(rows), _) => rows.clone(),
            (_, Some(path)) => read_viewpoints_csv(&base_dir.join(path))?,
            _ => unreachable!("exactly one source checked above"),
        };
        let tasks = rows.into_iter().map(ProjectionTask::from).collect();
        Scenario::heterogeneous(tasks, cfg).map_err(|e| locate("heterogeneous", e))
    }

    /// Replaces the seed of a zipf stanza. Returns false if there is none.
    pub fn set_zipf_seed(&mut self, seed: u64) -> bool {
        match self.heterogeneous.as_mut().and_then(|h| h.zipf.as_mut()) {
            Some(z) => {
                z.seed = seed;
                true
            }
            None => false,
        }
    }
}

pub fn read_viewpoints_csv(path: &Path) -> Result<Vec<ViewpointRow>> {
    let field = "heterogeneous.viewpoints_csv";
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::input(format!("{field}: cannot read {}: {e}", path.display())))?;
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| {
                CliError::input(format!("{field}: {} row {}: {e}", path.display(), i + 1))
            })
        })
        .collect()
}

pub fn write_viewpoints_csv(scenario: &Scenario) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for t in scenario.tasks() {
        w.serialize(ViewpointRow::from(t))
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("ASCII numbers")
}

/// A parsed file together with the scenario it describes.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub path: PathBuf,
    pub file: ScenarioFile,
    pub scenario: Scenario,
}

impl Loaded {
    pub fn is_symmetric(&self) -> bool {
        self.scenario.kind() == ScenarioKind::Symmetric
    }
}

/// Reads, parses and resolves a scenario file, optionally overriding the
/// zipf seed first.
pub fn load(path: &Path, seed: Option<u64>) -> Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut file = ScenarioFile::parse(&text)?;
    if let Some(seed) = seed {
        if !file.set_zipf_seed(seed) {
            log::warn!("--seed ignored: {} has no zipf stanza", path.display());
        }
    }
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let scenario = file.resolve(base_dir)?;
    Ok(Loaded {
        path: path.to_path_buf(),
        file,
        scenario,
    })
}
