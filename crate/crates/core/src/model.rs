//! Domain types, per-viewpoint rate floors, objective evaluation and
//! feasibility checking shared by every solver.
//!
//! Units are fixed throughout: bits, cycles/bit, cycles/s, seconds and
//! Joules. The energy coefficient `k` carries whatever units make
//! `k * f1^2 * I * w` come out in Joules.

use crate::error::{Error, Result};

/// Relative slack allowed when comparing a resource usage against its budget.
///
/// Budgets such as `N * E / (k f1^2 I w)` can be integral in exact
/// arithmetic but not in floating point, so exact comparisons would reject
/// policies that sit exactly on the boundary.
pub const BUDGET_RTOL: f64 = 1e-9;

/// Tolerance on `|sum(P) - 1|` when validating a scenario.
pub const PROBABILITY_TOL: f64 = 1e-9;

/// `used <= budget`, up to [`BUDGET_RTOL`].
pub fn within_budget(used: f64, budget: f64) -> bool {
    used <= budget + BUDGET_RTOL * budget.abs()
}

/// `floor(x)` that tolerates `x` landing a few ulps below an integer.
pub(crate) fn tolerant_floor(x: f64) -> f64 {
    (x + BUDGET_RTOL * x.abs().max(1.0)).floor()
}

/// Projection parameters of one viewpoint plus its request probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionTask {
    /// Size of the 2D FOV (bits).
    pub input_bits: f64,
    /// Size of the 3D FOV (bits).
    pub output_bits: f64,
    pub cycles_per_bit: f64,
    /// Maximum tolerable latency (s).
    pub deadline: f64,
    pub probability: f64,
}

impl ProjectionTask {
    pub fn new(
        input_bits: f64,
        output_bits: f64,
        cycles_per_bit: f64,
        deadline: f64,
        probability: f64,
    ) -> Result<Self> {
        let task = Self {
            input_bits,
            output_bits,
            cycles_per_bit,
            deadline,
            probability,
        };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<()> {
        positive("input_bits", self.input_bits)?;
        positive("output_bits", self.output_bits)?;
        positive("cycles_per_bit", self.cycles_per_bit)?;
        positive("deadline", self.deadline)?;
        if !(0.0..=1.0).contains(&self.probability) {
            return Err(Error::invalid(
                "probability",
                format!("{} is outside [0, 1]", self.probability),
            ));
        }
        Ok(())
    }

    /// Total CPU cycles of one projection, `I * w`.
    pub fn cycles(&self) -> f64 {
        self.input_bits * self.cycles_per_bit
    }

    /// Stereo projection normally at least doubles the data size.
    pub fn has_low_output_ratio(&self) -> bool {
        self.output_bits < 2.0 * self.input_bits
    }
}

/// Platform resources shared by all viewpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// MEC server CPU frequency `f0` (cycles/s).
    pub server_freq: f64,
    /// VR device CPU frequency `f1` (cycles/s).
    pub device_freq: f64,
    /// Energy coefficient `k`; one device cycle costs `k * f1^2` Joules.
    pub energy_coeff: f64,
    /// Average energy available per deadline period (J).
    pub energy_budget: f64,
    /// Device cache capacity (bits).
    pub cache_bits: f64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        positive("server_freq", self.server_freq)?;
        positive("device_freq", self.device_freq)?;
        positive("energy_coeff", self.energy_coeff)?;
        non_negative("energy_budget", self.energy_budget)?;
        non_negative("cache_bits", self.cache_bits)?;
        Ok(())
    }

    /// Device energy spent projecting `task` once: `k * f1^2 * I * w`.
    pub fn task_energy(&self, task: &ProjectionTask) -> f64 {
        self.energy_coeff * self.device_freq * self.device_freq * task.cycles()
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} must be finite and > 0")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("{v} must be finite and >= 0"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Symmetric,
    Heterogeneous,
}

/// A validated task set plus the platform it runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    tasks: Vec<ProjectionTask>,
    config: SystemConfig,
    kind: ScenarioKind,
}

impl Scenario {
    /// `n` identical viewpoints requested uniformly. The probability carried
    /// by `task` is ignored and replaced with `1/n`.
    pub fn symmetric(task: ProjectionTask, n: usize, config: SystemConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("count", "need at least one viewpoint"));
        }
        let task = ProjectionTask {
            probability: 1.0 / n as f64,
            ..task
        };
        task.validate()?;
        config.validate()?;
        if task.has_low_output_ratio() {
            log::warn!(
                "output/input ratio {} is below 2",
                task.output_bits / task.input_bits
            );
        }
        Ok(Self {
            tasks: vec![task; n],
            config,
            kind: ScenarioKind::Symmetric,
        })
    }

    /// Viewpoints with individual parameters; probabilities must sum to one.
    pub fn heterogeneous(tasks: Vec<ProjectionTask>, config: SystemConfig) -> Result<Self> {
        if tasks.is_empty() {
            return Err(Error::invalid("viewpoints", "need at least one viewpoint"));
        }
        for (i, t) in tasks.iter().enumerate() {
            t.validate().map_err(|e| match e {
                Error::InvalidInput { field, reason } => Error::InvalidInput {
                    field: format!("viewpoints[{i}].{field}"),
                    reason,
                },
                other => other,
            })?;
        }
        config.validate()?;
        let sum: f64 = tasks.iter().map(|t| t.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::ProbabilitySum { sum });
        }
        let low = tasks.iter().filter(|t| t.has_low_output_ratio()).count();
        if low > 0 {
            log::warn!("{low} viewpoints have an output/input ratio below 2");
        }
        Ok(Self {
            tasks,
            config,
            kind: ScenarioKind::Heterogeneous,
        })
    }

    pub fn tasks(&self) -> &[ProjectionTask] {
        &self.tasks
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Same viewpoints on a different platform.
    pub fn with_config(&self, config: SystemConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            ..self.clone()
        })
    }

    /// Same viewpoints relabelled as heterogeneous.
    pub fn into_heterogeneous(self) -> Self {
        Self {
            kind: ScenarioKind::Heterogeneous,
            ..self
        }
    }

    /// Cache capacity in whole FOVs, `C' div I`. Only meaningful for
    /// symmetric scenarios; uses the first task otherwise.
    pub fn cache_count(&self) -> usize {
        tolerant_floor(self.config.cache_bits / self.tasks[0].input_bits) as usize
    }

    /// `sum_i P_i * k f1^2 I_i w_i`, the energy of offloading everything.
    pub fn total_offload_energy(&self) -> f64 {
        self.tasks
            .iter()
            .map(|t| t.probability * self.config.task_energy(t))
            .sum()
    }

    pub fn total_input_bits(&self) -> f64 {
        self.tasks.iter().map(|t| t.input_bits).sum()
    }
}

/// Paired caching and offloading indicators over viewpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Policy {
    pub cache: Vec<bool>,
    pub offload: Vec<bool>,
}

impl Policy {
    pub fn new(cache: Vec<bool>, offload: Vec<bool>) -> Result<Self> {
        if cache.len() != offload.len() {
            return Err(Error::LengthMismatch {
                expected: offload.len(),
                got: cache.len(),
            });
        }
        Ok(Self { cache, offload })
    }

    /// Nothing cached, everything computed at the server.
    pub fn empty(n: usize) -> Self {
        Self {
            cache: vec![false; n],
            offload: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.offload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offload.is_empty()
    }

    pub fn offload_count(&self) -> usize {
        self.offload.iter().filter(|&&d| d).count()
    }

    pub fn cache_count(&self) -> usize {
        self.cache.iter().filter(|&&c| c).count()
    }

    /// Whether `c_i <= d_i` holds everywhere.
    pub fn is_normalized(&self) -> bool {
        self.cache.iter().zip(&self.offload).all(|(&c, &d)| !c || d)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.cache.len() != n || self.offload.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.cache.len().max(self.offload.len()),
            });
        }
        Ok(())
    }
}

/// Usage of one budgeted resource.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetUsage {
    pub used: f64,
    pub limit: f64,
    pub ok: bool,
}

impl BudgetUsage {
    fn new(used: f64, limit: f64) -> Self {
        Self {
            used,
            limit,
            ok: within_budget(used, limit),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// Cached bits against `C'`.
    pub cache: BudgetUsage,
    /// Average device energy (J) against the budget.
    pub energy: BudgetUsage,
    /// Per viewpoint: false when the policy asks for a rate floor that does
    /// not exist.
    pub latency_ok: Vec<bool>,
    pub overall: bool,
}

/// Least link rate meeting the deadline when the server projects:
/// `O / (tau - I w / f0)`.
pub fn server_rate_floor(task: &ProjectionTask, server_freq: f64) -> Result<f64> {
    let compute_time = task.cycles() / server_freq;
    let slack = task.deadline - compute_time;
    if slack <= 0.0 {
        return Err(Error::InfeasibleServerCompute {
            viewpoint: 0,
            compute_time,
            deadline: task.deadline,
        });
    }
    Ok(task.output_bits / slack)
}

/// Least link rate meeting the deadline when the device projects an
/// uncached FOV: `I / (tau - I w / f1)`, or `None` when the device is too
/// slow to finish in time at any rate.
pub fn device_rate_floor(task: &ProjectionTask, device_freq: f64) -> Option<f64> {
    let slack = task.deadline - task.cycles() / device_freq;
    (slack > 0.0).then(|| task.input_bits / slack)
}

/// `f_min = I w / tau`.
pub fn min_device_frequency(task: &ProjectionTask) -> f64 {
    task.cycles() / task.deadline
}

/// Tight link rate for one viewpoint under decisions `(cached, offloaded)`.
///
/// Local projection needs the device to finish in time even when the input
/// is cached, so `NotLocallyComputable` is returned for any offloaded
/// viewpoint the device cannot handle.
pub fn required_rate(
    task: &ProjectionTask,
    cached: bool,
    offloaded: bool,
    server_freq: f64,
    device_freq: f64,
) -> Result<f64> {
    if !offloaded {
        return server_rate_floor(task, server_freq);
    }
    let device =
        device_rate_floor(task, device_freq).ok_or(Error::NotLocallyComputable { viewpoint: 0 })?;
    Ok(if cached { 0.0 } else { device })
}

fn at_viewpoint(err: Error, i: usize) -> Error {
    match err {
        Error::InfeasibleServerCompute {
            compute_time,
            deadline,
            ..
        } => Error::InfeasibleServerCompute {
            viewpoint: i,
            compute_time,
            deadline,
        },
        Error::NotLocallyComputable { .. } => Error::NotLocallyComputable { viewpoint: i },
        other => other,
    }
}

/// Expected link rate `sum_i P_i R_i` under `policy`.
pub fn average_rate(scenario: &Scenario, policy: &Policy) -> Result<f64> {
    policy.check_len(scenario.len())?;
    let cfg = scenario.config();
    let mut total = 0.0;
    for (i, task) in scenario.tasks().iter().enumerate() {
        let rate = required_rate(
            task,
            policy.cache[i],
            policy.offload[i],
            cfg.server_freq,
            cfg.device_freq,
        )
        .map_err(|e| at_viewpoint(e, i))?;
        total += task.probability * rate;
    }
    Ok(total)
}

/// Cache, energy and latency check of `policy`. Infeasibility is reported
/// in the result; only a length mismatch is an error.
pub fn check_feasibility(scenario: &Scenario, policy: &Policy) -> Result<FeasibilityReport> {
    policy.check_len(scenario.len())?;
    let cfg = scenario.config();
    let mut cache_used = 0.0;
    let mut energy_used = 0.0;
    let mut latency_ok = Vec::with_capacity(scenario.len());
    for (i, task) in scenario.tasks().iter().enumerate() {
        if policy.cache[i] {
            cache_used += task.input_bits;
        }
        if policy.offload[i] {
            energy_used += task.probability * cfg.task_energy(task);
        }
        latency_ok.push(
            required_rate(
                task,
                policy.cache[i],
                policy.offload[i],
                cfg.server_freq,
                cfg.device_freq,
            )
            .is_ok(),
        );
    }
    let cache = BudgetUsage::new(cache_used, cfg.cache_bits);
    let energy = BudgetUsage::new(energy_used, cfg.energy_budget);
    let overall = cache.ok && energy.ok && latency_ok.iter().all(|&ok| ok);
    Ok(FeasibilityReport {
        cache,
        energy,
        latency_ok,
        overall,
    })
}

/// Drops cache entries of viewpoints computed at the server; they cannot
/// lower the rate.
pub fn normalize_policy(policy: &Policy) -> Policy {
    Policy {
        cache: policy
            .cache
            .iter()
            .zip(&policy.offload)
            .map(|(&c, &d)| c && d)
            .collect(),
        offload: policy.offload.clone(),
    }
}

/// Both rate floors of one viewpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFloors {
    pub server: f64,
    /// `None` when the device cannot meet the deadline.
    pub device: Option<f64>,
}

/// Rate floors of every viewpoint; fails if any viewpoint is infeasible even
/// at the server.
pub fn rate_floors(scenario: &Scenario) -> Result<Vec<RateFloors>> {
    let cfg = scenario.config();
    scenario
        .tasks()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok(RateFloors {
                server: server_rate_floor(t, cfg.server_freq).map_err(|e| at_viewpoint(e, i))?,
                device: device_rate_floor(t, cfg.device_freq),
            })
        })
        .collect()
}
