//! Solvers for the heterogeneous scenario, where every viewpoint has its own
//! projection parameters and request probability.
//!
//! Minimizing the average rate there is a bilinear knapsack: offloading
//! spends device energy, caching spends cache bits, and a cached input only
//! helps when its viewpoint is also offloaded. This module provides a greedy
//! heuristic, an alternating-knapsack local search, an exhaustive oracle for
//! small instances and a Zipf-popularity instance generator.

mod greedy;
mod knapsack;
mod mca;
mod oracle;
mod zipf;

use std::fmt;

pub use greedy::greedy_solve;
pub use knapsack::{knapsack_max, KnapsackInstance, DEFAULT_RESOLUTION};
pub use mca::{mca_solve, MountainClimb, DEFAULT_MAX_ITERATIONS};
pub use oracle::{brute_force_solve, brute_force_solve_capped, DEFAULT_ORACLE_CAP};
pub use zipf::{zipf_probabilities, zipf_scenario, ZipfParams};

use crate::error::{Error, Result};
use crate::model::{
    average_rate, check_feasibility, normalize_policy, rate_floors, BudgetUsage, Policy, Scenario,
    ScenarioKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Greedy,
    MountainClimb,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Greedy => "GA",
            Method::MountainClimb => "MCA",
            Method::Oracle => "ORACLE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroSolveResult {
    /// Always normalized and feasible.
    pub policy: Policy,
    /// Average link rate of `policy` (bit/s).
    pub objective: f64,
    pub method: Method,
    /// Alternation rounds performed (mountain climbing only).
    pub iterations: usize,
    /// Objective before the first round and after each one (mountain
    /// climbing only).
    pub trace: Vec<f64>,
    pub energy: BudgetUsage,
    pub cache: BudgetUsage,
}

impl HeteroSolveResult {
    /// `1 - objective / sum_i P_i R0_i`.
    pub fn gain_fraction(&self, scenario: &Scenario) -> Result<f64> {
        let baseline = average_rate(scenario, &Policy::empty(scenario.len()))?;
        Ok(1.0 - self.objective / baseline)
    }
}

fn require_heterogeneous(scenario: &Scenario) -> Result<()> {
    if scenario.kind() != ScenarioKind::Heterogeneous {
        return Err(Error::NotHeterogeneous);
    }
    Ok(())
}

/// Precomputed per-viewpoint quantities.
#[derive(Debug, Clone, Copy)]
struct Viewpoint {
    probability: f64,
    input_bits: f64,
    server_rate: f64,
    /// `None` pins the viewpoint to server-side projection.
    device_rate: Option<f64>,
    /// `k f1^2 I w` (J).
    energy: f64,
}

impl Viewpoint {
    /// Energy charged against the average budget, `P k f1^2 I w`.
    fn weighted_energy(&self) -> f64 {
        self.probability * self.energy
    }
}

fn viewpoints(scenario: &Scenario) -> Result<Vec<Viewpoint>> {
    let cfg = scenario.config();
    Ok(rate_floors(scenario)?
        .into_iter()
        .zip(scenario.tasks())
        .map(|(floors, task)| Viewpoint {
            probability: task.probability,
            input_bits: task.input_bits,
            server_rate: floors.server,
            device_rate: floors.device,
            energy: cfg.task_energy(task),
        })
        .collect())
}

fn finish(
    scenario: &Scenario,
    policy: Policy,
    method: Method,
    iterations: usize,
    trace: Vec<f64>,
) -> Result<HeteroSolveResult> {
    let policy = normalize_policy(&policy);
    let report = check_feasibility(scenario, &policy)?;
    if !report.overall {
        return Err(Error::Internal(format!(
            "{method} produced an infeasible policy"
        )));
    }
    let objective = average_rate(scenario, &policy)?;
    Ok(HeteroSolveResult {
        policy,
        objective,
        method,
        iterations,
        trace,
        energy: report.energy,
        cache: report.cache,
    })
}
