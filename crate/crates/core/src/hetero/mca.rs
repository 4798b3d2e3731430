use super::knapsack::{knapsack_max, KnapsackInstance, DEFAULT_RESOLUTION};
use super::{finish, require_heterogeneous, viewpoints, HeteroSolveResult, Method, Viewpoint};
use crate::error::{Error, Result};
use crate::model::{average_rate, check_feasibility, normalize_policy, Policy, Scenario};

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

/// Relative improvement below which a round counts as no progress.
const IMPROVEMENT_RTOL: f64 = 1e-12;

/// Alternating-knapsack local search ("mountain climbing").
///
/// Each round first re-optimizes the cache with offloading fixed, then the
/// offloading with the cache fixed. Both halves are 0/1 knapsacks solved by
/// [`knapsack_max`]; a half is only adopted if it strictly lowers the
/// average rate, so the objective never increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MountainClimb {
    pub resolution: usize,
    pub max_iterations: usize,
}

impl Default for MountainClimb {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl MountainClimb {
    pub fn solve(&self, scenario: &Scenario, initial: &Policy) -> Result<HeteroSolveResult> {
        require_heterogeneous(scenario)?;
        let report = check_feasibility(scenario, initial)?;
        if !report.overall {
            let reason = if !report.cache.ok {
                format!("cache {} > {} bits", report.cache.used, report.cache.limit)
            } else if !report.energy.ok {
                format!("energy {} > {} J", report.energy.used, report.energy.limit)
            } else {
                "offloads a viewpoint the device cannot project in time".to_string()
            };
            return Err(Error::InfeasibleInitial { reason });
        }
        let vps = viewpoints(scenario)?;
        let cfg = scenario.config();

        let mut policy = normalize_policy(initial);
        let mut objective = average_rate(scenario, &policy)?;
        let mut trace = vec![objective];
        let mut iterations = 0;

        while iterations < self.max_iterations {
            iterations += 1;
            let start = objective;

            let cache_values: Vec<f64> = vps
                .iter()
                .zip(&policy.offload)
                .map(|(v, &d)| match (d, v.device_rate) {
                    (true, Some(r1)) => v.probability * r1,
                    _ => 0.0,
                })
                .collect();
            let input_bits: Vec<f64> = vps.iter().map(|v| v.input_bits).collect();
            let cache = self.select(&cache_values, &input_bits, cfg.cache_bits)?;
            let candidate = Policy {
                cache,
                offload: policy.offload.clone(),
            };
            self.adopt_if_better(scenario, candidate, &mut policy, &mut objective)?;

            let offload_values: Vec<f64> = vps
                .iter()
                .zip(&policy.cache)
                .map(|(v, &c)| offload_value(v, c))
                .collect();
            let energies: Vec<f64> = vps.iter().map(Viewpoint::weighted_energy).collect();
            let offload = self.select(&offload_values, &energies, cfg.energy_budget)?;
            let candidate = normalize_policy(&Policy {
                cache: policy.cache.clone(),
                offload,
            });
            self.adopt_if_better(scenario, candidate, &mut policy, &mut objective)?;

            trace.push(objective);
            if start - objective <= IMPROVEMENT_RTOL * start.abs() {
                break;
            }
        }

        finish(scenario, policy, Method::MountainClimb, iterations, trace)
    }

    /// Knapsack restricted to items with positive value, so zero-probability
    /// viewpoints never show up as zero-weight items.
    fn select(&self, values: &[f64], weights: &[f64], budget: f64) -> Result<Vec<bool>> {
        let items: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
        let inst = KnapsackInstance {
            values: items.iter().map(|&i| values[i]).collect(),
            weights: items.iter().map(|&i| weights[i]).collect(),
            budget,
            resolution: self.resolution,
        };
        let (picked, _) = knapsack_max(&inst)?;
        let mut selection = vec![false; values.len()];
        for (&i, take) in items.iter().zip(picked) {
            selection[i] = take;
        }
        Ok(selection)
    }

    fn adopt_if_better(
        &self,
        scenario: &Scenario,
        candidate: Policy,
        policy: &mut Policy,
        objective: &mut f64,
    ) -> Result<()> {
        let value = average_rate(scenario, &candidate)?;
        if value < *objective - IMPROVEMENT_RTOL * objective.abs() {
            *policy = candidate;
            *objective = value;
        }
        Ok(())
    }
}

/// Rate saved by offloading a viewpoint given its cache state,
/// `P (R0 - R1 + R1 c)`, floored at zero so losing offloads are skipped.
fn offload_value(v: &Viewpoint, cached: bool) -> f64 {
    match v.device_rate {
        None => 0.0,
        Some(_) if cached => v.probability * v.server_rate,
        Some(r1) => (v.probability * (v.server_rate - r1)).max(0.0),
    }
}

/// [`MountainClimb`] with the default iteration cap.
pub fn mca_solve(
    scenario: &Scenario,
    initial: &Policy,
    resolution: usize,
) -> Result<HeteroSolveResult> {
    MountainClimb {
        resolution,
        ..MountainClimb::default()
    }
    .solve(scenario, initial)
}
