use std::cmp::Ordering;

use super::{finish, require_heterogeneous, viewpoints, HeteroSolveResult, Method, Viewpoint};
use crate::error::{Error, Result};
use crate::model::{within_budget, Policy, Scenario};

pub const DEFAULT_ORACLE_CAP: usize = 14;

/// Exact minimizer by exhaustive search, for `N <= DEFAULT_ORACLE_CAP`.
pub fn brute_force_solve(scenario: &Scenario) -> Result<HeteroSolveResult> {
    brute_force_solve_capped(scenario, DEFAULT_ORACLE_CAP)
}

/// Exact minimizer by exhaustive search over normalized policies.
///
/// Each viewpoint is either projected at the server, projected on the
/// device, or cached and projected on the device; caching a server-side
/// viewpoint never helps, which leaves `3^N` candidates. Branches that
/// exceed a budget are pruned. Among equal objectives the lexicographically
/// smallest `(d, c)` wins.
pub fn brute_force_solve_capped(scenario: &Scenario, cap: usize) -> Result<HeteroSolveResult> {
    require_heterogeneous(scenario)?;
    if scenario.len() > cap {
        return Err(Error::TooLarge {
            n: scenario.len(),
            cap,
        });
    }
    let vps = viewpoints(scenario)?;
    let cfg = scenario.config();
    let mut search = Search {
        vps: &vps,
        energy_budget: cfg.energy_budget,
        cache_budget: cfg.cache_bits,
        current: Policy::empty(vps.len()),
        best: None,
    };
    search.visit(0, 0.0, 0.0, 0.0);
    let (_, policy) = search
        .best
        .ok_or_else(|| Error::Internal("empty policy rejected by the oracle".into()))?;
    finish(scenario, policy, Method::Oracle, 0, Vec::new())
}

struct Search<'a> {
    vps: &'a [Viewpoint],
    energy_budget: f64,
    cache_budget: f64,
    current: Policy,
    best: Option<(f64, Policy)>,
}

impl Search<'_> {
    fn visit(&mut self, i: usize, objective: f64, energy: f64, cache: f64) {
        if i == self.vps.len() {
            self.offer(objective);
            return;
        }
        let v = self.vps[i];
        self.visit(
            i + 1,
            objective + v.probability * v.server_rate,
            energy,
            cache,
        );

        let Some(device_rate) = v.device_rate else {
            return;
        };
        let energy = energy + v.weighted_energy();
        if !within_budget(energy, self.energy_budget) {
            return;
        }
        self.current.offload[i] = true;
        self.visit(
            i + 1,
            objective + v.probability * device_rate,
            energy,
            cache,
        );

        let cache = cache + v.input_bits;
        if within_budget(cache, self.cache_budget) {
            self.current.cache[i] = true;
            self.visit(i + 1, objective, energy, cache);
            self.current.cache[i] = false;
        }
        self.current.offload[i] = false;
    }

    fn offer(&mut self, objective: f64) {
        let better = match &self.best {
            None => true,
            Some((best, policy)) => match objective.partial_cmp(best) {
                Some(Ordering::Less) => true,
                Some(Ordering::Equal) => {
                    (&self.current.offload, &self.current.cache) < (&policy.offload, &policy.cache)
                }
                _ => false,
            },
        };
        if better {
            self.best = Some((objective, self.current.clone()));
        }
    }
}
