use std::cmp::Ordering;

use super::{finish, require_heterogeneous, viewpoints, HeteroSolveResult, Method, Viewpoint};
use crate::error::Result;
use crate::model::{within_budget, Policy, Scenario};

/// Two-stage greedy allocation.
///
/// Stage 1 ranks viewpoints by `P R0 / I` and walks the ranking twice:
/// once to find how many inputs fit in the cache, once to find how many
/// projections fit in the energy budget. The cached prefix is offloaded as
/// far as energy allows. If energy is left over after the cache runs out
/// (stage 2), the remaining viewpoints whose device rate beats their server
/// rate are offloaded uncached in order of rate saved per Joule,
/// `(R0 - R1) / (k f1^2 I w)`, until the next one no longer fits.
///
/// Viewpoints the device cannot project in time are left out of both
/// stages. Ties in either ranking go to the lower index.
pub fn greedy_solve(scenario: &Scenario) -> Result<HeteroSolveResult> {
    require_heterogeneous(scenario)?;
    let vps = viewpoints(scenario)?;
    let cfg = scenario.config();
    let n = vps.len();

    let mut ranked: Vec<usize> = (0..n).filter(|&i| vps[i].device_rate.is_some()).collect();
    sort_descending(&mut ranked, |i| {
        vps[i].probability * vps[i].server_rate / vps[i].input_bits
    });

    let cache_fit = prefix_fit(ranked.iter().map(|&i| vps[i].input_bits), cfg.cache_bits);
    let energy_fit = prefix_fit(
        ranked.iter().map(|&i| vps[i].weighted_energy()),
        cfg.energy_budget,
    );

    let mut policy = Policy::empty(n);
    for &i in &ranked[..cache_fit] {
        policy.cache[i] = true;
    }
    let mut committed = 0.0;
    for &i in &ranked[..energy_fit.min(cache_fit)] {
        policy.offload[i] = true;
        committed += vps[i].weighted_energy();
    }

    if energy_fit > cache_fit {
        let mut extra: Vec<usize> = ranked
            .iter()
            .copied()
            .filter(|&i| !policy.offload[i] && saves_rate(&vps[i]))
            .collect();
        sort_descending(&mut extra, |i| {
            let v = &vps[i];
            (v.server_rate - v.device_rate.unwrap_or(f64::INFINITY)) / v.energy
        });
        for i in extra {
            let next = committed + vps[i].weighted_energy();
            if !within_budget(next, cfg.energy_budget) {
                break;
            }
            policy.offload[i] = true;
            committed = next;
        }
    }

    finish(scenario, policy, Method::Greedy, 0, Vec::new())
}

fn saves_rate(v: &Viewpoint) -> bool {
    v.device_rate.is_some_and(|r1| v.server_rate > r1)
}

/// Stable sort by `key` descending, so equal keys keep ascending index
/// order.
fn sort_descending(indices: &mut [usize], key: impl Fn(usize) -> f64) {
    let mut keyed: Vec<(usize, f64)> = indices.iter().map(|&i| (i, key(i))).collect();
    keyed.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
    for (slot, (i, _)) in indices.iter_mut().zip(keyed) {
        *slot = i;
    }
}

/// Length of the longest prefix whose cumulative cost fits `budget`.
fn prefix_fit(costs: impl Iterator<Item = f64>, budget: f64) -> usize {
    let mut total = 0.0;
    let mut count = 0;
    for cost in costs {
        total += cost;
        if !within_budget(total, budget) {
            break;
        }
        count += 1;
    }
    count
}
