//! Independent oracles and random instance builders shared by the
//! integration tests. Nothing here calls into the solvers under test; rates
//! and budgets are recomputed from the raw task fields.

#![allow(dead_code)]

use rand::Rng;
use vr3c::{ProjectionTask, Scenario, SystemConfig};

pub const K: f64 = 1e-27;

/// Server and device rate floors straight from the definitions.
pub fn floors(t: &ProjectionTask, f0: f64, f1: f64) -> (f64, Option<f64>) {
    let r0 = t.output_bits / (t.deadline - t.input_bits * t.cycles_per_bit / f0);
    let slack1 = t.deadline - t.input_bits * t.cycles_per_bit / f1;
    (r0, (slack1 > 0.0).then(|| t.input_bits / slack1))
}

/// Random symmetric scenario, spread so all three offload regimes occur.
pub fn random_symmetric(rng: &mut impl Rng, max_n: usize) -> Scenario {
    let n = rng.gen_range(1..=max_n);
    let input_bits = rng.gen_range(1e5..1e7f64).round();
    let cycles_per_bit = rng.gen_range(10.0..500.0);
    let deadline = rng.gen_range(0.005..0.05);
    let f_min = input_bits * cycles_per_bit / deadline;
    let task = ProjectionTask {
        input_bits,
        output_bits: input_bits * rng.gen_range(0.5..4.0),
        cycles_per_bit,
        deadline,
        probability: 1.0,
    };
    let device_freq = f_min * rng.gen_range(1.01..20.0);
    let energy = K * device_freq * device_freq * input_bits * cycles_per_bit;
    let cache_count = rng.gen_range(0..=n);
    let cfg = SystemConfig {
        server_freq: f_min * rng.gen_range(1.2..100.0),
        device_freq,
        energy_coeff: K,
        energy_budget: energy / n as f64 * rng.gen_range(0.0..1.2 * n as f64),
        cache_bits: cache_count as f64 * input_bits,
    };
    Scenario::symmetric(task, n, cfg).unwrap()
}

/// Exact minimum over every policy, by enumeration. With `normalized_only`
/// the `3^N` policies with `c_i <= d_i` are searched, otherwise all `4^N`.
/// Returns the minimum and one minimizing `(cache, offload)`.
pub fn enumerate_min(scenario: &Scenario, normalized_only: bool) -> (f64, Vec<bool>, Vec<bool>) {
    let cfg = scenario.config();
    let n = scenario.len();
    let states: &[(bool, bool)] = if normalized_only {
        &[(false, false), (false, true), (true, true)]
    } else {
        &[(false, false), (false, true), (true, true), (true, false)]
    };
    let base = states.len();
    let total = base.pow(n as u32);
    let mut best = (f64::INFINITY, vec![], vec![]);
    for code in 0..total {
        let mut rest = code;
        let (mut cache, mut offload) = (vec![false; n], vec![false; n]);
        for i in 0..n {
            let (c, d) = states[rest % base];
            rest /= base;
            cache[i] = c;
            offload[i] = d;
        }
        let mut rate = 0.0;
        let mut energy = 0.0;
        let mut bits = 0.0;
        let mut feasible = true;
        for (i, t) in scenario.tasks().iter().enumerate() {
            let (r0, r1) = floors(t, cfg.server_freq, cfg.device_freq);
            if cache[i] {
                bits += t.input_bits;
            }
            if offload[i] {
                let Some(r1) = r1 else {
                    feasible = false;
                    break;
                };
                energy += t.probability
                    * cfg.energy_coeff
                    * cfg.device_freq
                    * cfg.device_freq
                    * t.input_bits
                    * t.cycles_per_bit;
                if !cache[i] {
                    rate += t.probability * r1;
                }
            } else {
                rate += t.probability * r0;
            }
        }
        let fits = |used: f64, limit: f64| used <= limit * (1.0 + 1e-9);
        if feasible
            && fits(energy, cfg.energy_budget)
            && fits(bits, cfg.cache_bits)
            && rate < best.0
        {
            best = (rate, cache, offload);
        }
    }
    best
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale || scale == 0.0
}

/// Random heterogeneous scenario with mixed `R0 <> R1` orderings, some
/// viewpoints the device cannot compute, and budgets that bind.
pub fn random_hetero(rng: &mut impl Rng, max_n: usize) -> Scenario {
    let n = rng.gen_range(1..=max_n);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let device_freq = 1e10;
    let tasks: Vec<ProjectionTask> = weights
        .iter()
        .map(|w| {
            let input_bits = rng.gen_range(1e5..5e6f64).round();
            let deadline = rng.gen_range(0.01..0.04);
            // up to 1.3x the device's cycle budget
            let cycles_per_bit = device_freq * deadline / input_bits * rng.gen_range(0.05..1.3);
            ProjectionTask {
                input_bits,
                output_bits: input_bits * rng.gen_range(0.5..4.0),
                cycles_per_bit,
                deadline,
                probability: w / total,
            }
        })
        .collect();
    let energy: f64 = tasks
        .iter()
        .map(|t| t.probability * K * device_freq * device_freq * t.input_bits * t.cycles_per_bit)
        .sum();
    let bits: f64 = tasks.iter().map(|t| t.input_bits).sum();
    let slowest = tasks
        .iter()
        .map(|t| t.input_bits * t.cycles_per_bit / t.deadline)
        .fold(0.0, f64::max);
    let cfg = SystemConfig {
        server_freq: slowest * rng.gen_range(1.2..20.0),
        device_freq,
        energy_coeff: K,
        energy_budget: energy * rng.gen_range(0.0..1.1),
        cache_bits: bits * rng.gen_range(0.0..1.1),
    };
    Scenario::heterogeneous(tasks, cfg).unwrap()
}
