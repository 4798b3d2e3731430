use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ProjectionTask, Scenario, SystemConfig};

/// Parameters of a generated heterogeneous scenario with Zipf popularity.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipfParams {
    pub count: usize,
    /// Popularity skew `gamma`; `P_i` is proportional to `i^-gamma`.
    pub exponent: f64,
    /// Input sizes are drawn uniformly from `[min, max]` and rounded to
    /// whole bits.
    pub input_bits_min: f64,
    pub input_bits_max: f64,
    /// `O_i = output_ratio * I_i`.
    pub output_ratio: f64,
    pub cycles_per_bit: f64,
    pub deadline: f64,
    pub seed: u64,
    pub cycles_per_bit_overrides: Option<Vec<f64>>,
    pub deadline_overrides: Option<Vec<f64>>,
}

/// `P_i = i^-gamma / sum_j j^-gamma` for `i = 1..=n`.
pub fn zipf_probabilities(n: usize, exponent: f64) -> Vec<f64> {
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-exponent)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Deterministic per seed.
pub fn zipf_scenario(params: &ZipfParams, config: SystemConfig) -> Result<Scenario> {
    let n = params.count;
    if n == 0 {
        return Err(Error::invalid("count", "need at least one viewpoint"));
    }
    if !(params.exponent.is_finite() && params.exponent >= 0.0) {
        return Err(Error::invalid(
            "exponent",
            format!("{} must be >= 0", params.exponent),
        ));
    }
    let (lo, hi) = (params.input_bits_min, params.input_bits_max);
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(Error::invalid(
            "input_bits_min/input_bits_max",
            format!("[{lo}, {hi}] is not a positive interval"),
        ));
    }
    if !(params.output_ratio.is_finite() && params.output_ratio > 0.0) {
        return Err(Error::invalid("output_ratio", "must be > 0"));
    }
    for (name, overrides) in [
        ("cycles_per_bit_overrides", &params.cycles_per_bit_overrides),
        ("deadline_overrides", &params.deadline_overrides),
    ] {
        if let Some(v) = overrides {
            if v.len() != n {
                return Err(Error::invalid(
                    name,
                    format!("has {} entries for {n} viewpoints", v.len()),
                ));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let probabilities = zipf_probabilities(n, params.exponent);
    let tasks = probabilities
        .into_iter()
        .enumerate()
        .map(|(i, probability)| {
            let input_bits = rng.gen_range(lo..=hi).round();
            ProjectionTask {
                input_bits,
                output_bits: params.output_ratio * input_bits,
                cycles_per_bit: params
                    .cycles_per_bit_overrides
                    .as_ref()
                    .map_or(params.cycles_per_bit, |v| v[i]),
                deadline: params
                    .deadline_overrides
                    .as_ref()
                    .map_or(params.deadline, |v| v[i]),
                probability,
            }
        })
        .collect();
    Scenario::heterogeneous(tasks, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(count: usize, exponent: f64, seed: u64) -> ZipfParams {
        ZipfParams {
            count,
            exponent,
            input_bits_min: 15e6,
            input_bits_max: 25e6,
            output_ratio: 2.0,
            cycles_per_bit: 1.0,
            deadline: 0.02,
            seed,
            cycles_per_bit_overrides: None,
            deadline_overrides: None,
        }
    }

    fn config() -> SystemConfig {
        SystemConfig {
            server_freq: 1e11,
            device_freq: 5e9,
            energy_coeff: 1e-27,
            energy_budget: 0.1,
            cache_bits: 1e8,
        }
    }

    #[test]
    fn uniform_when_exponent_zero() {
        let p = zipf_probabilities(5, 0.0);
        assert!(p.iter().all(|&x| (x - 0.2).abs() < 1e-15));
    }

    #[test]
    fn known_normalizer() {
        let p = zipf_probabilities(4, 0.8);
        // 1, 2^-0.8, 3^-0.8, 4^-0.8 normalized
        let expected = [
            0.4311330111967975,
            0.24762089037333976,
            0.17902524371248463,
            0.14222085471737828,
        ];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = zipf_scenario(&params(50, 0.8, 7), config()).unwrap();
        let b = zipf_scenario(&params(50, 0.8, 7), config()).unwrap();
        let c = zipf_scenario(&params(50, 0.8, 8), config()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sizes_within_range() {
        let s = zipf_scenario(&params(200, 1.5, 1), config()).unwrap();
        for t in s.tasks() {
            assert!((15e6..=25e6).contains(&t.input_bits));
            assert_eq!(t.input_bits.fract(), 0.0);
            assert_eq!(t.output_bits, 2.0 * t.input_bits);
        }
    }

    #[test]
    fn overrides_apply() {
        let mut p = params(3, 0.0, 1);
        p.deadline_overrides = Some(vec![0.01, 0.02, 0.03]);
        let s = zipf_scenario(&p, config()).unwrap();
        let deadlines: Vec<f64> = s.tasks().iter().map(|t| t.deadline).collect();
        assert_eq!(deadlines, vec![0.01, 0.02, 0.03]);
        p.deadline_overrides = Some(vec![0.01]);
        assert!(zipf_scenario(&p, config()).is_err());
    }

    #[test]
    fn invalid_ranges() {
        let mut p = params(3, 0.8, 1);
        p.input_bits_min = 30e6;
        assert!(zipf_scenario(&p, config()).is_err());
        let p = params(0, 0.8, 1);
        assert!(zipf_scenario(&p, config()).is_err());
        let p = params(3, -1.0, 1);
        assert!(zipf_scenario(&p, config()).is_err());
    }
}
