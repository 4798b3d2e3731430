//! Closed-form optimal policy for the symmetric scenario.
//!
//! All `N` viewpoints share one projection task and are requested
//! uniformly, so only the number of offloaded tasks `d` and cached FOVs `c`
//! matter. With `d_max = floor(N E / (k f1^2 I w))` and cache capacity
//! `C`, the optimum is
//!
//! ```text
//! d* = d_max   if d_max <= C            (ENERGY_LIMITED_CACHED)
//!      d_max   else if R0 > R1          (ENERGY_LIMITED_UNCACHED)
//!      C       otherwise                (CACHE_LIMITED)
//! ```
//!
//! and `R* = R0 - (R0 - R1) d*/N - R1 min(d*, C)/N`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    device_rate_floor, server_rate_floor, tolerant_floor, Policy, ProjectionTask, Scenario,
    ScenarioKind, SystemConfig,
};

/// Which constraint binds at the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Every offloaded task fits in the cache; energy is the bottleneck.
    EnergyLimitedCached,
    /// More tasks are offloaded than cached because local compute alone
    /// already lowers the rate.
    EnergyLimitedUncached,
    /// Local compute only pays off for cached inputs.
    CacheLimited,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::EnergyLimitedCached => "ENERGY_LIMITED_CACHED",
            Regime::EnergyLimitedUncached => "ENERGY_LIMITED_UNCACHED",
            Regime::CacheLimited => "CACHE_LIMITED",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the energy budget is turned into an offload count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffloadBudget {
    /// `floor(N E / (k f1^2 I w))`, always achievable by a real policy.
    #[default]
    Integral,
    /// The real-valued ratio, for derivative-style analysis in `f1`.
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSolution {
    pub offload_count: usize,
    pub cache_count: usize,
    pub max_offload_count: usize,
    /// Canonical layout: the first `d*` viewpoints offloaded, the first
    /// `min(C, d*)` cached.
    pub policy: Policy,
    pub min_rate: f64,
    pub regime: Regime,
    pub server_rate: f64,
    pub device_rate: f64,
    pub gain_no_cache: f64,
    pub gain_with_cache: f64,
}

impl SymmetricSolution {
    /// `1 - R*/R0`.
    pub fn gain_fraction(&self) -> f64 {
        1.0 - self.min_rate / self.server_rate
    }
}

/// The shared task, viewpoint count and platform of a symmetric scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricInstance {
    pub task: ProjectionTask,
    pub n: usize,
    /// `C`, in whole FOVs.
    pub cache_count: usize,
    pub config: SystemConfig,
}

impl SymmetricInstance {
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        if scenario.kind() != ScenarioKind::Symmetric {
            return Err(Error::NotSymmetric);
        }
        Ok(Self {
            task: scenario.tasks()[0],
            n: scenario.len(),
            cache_count: scenario.cache_count(),
            config: *scenario.config(),
        })
    }

    /// Rebuilds the full scenario, with `C' = C * I`.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let config = SystemConfig {
            cache_bits: self.cache_count as f64 * self.task.input_bits,
            ..self.config
        };
        Scenario::symmetric(self.task, self.n, config)
    }

    pub fn server_rate(&self) -> Result<f64> {
        server_rate_floor(&self.task, self.config.server_freq)
    }

    pub fn device_rate(&self) -> Result<f64> {
        device_rate_floor(&self.task, self.config.device_freq)
            .ok_or(Error::NotLocallyComputable { viewpoint: 0 })
    }

    /// `k f1^2 I w`, the device energy of one projection (J).
    pub fn task_energy(&self) -> f64 {
        self.config.task_energy(&self.task)
    }

    /// `N E / (k f1^2 I w)` before any rounding or clamping.
    pub fn energy_capacity(&self) -> f64 {
        self.n as f64 * self.config.energy_budget / self.task_energy()
    }

    /// `floor(N E / (k f1^2 I w))` clamped to `[0, N]`.
    pub fn max_offload_count(&self) -> usize {
        let cap = tolerant_floor(self.energy_capacity());
        if cap >= self.n as f64 {
            self.n
        } else {
            cap.max(0.0) as usize
        }
    }

    /// Offload count the energy budget allows under `budget` mode.
    pub fn offload_capacity(&self, budget: OffloadBudget) -> f64 {
        match budget {
            OffloadBudget::Integral => self.max_offload_count() as f64,
            OffloadBudget::Continuous => self.energy_capacity().min(self.n as f64),
        }
    }

    fn regime_for(capacity: f64, cache: f64, r0: f64, r1: f64) -> Regime {
        if capacity <= cache {
            Regime::EnergyLimitedCached
        } else if r0 > r1 {
            Regime::EnergyLimitedUncached
        } else {
            // R0 == R1 lands here: same rate, less energy.
            Regime::CacheLimited
        }
    }

    pub fn optimal_offload_count(&self) -> Result<(usize, Regime)> {
        let r0 = self.server_rate()?;
        let r1 = self.device_rate()?;
        let d_max = self.max_offload_count();
        let regime = Self::regime_for(d_max as f64, self.cache_count as f64, r0, r1);
        let d = match regime {
            Regime::EnergyLimitedCached | Regime::EnergyLimitedUncached => d_max,
            Regime::CacheLimited => self.cache_count,
        };
        Ok((d, regime))
    }

    /// Minimum average rate by case, with the energy ratio replaced by the
    /// offload capacity the budget mode allows.
    pub fn min_rate_with(&self, budget: OffloadBudget) -> Result<(f64, Regime)> {
        let r0 = self.server_rate()?;
        let r1 = self.device_rate()?;
        let n = self.n as f64;
        let capacity = self.offload_capacity(budget);
        let cache = self.cache_count as f64;
        let regime = Self::regime_for(capacity, cache, r0, r1);
        let rate = match regime {
            Regime::EnergyLimitedCached => r0 * (1.0 - capacity / n),
            Regime::EnergyLimitedUncached => r0 - (r0 - r1) * capacity / n - r1 * cache / n,
            Regime::CacheLimited => r0 * (1.0 - cache / n),
        };
        Ok((rate, regime))
    }

    pub fn min_average_rate(&self) -> Result<(f64, Regime)> {
        self.min_rate_with(OffloadBudget::Integral)
    }

    /// Rate reduction from local computing without and with caching.
    pub fn gain_decomposition(&self) -> Result<(f64, f64)> {
        let r0 = self.server_rate()?;
        let r1 = self.device_rate()?;
        let (d, _) = self.optimal_offload_count()?;
        let n = self.n as f64;
        let cached = d.min(self.cache_count) as f64;
        Ok(((r0 - r1) / n * d as f64, r1 / n * cached))
    }

    pub fn solve(&self) -> Result<SymmetricSolution> {
        let server_rate = self.server_rate()?;
        let device_rate = self.device_rate()?;
        let (d, regime) = self.optimal_offload_count()?;
        let (min_rate, _) = self.min_average_rate()?;
        let (gain_no_cache, gain_with_cache) = self.gain_decomposition()?;
        let c = d.min(self.cache_count);
        let policy = Policy {
            cache: (0..self.n).map(|i| i < c).collect(),
            offload: (0..self.n).map(|i| i < d).collect(),
        };
        Ok(SymmetricSolution {
            offload_count: d,
            cache_count: c,
            max_offload_count: self.max_offload_count(),
            policy,
            min_rate,
            regime,
            server_rate,
            device_rate,
            gain_no_cache,
            gain_with_cache,
        })
    }
}

pub fn max_offload_count(scenario: &Scenario) -> Result<usize> {
    Ok(SymmetricInstance::from_scenario(scenario)?.max_offload_count())
}

pub fn optimal_offload_count(scenario: &Scenario) -> Result<(usize, Regime)> {
    SymmetricInstance::from_scenario(scenario)?.optimal_offload_count()
}

pub fn optimal_policy(scenario: &Scenario) -> Result<SymmetricSolution> {
    SymmetricInstance::from_scenario(scenario)?.solve()
}

pub fn min_average_rate(scenario: &Scenario) -> Result<(f64, Regime)> {
    SymmetricInstance::from_scenario(scenario)?.min_average_rate()
}

pub fn gain_decomposition(scenario: &Scenario) -> Result<(f64, f64)> {
    SymmetricInstance::from_scenario(scenario)?.gain_decomposition()
}
