//! Communication / computing / caching trade-off analysis.
//!
//! Sweeps evaluate the minimum average rate over a grid of one resource
//! axis. Symmetric scenarios use the closed form; heterogeneous ones run the
//! greedy solver at every grid point. Cache and energy axes are normalized
//! the same way for both kinds: the cache axis is `C' / sum_i I_i` (which is
//! `C/N` when all inputs are equal) and the energy axis is
//! `E / sum_i P_i k f1^2 I_i w_i` (which is `E / (k f1^2 I w)` when
//! symmetric).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hetero::{greedy_solve, Method};
use crate::model::{
    average_rate, min_device_frequency, server_rate_floor, tolerant_floor, Policy, ProjectionTask,
    Scenario, ScenarioKind,
};
use crate::symmetric::{OffloadBudget, Regime, SymmetricInstance};

/// Device frequencies at or below `f_min * (1 + this)` are treated as unable
/// to project locally.
pub const F_MIN_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// `C' / sum_i I_i`.
    CacheFraction,
    /// `E / sum_i P_i k f1^2 I_i w_i`.
    EnergyFraction,
    /// `f1` in cycles/s.
    DeviceFreq,
    /// `E` in Joules.
    Energy,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::CacheFraction => "cache_fraction",
            SweepAxis::EnergyFraction => "energy_fraction",
            SweepAxis::DeviceFreq => "device_freq",
            SweepAxis::Energy => "energy",
        }
    }

    fn check_value(self, index: usize, x: f64) -> Result<()> {
        let ok = x.is_finite()
            && match self {
                SweepAxis::DeviceFreq => x > 0.0,
                _ => x >= 0.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(
                format!("grid[{index}]"),
                format!("{x} is outside the {} domain", self.as_str()),
            ))
        }
    }

    fn apply_symmetric(self, inst: &SymmetricInstance, x: f64) -> SymmetricInstance {
        let mut out = *inst;
        match self {
            SweepAxis::CacheFraction => {
                out.cache_count = tolerant_floor(x * inst.n as f64) as usize;
            }
            SweepAxis::EnergyFraction => out.config.energy_budget = x * inst.task_energy(),
            SweepAxis::DeviceFreq => out.config.device_freq = x,
            SweepAxis::Energy => out.config.energy_budget = x,
        }
        out
    }

    /// `scenario` with this axis set to `x`.
    pub fn apply(self, scenario: &Scenario, x: f64) -> Result<Scenario> {
        self.check_value(0, x)?;
        if scenario.kind() == ScenarioKind::Symmetric {
            let inst = SymmetricInstance::from_scenario(scenario)?;
            return self.apply_symmetric(&inst, x).to_scenario();
        }
        let mut cfg = *scenario.config();
        match self {
            SweepAxis::CacheFraction => cfg.cache_bits = x * scenario.total_input_bits(),
            SweepAxis::EnergyFraction => cfg.energy_budget = x * scenario.total_offload_energy(),
            SweepAxis::DeviceFreq => cfg.device_freq = x,
            SweepAxis::Energy => cfg.energy_budget = x,
        }
        scenario.with_config(cfg)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "cache_fraction" => Ok(SweepAxis::CacheFraction),
            "energy_fraction" => Ok(SweepAxis::EnergyFraction),
            "device_freq" => Ok(SweepAxis::DeviceFreq),
            "energy" => Ok(SweepAxis::Energy),
            _ => Err(Error::invalid("axis", format!("unknown axis {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Strictly increasing sample points.
    pub grid: Vec<f64>,
    pub base: Scenario,
    /// Offload-count rounding for symmetric scenarios.
    pub budget: OffloadBudget,
}

/// What produced a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    Regime(Regime),
    /// The device cannot meet the deadline, so nothing is offloaded.
    NotLocallyComputable,
    Method(Method),
}

impl PointLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PointLabel::Regime(r) => r.as_str(),
            PointLabel::NotLocallyComputable => "NOT_LOCALLY_COMPUTABLE",
            PointLabel::Method(m) => m.as_str(),
        }
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub axis_value: f64,
    /// Minimum (symmetric) or greedy (heterogeneous) average rate, bit/s.
    pub min_rate: f64,
    pub regime: PointLabel,
    /// `1 - rate / rate_without_offloading`.
    pub gain_fraction: f64,
    /// Average device energy spent (J).
    pub energy_used: f64,
    /// Cache occupied (bits).
    pub cache_used: f64,
}

fn validate_grid(axis: SweepAxis, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (i, &x) in grid.iter().enumerate() {
        axis.check_value(i, x)?;
        if i > 0 && x <= grid[i - 1] {
            return Err(Error::GridNotIncreasing { index: i });
        }
    }
    Ok(())
}

/// One point per grid value, in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<TradeoffPoint>> {
    validate_grid(spec.axis, &spec.grid)?;
    match spec.base.kind() {
        ScenarioKind::Symmetric => {
            let base = SymmetricInstance::from_scenario(&spec.base)?;
            spec.grid
                .par_iter()
                .map(|&x| {
                    let inst = spec.axis.apply_symmetric(&base, x);
                    symmetric_point(&inst, x, spec.budget)
                })
                .collect()
        }
        ScenarioKind::Heterogeneous => {
            let baseline = average_rate(&spec.base, &Policy::empty(spec.base.len()))?;
            spec.grid
                .par_iter()
                .map(|&x| {
                    let scenario = spec.axis.apply(&spec.base, x)?;
                    let res = greedy_solve(&scenario)?;
                    Ok(TradeoffPoint {
                        axis_value: x,
                        min_rate: res.objective,
                        regime: PointLabel::Method(res.method),
                        gain_fraction: 1.0 - res.objective / baseline,
                        energy_used: res.energy.used,
                        cache_used: res.cache.used,
                    })
                })
                .collect()
        }
    }
}

fn symmetric_point(
    inst: &SymmetricInstance,
    x: f64,
    budget: OffloadBudget,
) -> Result<TradeoffPoint> {
    let server_rate = inst.server_rate()?;
    let too_slow =
        inst.config.device_freq <= min_device_frequency(&inst.task) * (1.0 + F_MIN_MARGIN);
    let solved = if too_slow {
        Err(Error::NotLocallyComputable { viewpoint: 0 })
    } else {
        inst.min_rate_with(budget)
    };
    let (min_rate, regime) = match solved {
        Ok(v) => v,
        Err(Error::NotLocallyComputable { .. }) => {
            return Ok(TradeoffPoint {
                axis_value: x,
                min_rate: server_rate,
                regime: PointLabel::NotLocallyComputable,
                gain_fraction: 0.0,
                energy_used: 0.0,
                cache_used: 0.0,
            });
        }
        Err(e) => return Err(e),
    };
    let offloaded = match regime {
        Regime::CacheLimited => inst.cache_count as f64,
        _ => inst.offload_capacity(budget),
    };
    let n = inst.n as f64;
    Ok(TradeoffPoint {
        axis_value: x,
        min_rate,
        regime: PointLabel::Regime(regime),
        gain_fraction: 1.0 - min_rate / server_rate,
        energy_used: offloaded * inst.task_energy() / n,
        cache_used: offloaded.min(inst.cache_count as f64) * inst.task.input_bits,
    })
}

/// A sweep point tagged with the value of a second, outer axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub outer_value: f64,
    pub point: TradeoffPoint,
}

/// Cartesian sweep: for each `outer_grid` value, sweep `spec` on the
/// adjusted base scenario. Rows are outer-major.
pub fn sweep_surface(
    outer_axis: SweepAxis,
    outer_grid: &[f64],
    spec: &SweepSpec,
) -> Result<Vec<SurfacePoint>> {
    validate_grid(outer_axis, outer_grid)?;
    let mut rows = Vec::with_capacity(outer_grid.len() * spec.grid.len());
    for &outer in outer_grid {
        let inner = SweepSpec {
            base: outer_axis.apply(&spec.base, outer)?,
            ..spec.clone()
        };
        rows.extend(sweep(&inner)?.into_iter().map(|point| SurfacePoint {
            outer_value: outer,
            point,
        }));
    }
    Ok(rows)
}

/// Smallest cache `C*` beyond which `R*` stops improving; equals the
/// energy-limited offload count.
pub fn min_cache_size(scenario: &Scenario) -> Result<usize> {
    let inst = SymmetricInstance::from_scenario(scenario)?;
    inst.server_rate()?;
    Ok(inst.max_offload_count())
}

/// Device frequency minimizing `R*` without a cache.
///
/// Setting the derivative of `R0 - (R0 - R1(f1)) E / (k f1^2 I w)` to zero
/// gives a quadratic in `f1` whose larger root is
///
/// ```text
/// f1* = (1 - I/(4 R0 tau)) f_R + sqrt((1 - I/(4 R0 tau))^2 f_R^2 - (I w / tau) f_R)
/// ```
///
/// with `f_R = I w / (tau - I / R0)`, the frequency at which `R1 = R0`.
pub fn optimal_f1_no_cache(task: &ProjectionTask, server_freq: f64) -> Result<f64> {
    let r0 = server_rate_floor(task, server_freq).map_err(|_| Error::Domain {
        term: "tau > I w / f0 (server cannot meet the deadline)".into(),
    })?;
    let slack = task.deadline - task.input_bits / r0;
    if slack <= 0.0 {
        return Err(Error::Domain {
            term: "tau > I / R0 (device rate can never match the server rate)".into(),
        });
    }
    let f_r = task.cycles() / slack;
    let half_b = (1.0 - task.input_bits / (4.0 * r0 * task.deadline)) * f_r;
    let disc = half_b * half_b - min_device_frequency(task) * f_r;
    larger_root(half_b, disc)
}

fn larger_root(half_b: f64, disc: f64) -> Result<f64> {
    if disc < 0.0 {
        return Err(Error::Domain {
            term: format!("negative discriminant {disc}"),
        });
    }
    Ok(half_b + disc.sqrt())
}

/// Shape of `R*` as a function of `f1` around the current operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum F1Regime {
    /// Energy-limited with every offload cached: faster devices only burn
    /// the budget quicker.
    MonotoneIncreasing,
    /// Uncached offloads pay off: `R*` first falls, then rises with `f1`.
    Unimodal,
    /// Only cached offloads pay off: `R*` is set by the cache alone.
    FlatThenCacheLimited,
}

impl F1Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            F1Regime::MonotoneIncreasing => "MONOTONE_INCREASING",
            F1Regime::Unimodal => "UNIMODAL",
            F1Regime::FlatThenCacheLimited => "FLAT_THEN_CACHE_LIMITED",
        }
    }
}

impl From<Regime> for F1Regime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::EnergyLimitedCached => F1Regime::MonotoneIncreasing,
            Regime::EnergyLimitedUncached => F1Regime::Unimodal,
            Regime::CacheLimited => F1Regime::FlatThenCacheLimited,
        }
    }
}

/// Classifies the scenario's current `f1` by which optimal-offload case
/// applies there.
pub fn classify_f1_regime(scenario: &Scenario) -> Result<F1Regime> {
    let (_, regime) = SymmetricInstance::from_scenario(scenario)?.optimal_offload_count()?;
    Ok(regime.into())
}

/// Number of places where a sequence turns from falling to rising.
/// Steps with `|delta| <= tolerance` are ignored.
pub fn descent_ascent_transitions(values: &[f64], tolerance: f64) -> usize {
    let mut last_sign = 0i8;
    let mut count = 0;
    for w in values.windows(2) {
        let delta = w[1] - w[0];
        if delta.abs() <= tolerance {
            continue;
        }
        let sign = if delta > 0.0 { 1 } else { -1 };
        if last_sign == -1 && sign == 1 {
            count += 1;
        }
        last_sign = sign;
    }
    count
}
