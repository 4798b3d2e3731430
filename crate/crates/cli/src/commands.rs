use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use vr3c::hetero::{
    brute_force_solve_capped, greedy_solve, mca_solve, zipf_scenario, HeteroSolveResult, ZipfParams,
};
use vr3c::symmetric::{OffloadBudget, SymmetricInstance};
use vr3c::tradeoff::{sweep, sweep_surface, SweepAxis, SweepSpec};
use vr3c::{average_rate, Policy, Scenario, SystemConfig};

use crate::args::{Format, GenScenarioArgs, MethodArg};
use crate::error::{CliError, Result};
use crate::format::{num, Table};
use crate::output::{destination, emit, write_atomic, Destination};
use crate::scenario_file::{self, HeterogeneousBlock, Loaded, ScenarioFile, ZipfStanza};
use crate::{args, Cli, Command};

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SolveSymmetric(a) => {
            let loaded = scenario_file::load(&a.scenario, None)?;
            let text = solve_symmetric(&loaded.scenario, a.format)?;
            let name = format!("{}-symmetric.csv", stem(&a.scenario));
            finish(&a.output, a.format == Format::Csv, &name, &text)
        }
        Command::SolveHetero(a) => {
            let loaded = scenario_file::load(&a.scenario, a.seed)?;
            let text = solve_hetero(
                &loaded.scenario,
                a.method,
                a.resolution as usize,
                a.oracle_cap,
                a.format,
            )?;
            let method = format!("{:?}", a.method).to_lowercase();
            let name = format!("{}-{method}.csv", stem(&a.scenario));
            finish(&a.output, a.format == Format::Csv, &name, &text)
        }
        Command::Sweep(a) => {
            let loaded = scenario_file::load(&a.scenario, a.seed)?;
            if a.axis.len() > 2 || a.axis.len() != a.grid.len() {
                return Err(CliError::input(format!(
                    "sweep: need one or two --axis flags, each with a --grid (got {} and {})",
                    a.axis.len(),
                    a.grid.len()
                )));
            }
            let axes = a
                .axis
                .iter()
                .zip(&a.grid)
                .map(|(&axis, g)| Ok((axis, crate::grid::parse_grid(g)?)))
                .collect::<Result<Vec<_>>>()?;
            let budget = if a.relaxed {
                OffloadBudget::Continuous
            } else {
                OffloadBudget::Integral
            };
            let text = sweep_csv(&loaded, &axes, budget)?;
            let name = format!("{}-sweep.csv", stem(&a.scenario));
            finish(&a.output, true, &name, &text)
        }
        Command::GenScenario(a) => gen_scenario(&a),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

fn finish(out: &args::OutputArgs, machine: bool, name: &str, text: &str) -> Result<()> {
    let dest = destination(out.out.as_deref(), out.out_dir.as_deref(), machine, name);
    emit(&dest, text)
}

struct SymmetricSummary {
    n: usize,
    cache_limit: usize,
    offload: usize,
    cache: usize,
    max_offload: usize,
    min_rate: f64,
    label: &'static str,
    server_rate: f64,
    device_rate: Option<f64>,
    gain_local: f64,
    gain_cache: f64,
    energy_used: f64,
    energy_limit: f64,
    cache_used: f64,
    cache_bits: f64,
}

fn summarize_symmetric(scenario: &Scenario) -> Result<SymmetricSummary> {
    let inst = SymmetricInstance::from_scenario(scenario)?;
    let server_rate = inst.server_rate()?;
    let n = inst.n as f64;
    let base = SymmetricSummary {
        n: inst.n,
        cache_limit: inst.cache_count,
        offload: 0,
        cache: 0,
        max_offload: 0,
        min_rate: server_rate,
        label: "NOT_LOCALLY_COMPUTABLE",
        server_rate,
        device_rate: None,
        gain_local: 0.0,
        gain_cache: 0.0,
        energy_used: 0.0,
        energy_limit: inst.config.energy_budget,
        cache_used: 0.0,
        cache_bits: inst.cache_count as f64 * inst.task.input_bits,
    };
    match inst.solve() {
        Ok(sol) => Ok(SymmetricSummary {
            offload: sol.offload_count,
            cache: sol.cache_count,
            max_offload: sol.max_offload_count,
            min_rate: sol.min_rate,
            label: sol.regime.as_str(),
            device_rate: Some(sol.device_rate),
            gain_local: sol.gain_no_cache,
            gain_cache: sol.gain_with_cache,
            energy_used: sol.offload_count as f64 * inst.task_energy() / n,
            cache_used: sol.cache_count as f64 * inst.task.input_bits,
            ..base
        }),
        Err(vr3c::Error::NotLocallyComputable { .. }) => Ok(base),
        Err(e) => Err(e.into()),
    }
}

/// Report or one-row CSV for the closed-form symmetric optimum.
pub fn solve_symmetric(scenario: &Scenario, format: Format) -> Result<String> {
    let s = summarize_symmetric(scenario)?;
    let gain_fraction = 1.0 - s.min_rate / s.server_rate;
    if format == Format::Csv {
        let mut t = Table::new(&[
            "offload_count",
            "cache_count",
            "max_offload_count",
            "min_rate",
            "regime",
            "gain_fraction",
            "energy_used",
            "cache_used",
            "server_rate",
            "device_rate",
            "gain_local",
            "gain_cache",
        ]);
        t.row(&[
            s.offload.to_string(),
            s.cache.to_string(),
            s.max_offload.to_string(),
            num(s.min_rate),
            s.label.to_string(),
            num(gain_fraction),
            num(s.energy_used),
            num(s.cache_used),
            num(s.server_rate),
            s.device_rate.map_or_else(String::new, num),
            num(s.gain_local),
            num(s.gain_cache),
        ]);
        return Ok(t.finish());
    }
    let mut r = String::new();
    writeln!(r, "symmetric scenario: N = {}, C = {}", s.n, s.cache_limit).unwrap();
    writeln!(r, "R0 = {} bit/s", num(s.server_rate)).unwrap();
    match s.device_rate {
        Some(r1) => writeln!(r, "R1 = {} bit/s", num(r1)).unwrap(),
        None => writeln!(r, "R1 = none (device misses the deadline)").unwrap(),
    }
    writeln!(r, "d_max = {}", s.max_offload).unwrap();
    if s.offload == 0 {
        writeln!(r, "d* = 0, R* = R0, c* = {}", s.cache).unwrap();
    } else {
        writeln!(r, "d* = {}, c* = {}", s.offload, s.cache).unwrap();
    }
    writeln!(r, "R* = {} bit/s", num(s.min_rate)).unwrap();
    writeln!(r, "regime = {}", s.label).unwrap();
    writeln!(r, "gain from local computing = {} bit/s", num(s.gain_local)).unwrap();
    writeln!(r, "gain from caching = {} bit/s", num(s.gain_cache)).unwrap();
    writeln!(r, "gain fraction = {}", num(gain_fraction)).unwrap();
    writeln!(
        r,
        "energy used = {} J of {} J",
        num(s.energy_used),
        num(s.energy_limit)
    )
    .unwrap();
    writeln!(
        r,
        "cache used = {} bits of {} bits",
        num(s.cache_used),
        num(s.cache_bits)
    )
    .unwrap();
    Ok(r)
}

/// Solver runs for `method`; mca also returns the greedy seed first.
pub fn hetero_results(
    scenario: &Scenario,
    method: MethodArg,
    resolution: usize,
    oracle_cap: usize,
) -> Result<Vec<HeteroSolveResult>> {
    if scenario.kind() != vr3c::ScenarioKind::Heterogeneous {
        return Err(vr3c::Error::NotHeterogeneous.into());
    }
    // surfaces InfeasibleServerCompute before any solver runs
    average_rate(scenario, &Policy::empty(scenario.len()))?;
    Ok(match method {
        MethodArg::Ga => vec![greedy_solve(scenario)?],
        MethodArg::Mca => {
            let ga = greedy_solve(scenario)?;
            let mca = mca_solve(scenario, &ga.policy, resolution)?;
            vec![ga, mca]
        }
        MethodArg::Oracle => vec![brute_force_solve_capped(scenario, oracle_cap)?],
    })
}

pub fn solve_hetero(
    scenario: &Scenario,
    method: MethodArg,
    resolution: usize,
    oracle_cap: usize,
    format: Format,
) -> Result<String> {
    let results = hetero_results(scenario, method, resolution, oracle_cap)?;
    let baseline = average_rate(scenario, &Policy::empty(scenario.len()))?;
    if format == Format::Csv {
        let mut t = Table::new(&[
            "method",
            "min_rate",
            "gain_fraction",
            "energy_used",
            "energy_limit",
            "cache_used",
            "cache_limit",
            "offload_count",
            "cache_count",
            "iterations",
        ]);
        for res in &results {
            t.row(&[
                res.method.as_str().to_string(),
                num(res.objective),
                num(res.gain_fraction(scenario)?),
                num(res.energy.used),
                num(res.energy.limit),
                num(res.cache.used),
                num(res.cache.limit),
                res.policy.offload_count().to_string(),
                res.policy.cache_count().to_string(),
                res.iterations.to_string(),
            ]);
        }
        return Ok(t.finish());
    }
    let mut r = String::new();
    writeln!(r, "heterogeneous scenario: N = {}", scenario.len()).unwrap();
    writeln!(r, "rate without offloading = {} bit/s", num(baseline)).unwrap();
    for res in &results {
        writeln!(
            r,
            "{}: R* = {} bit/s, gain fraction = {}, offloaded = {}, cached = {}, iterations = {}",
            res.method.as_str(),
            num(res.objective),
            num(res.gain_fraction(scenario)?),
            res.policy.offload_count(),
            res.policy.cache_count(),
            res.iterations
        )
        .unwrap();
        writeln!(
            r,
            "    energy used = {} J of {} J, cache used = {} bits of {} bits",
            num(res.energy.used),
            num(res.energy.limit),
            num(res.cache.used),
            num(res.cache.limit)
        )
        .unwrap();
    }
    Ok(r)
}

/// CSV over one axis, or the outer-major product of two.
pub fn sweep_csv(
    loaded: &Loaded,
    axes: &[(SweepAxis, Vec<f64>)],
    budget: OffloadBudget,
) -> Result<String> {
    let label = if loaded.is_symmetric() {
        "regime"
    } else {
        "method"
    };
    let mut header: Vec<&str> = axes.iter().map(|(a, _)| a.as_str()).collect();
    header.extend([
        "min_rate",
        label,
        "gain_fraction",
        "energy_used",
        "cache_used",
    ]);
    let mut t = Table::new(&header);
    let (inner_axis, inner_grid) = axes.last().ok_or(vr3c::Error::EmptyGrid)?;
    let spec = SweepSpec {
        axis: *inner_axis,
        grid: inner_grid.clone(),
        base: loaded.scenario.clone(),
        budget,
    };
    let rows: Vec<(Option<f64>, _)> = match axes {
        [(outer_axis, outer_grid), _] => sweep_surface(*outer_axis, outer_grid, &spec)?
            .into_iter()
            .map(|p| (Some(p.outer_value), p.point))
            .collect(),
        _ => sweep(&spec)?.into_iter().map(|p| (None, p)).collect(),
    };
    for (outer, p) in rows {
        let mut fields: Vec<String> = outer.into_iter().map(num).collect();
        fields.extend([
            num(p.axis_value),
            num(p.min_rate),
            p.regime.as_str().to_string(),
            num(p.gain_fraction),
            num(p.energy_used),
            num(p.cache_used),
        ]);
        t.row(&fields);
    }
    Ok(t.finish())
}

fn zipf_stanza(a: &GenScenarioArgs) -> ZipfStanza {
    ZipfStanza {
        count: a.count,
        exponent: a.exponent,
        input_bits_min: a.input_bits_min,
        input_bits_max: a.input_bits_max,
        output_ratio: a.output_ratio,
        cycles_per_bit: a.cycles_per_bit,
        deadline: a.deadline,
        seed: a.seed,
        cycles_per_bit_overrides: None,
        deadline_overrides: None,
    }
}

/// Names the command-line flag behind a generator validation error.
fn flag_error(e: vr3c::Error) -> CliError {
    match e {
        vr3c::Error::InvalidInput { field, reason } => {
            CliError::input(format!("--{}: {reason}", field.replace('_', "-")))
        }
        other => other.into(),
    }
}

/// Generated scenario with budgets resolved from absolute values or
/// fractions.
pub fn generate(a: &GenScenarioArgs) -> Result<Scenario> {
    for (name, x) in [
        ("--energy-fraction", a.energy_fraction),
        ("--cache-fraction", a.cache_fraction),
    ] {
        if !(x.is_finite() && x >= 0.0) {
            return Err(CliError::input(format!("{name}: {x} must be >= 0")));
        }
    }
    let cfg = SystemConfig {
        server_freq: a.server_freq,
        device_freq: a.device_freq,
        energy_coeff: a.energy_coeff,
        energy_budget: 0.0,
        cache_bits: 0.0,
    };
    let params = ZipfParams::from(&zipf_stanza(a));
    let s = zipf_scenario(&params, cfg).map_err(flag_error)?;
    let mut cfg = *s.config();
    cfg.energy_budget = a
        .energy_budget
        .unwrap_or(a.energy_fraction * s.total_offload_energy());
    cfg.cache_bits = a
        .cache_bits
        .unwrap_or(a.cache_fraction * s.total_input_bits());
    s.with_config(cfg).map_err(flag_error)
}

/// Scenario file text for `a`; writes the viewpoint CSV when requested.
pub fn gen_scenario_file(a: &GenScenarioArgs, dest: &Destination) -> Result<String> {
    let scenario = generate(a)?;
    let mut file = ScenarioFile::from_heterogeneous(&scenario);
    if a.stanza {
        file.heterogeneous = Some(HeterogeneousBlock {
            viewpoints_csv: None,
            viewpoints: None,
            zipf: Some(zipf_stanza(a)),
        });
    } else if let Some(csv_path) = &a.viewpoints_csv {
        write_atomic(csv_path, &scenario_file::write_viewpoints_csv(&scenario))?;
        file.heterogeneous = Some(HeterogeneousBlock {
            viewpoints_csv: Some(csv_reference(csv_path, dest)?),
            viewpoints: None,
            zipf: None,
        });
    }
    Ok(file.to_toml())
}

/// How the scenario file refers to its CSV: a bare file name when both sit
/// in the same directory, else an absolute path.
fn csv_reference(csv_path: &Path, dest: &Destination) -> Result<String> {
    let parent = |p: &Path| -> PathBuf {
        match p.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        }
    };
    let canonical = |p: &Path| {
        p.canonicalize().map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        })
    };
    let csv_dir = canonical(&parent(csv_path))?;
    let toml_dir = match dest {
        Destination::File(p) => {
            let d = parent(p);
            std::fs::create_dir_all(&d).map_err(|source| CliError::Write {
                path: d.clone(),
                source,
            })?;
            canonical(&d)?
        }
        Destination::Stdout => canonical(Path::new("."))?,
    };
    let name = csv_path.file_name().expect("a file path").to_string_lossy();
    Ok(if csv_dir == toml_dir {
        name.into_owned()
    } else {
        csv_dir.join(&*name).to_string_lossy().into_owned()
    })
}

fn gen_scenario(a: &GenScenarioArgs) -> Result<()> {
    let name = format!("zipf-n{}-seed{}.toml", a.count, a.seed);
    let dest = destination(
        a.output.out.as_deref(),
        a.output.out_dir.as_deref(),
        true,
        &name,
    );
    let text = gen_scenario_file(a, &dest)?;
    emit(&dest, &text)
}
