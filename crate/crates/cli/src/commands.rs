//! The four commands behind the CLI subcommands. Each returns its CSV
//! payload and a human-readable summary as strings, so callers (main, the
//! tests) control where the bytes land; identical inputs produce
//! byte-identical outputs.

use std::fmt::Write as _;

use nakarate_core::allocator::sca_out_allocate;
use nakarate_core::mcsim::{simulate_multi_hop, simulate_single_hop, SimConfig, SimReport};
use nakarate_core::outage::{
    combine_hop_outages, multi_hop_outage, single_hop_outage, OutageResult,
};

use crate::config::{RunConfig, Scenario, SweepScale, SweepVariable};
use crate::CliError;

/// CSV text plus a short stdout summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub csv: String,
    pub summary: String,
}

/// Probabilities print with 17 significant digits, locale-independent.
fn fmt_prob(p: f64) -> String {
    format!("{p:.16e}")
}

fn numerical(e: nakarate_core::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Closed-form outage for a single-hop or multi-hop config.
pub fn cmd_outage(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let result = match cfg.scenario {
        Scenario::SingleHop => {
            let alloc = cfg.allocation()?.expect("validated");
            single_hop_outage(&alloc, cfg.r_min.expect("validated")).map_err(numerical)?
        }
        Scenario::MultiHop => {
            if let Some(per_hop) = &cfg.per_hop {
                OutageResult {
                    probability: combine_hop_outages(per_hop),
                    per_hop: per_hop.clone(),
                    abs_error_estimate: 0.0,
                }
            } else {
                let path = cfg.path()?.expect("validated");
                multi_hop_outage(&path, cfg.r_min.expect("validated")).map_err(numerical)?
            }
        }
        _ => {
            return Err(CliError::Config(format!(
                "the outage command handles single_hop or multi_hop scenarios, not {:?}",
                cfg.scenario
            )))
        }
    };

    let mut csv = String::from("probability,abs_error_estimate");
    for i in 1..=result.per_hop.len() {
        write!(csv, ",hop_{i}").unwrap();
    }
    csv.push('\n');
    write!(
        csv,
        "{},{}",
        fmt_prob(result.probability),
        fmt_prob(result.abs_error_estimate)
    )
    .unwrap();
    for p in &result.per_hop {
        write!(csv, ",{}", fmt_prob(*p)).unwrap();
    }
    csv.push('\n');

    let mut summary = format!("probability = {}\n", fmt_prob(result.probability));
    writeln!(
        summary,
        "abs_error_estimate = {}",
        fmt_prob(result.abs_error_estimate)
    )
    .unwrap();
    if !result.per_hop.is_empty() {
        let hops: Vec<String> = result.per_hop.iter().map(|p| fmt_prob(*p)).collect();
        writeln!(summary, "per_hop = [{}]", hops.join(", ")).unwrap();
    }
    Ok(CommandOutput { csv, summary })
}

/// Closed-form outage of the configured scenario with one knob replaced.
fn outage_at(cfg: &RunConfig, variable: SweepVariable, x: f64) -> Result<f64, CliError> {
    let modified = reparameterized(cfg, variable, x);
    let r_min = modified.r_min.expect("validated");
    if let Some(path) = modified.path()? {
        Ok(multi_hop_outage(&path, r_min).map_err(numerical)?.probability)
    } else {
        let alloc = modified.allocation()?.expect("validated");
        Ok(single_hop_outage(&alloc, r_min).map_err(numerical)?.probability)
    }
}

fn simulate_at(
    cfg: &RunConfig,
    variable: SweepVariable,
    x: f64,
    sim: &SimConfig,
) -> Result<SimReport, CliError> {
    let modified = reparameterized(cfg, variable, x);
    let r_min = modified.r_min.expect("validated");
    if let Some(path) = modified.path()? {
        simulate_multi_hop(&path, r_min, sim).map_err(numerical)
    } else {
        let alloc = modified.allocation()?.expect("validated");
        simulate_single_hop(&alloc, r_min, sim).map_err(numerical)
    }
}

/// A copy of the config with the swept variable set to `x`; `p` and `m`
/// apply to every subcarrier in every hop.
fn reparameterized(cfg: &RunConfig, variable: SweepVariable, x: f64) -> RunConfig {
    let mut out = cfg.clone();
    match variable {
        SweepVariable::RMin => out.r_min = Some(x),
        SweepVariable::BTotal => out.link.b_total = x,
        SweepVariable::P => {
            if let Some(chs) = &mut out.channels {
                for c in chs {
                    c.p = x;
                }
            }
            if let Some(hops) = &mut out.hops {
                for h in hops {
                    for c in &mut h.channels {
                        c.p = x;
                    }
                }
            }
        }
        SweepVariable::M => {
            if let Some(chs) = &mut out.channels {
                for c in chs {
                    c.m = x;
                }
            }
            if let Some(hops) = &mut out.hops {
                for h in hops {
                    for c in &mut h.channels {
                        c.m = x;
                    }
                }
            }
        }
    }
    out
}

/// Sweep one variable, producing plot-ready CSV with the closed form and
/// (optionally) a matching simulated column.
pub fn cmd_sweep(cfg: &RunConfig, seed_override: Option<u64>) -> Result<CommandOutput, CliError> {
    if cfg.scenario != Scenario::Sweep {
        return Err(CliError::Config(format!(
            "the sweep command requires scenario = \"sweep\", got {:?}",
            cfg.scenario
        )));
    }
    let sweep = cfg.sweep.clone().expect("validated");
    let base_sim = cfg.sim_config(seed_override)?;

    let grid: Vec<f64> = (0..sweep.points)
        .map(|i| {
            let frac = i as f64 / (sweep.points - 1) as f64;
            match sweep.scale {
                SweepScale::Linear => sweep.start + frac * (sweep.stop - sweep.start),
                SweepScale::Log => sweep.start * (sweep.stop / sweep.start).powf(frac),
            }
        })
        .collect();

    let mut csv = String::from("x,closed_form");
    if sweep.simulate {
        csv.push_str(",simulated,sim_stderr");
    }
    csv.push('\n');
    for (i, &x) in grid.iter().enumerate() {
        let closed = outage_at(cfg, sweep.variable, x)?;
        write!(csv, "{},{}", fmt_prob(x), fmt_prob(closed)).unwrap();
        if sweep.simulate {
            // one independent substream per sweep point
            let sim = SimConfig {
                seed: base_sim.seed.wrapping_add(i as u64),
                ..base_sim
            };
            let report = simulate_at(cfg, sweep.variable, x, &sim)?;
            write!(
                csv,
                ",{},{}",
                fmt_prob(report.empirical_outage),
                fmt_prob(report.stderr_outage)
            )
            .unwrap();
        }
        csv.push('\n');
    }
    let summary = format!(
        "swept {:?} over [{}, {}] ({} points, {:?} scale)\n",
        sweep.variable, sweep.start, sweep.stop, sweep.points, sweep.scale
    );
    Ok(CommandOutput { csv, summary })
}

/// Monte Carlo run of the configured scenario.
pub fn cmd_simulate(
    cfg: &RunConfig,
    seed_override: Option<u64>,
) -> Result<CommandOutput, CliError> {
    if cfg.scenario != Scenario::Simulate {
        return Err(CliError::Config(format!(
            "the simulate command requires scenario = \"simulate\", got {:?}",
            cfg.scenario
        )));
    }
    let sim = cfg.sim_config(seed_override)?;
    let r_min = cfg.r_min.expect("validated");
    let report = if let Some(path) = cfg.path()? {
        simulate_multi_hop(&path, r_min, &sim).map_err(numerical)?
    } else {
        let alloc = cfg.allocation()?.expect("validated");
        simulate_single_hop(&alloc, r_min, &sim).map_err(numerical)?
    };
    let csv = format!(
        "empirical_outage,mean_rate,stderr_outage,n_frames\n{},{},{},{}\n",
        fmt_prob(report.empirical_outage),
        fmt_prob(report.mean_rate),
        fmt_prob(report.stderr_outage),
        report.n_frames
    );
    let summary = format!(
        "empirical_outage = {}\nmean_rate = {} bits/s\nstderr_outage = {}\nn_frames = {}\nseed = {}\n",
        fmt_prob(report.empirical_outage),
        fmt_prob(report.mean_rate),
        fmt_prob(report.stderr_outage),
        report.n_frames,
        sim.seed
    );
    Ok(CommandOutput { csv, summary })
}

/// Run the subcarrier allocator and emit the plan.
pub fn cmd_allocate(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    if cfg.scenario != Scenario::Allocate {
        return Err(CliError::Config(format!(
            "the allocate command requires scenario = \"allocate\", got {:?}",
            cfg.scenario
        )));
    }
    let (users, pool, section) = cfg.allocator_instance()?;
    let table = cfg.amc_table()?;
    let plan = sca_out_allocate(&users, &pool, &table, section.p_total, section.t)
        .map_err(numerical)?;

    let mut csv = String::from("subcarrier,user,power\n");
    for (n, (user, power)) in plan.assignment.iter().zip(&plan.powers).enumerate() {
        match user {
            Some(k) => writeln!(csv, "{n},{k},{}", fmt_prob(*power)).unwrap(),
            None => writeln!(csv, "{n},,0.0").unwrap(),
        }
    }

    let mut summary = format!(
        "objective = {} bits/s\nfeasible = {}\n",
        fmt_prob(plan.objective),
        plan.feasible
    );
    for (k, s) in plan.slack.iter().enumerate() {
        writeln!(summary, "slack[{k}] = {}", fmt_prob(*s)).unwrap();
    }
    Ok(CommandOutput { csv, summary })
}
