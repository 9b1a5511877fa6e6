//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use omega_imc::abstraction::build_imc;
use omega_imc::geometry::{uncertain_volume, Class};
use omega_imc::imc::Imc;
use omega_imc::oracles::{rng, simulate};
use omega_imc::refinement::{refine_loop, RoundView};
use omega_imc::verifier::verify;

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_BUDGET, EXIT_OK};
use crate::io::{atomic_write, imc_from_json, imc_to_json, partition_svg, results_csv, trajectories_csv};

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    atomic_write(&path, text.as_bytes())?;
    Ok(path)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_imc(ctx: &RunContext) -> Result<Imc, CliError> {
    let path = ctx.config.imc_path().expect("caller checked");
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    imc_from_json(&text)
}

/// Builds the abstraction of the initial partition and writes `imc.json`.
pub fn cmd_abstract(ctx: &RunContext) -> Result<i32, CliError> {
    let model = ctx.config.build_model()?;
    let partition = ctx.config.build_partition()?;
    let imc = build_imc(&model, &partition)?;
    write_text(&ctx.out_dir, "imc.json", &imc_to_json(&imc))?;
    let mut cells = String::from("cell_id");
    for i in 0..partition.domain().dim() {
        let _ = write!(cells, ",lo_{i},hi_{i}");
    }
    cells.push_str(",props\n");
    for (j, c) in partition.cells().iter().enumerate() {
        let _ = write!(cells, "{j}");
        for i in 0..c.dim() {
            let _ = write!(cells, ",{},{}", c.lower()[i], c.upper()[i]);
        }
        let props: Vec<&str> = partition.props(j).iter().map(String::as_str).collect();
        let _ = writeln!(cells, ",{}", props.join(" "));
    }
    write_text(&ctx.out_dir, "cells.csv", &cells)?;
    log::info!("abstraction with {} states written to {}", imc.n_states(), ctx.out_dir.display());
    Ok(EXIT_OK)
}

/// One verification pass; writes `results.csv`, `summary.json` and, for
/// two-dimensional partitions, `partition.svg`.
pub fn cmd_verify(ctx: &RunContext) -> Result<i32, CliError> {
    let start = Instant::now();
    let cfg = &ctx.config;
    let dra = cfg.load_dra()?;
    let spec = cfg.spec();
    let (partition, imc) = if cfg.imc.is_some() {
        (None, load_imc(ctx)?)
    } else {
        let model = cfg.build_model()?;
        let partition = cfg.build_partition()?;
        let imc = build_imc(&model, &partition)?;
        (Some(partition), imc)
    };
    let r = verify(&imc, &dra, &spec, &cfg.solver())?;
    write_text(
        &ctx.out_dir,
        "results.csv",
        &results_csv(partition.as_ref(), &r.p_min, &r.p_max, &r.classes),
    )?;
    let mut v_unc = serde_json::Value::Null;
    if let Some(p) = &partition {
        v_unc = json!(uncertain_volume(p, &r.classes).map_err(|e| CliError::Other(e.to_string()))?);
        if cfg.output.plot {
            if let Some(svg) = partition_svg(p, &r.classes) {
                write_text(&ctx.out_dir, "partition.svg", &svg)?;
            }
        }
    }
    let summary = json!({
        "states": r.classes.len(),
        "yes": r.count(Class::Yes),
        "no": r.count(Class::No),
        "undecided": r.count(Class::Undecided),
        "uncertain_volume": v_unc,
        "product_states": r.product.n_states(),
        "iterations_upper": r.extremal.upper_values.iterations,
        "iterations_lower": r.extremal.lower_values.iterations,
        "seed": ctx.seed,
        "wall_secs": start.elapsed().as_secs_f64(),
    });
    write_text(&ctx.out_dir, "summary.json", &pretty(&summary))?;
    Ok(EXIT_OK)
}

/// The refinement loop; writes per-round tables and plots, `progress.log`
/// and `summary.json`. Budget exhaustion yields exit code 4.
pub fn cmd_refine(ctx: &RunContext) -> Result<i32, CliError> {
    let start = Instant::now();
    let cfg = &ctx.config;
    let model = cfg.build_model()?;
    let partition = cfg.build_partition()?;
    let dra = cfg.load_dra()?;
    let scorer = cfg.scorer()?;
    let mut progress = String::new();
    let mut io_error: Option<CliError> = None;
    let observer = |view: &RoundView<'_>| {
        if io_error.is_some() {
            return;
        }
        let rep = view.report;
        let r = view.result;
        let _ = writeln!(
            progress,
            "round={} cells={} uncertain_volume={} yes={} no={} undecided={} flips={} elapsed_secs={:.3}",
            rep.round, rep.cells, rep.uncertain_volume, rep.yes, rep.no, rep.undecided, rep.flips, rep.elapsed_secs
        );
        let write = || -> Result<(), CliError> {
            let csv = results_csv(Some(view.partition), &r.p_min, &r.p_max, &r.classes);
            write_text(&ctx.out_dir, &format!("round_{:03}.csv", rep.round), &csv)?;
            if cfg.output.plot {
                if let Some(svg) = partition_svg(view.partition, &r.classes) {
                    write_text(&ctx.out_dir, &format!("round_{:03}.svg", rep.round), &svg)?;
                }
            }
            write_text(&ctx.out_dir, "progress.log", &progress)?;
            Ok(())
        };
        if let Err(e) = write() {
            io_error = Some(e);
        }
    };
    let run = refine_loop(
        &model,
        partition,
        &dra,
        &cfg.spec(),
        &cfg.refinement.loop_config(),
        &cfg.solver(),
        scorer.as_ref(),
        observer,
    )?;
    if let Some(e) = io_error {
        return Err(e);
    }
    let r = &run.result;
    write_text(
        &ctx.out_dir,
        "results.csv",
        &results_csv(Some(&run.partition), &r.p_min, &r.p_max, &r.classes),
    )?;
    let summary = json!({
        "status": run.outcome.as_str(),
        "rounds": run.rounds,
        "final_cells": run.partition.len(),
        "final_uncertain_volume": run.rounds.last().map(|x| x.uncertain_volume),
        "flips": run.total_flips(),
        "scorer": scorer.name(),
        "seed": ctx.seed,
        "wall_secs": start.elapsed().as_secs_f64(),
    });
    write_text(&ctx.out_dir, "summary.json", &pretty(&summary))?;
    log::info!("refinement finished: {}", run.outcome);
    Ok(if run.outcome.is_budget() { EXIT_BUDGET } else { EXIT_OK })
}

/// Sampled trajectories of the continuous system; writes `trajectories.csv`.
pub fn cmd_simulate(ctx: &RunContext, x0: &[f64], horizon: usize, n_traj: usize) -> Result<i32, CliError> {
    let model = ctx.config.build_model()?;
    if x0.len() != model.dim() || !model.domain().contains_point(x0) {
        return Err(CliError::config(format!("initial state {x0:?} is not in the domain")));
    }
    let mut r = rng(ctx.seed);
    let trajs: Vec<Vec<Vec<f64>>> = (0..n_traj).map(|_| simulate(&model, x0, horizon, &mut r)).collect();
    write_text(&ctx.out_dir, "trajectories.csv", &trajectories_csv(&trajs))?;
    Ok(EXIT_OK)
}
