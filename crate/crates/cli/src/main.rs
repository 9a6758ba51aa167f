//! `hyperac`: run Allen-Cahn simulations from a config file, generate and
//! inspect point sets, and measure MZ constants and quadrature exactness.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! blow-up (diagnostics up to the failing step are still written).

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hyperac_core::quadrature::{exactness_profile, LOADED_EXACTNESS_TOLERANCE};
use hyperac_core::solver::ProbeGrid;
use hyperac_core::{
    dim_pn, equal_area_rule, gauss_product_rule, load_rule, mesh_norm, mz_constant, random_rule,
    reference_initial_condition, write_rule, Error, QuadratureRule, Solver, SolverConfig,
};

use config::RunSpec;
use output::{Artifacts, RulesUsed, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "hyperac",
    version,
    about = "Hyperinterpolation spectral solver for Allen-Cahn on the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run { config: PathBuf },
    /// Generate or inspect point files.
    #[command(subcommand)]
    Points(PointsCommand),
    /// Estimate the MZ constant of a point file at degree N.
    Mz {
        path: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Per-degree quadrature error of a point file up to degree t.
    Exactness {
        path: PathBuf,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PointsCommand {
    /// Uniform random points with equal weights.
    GenRandom {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Equal-area partition centers with equal weights.
    GenEqualArea {
        #[arg(long)]
        m: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Gauss-Legendre x trapezoid product rule exact to the given degree.
    GenGauss {
        #[arg(long)]
        exactness: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Print size, weight sum, mesh norm and an exactness sweep.
    Inspect {
        path: PathBuf,
        #[arg(long, default_value_t = 10)]
        exactness: usize,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Points(p) => cmd_points(p).map(|_| ExitCode::SUCCESS),
        Command::Mz { path, degree } => cmd_mz(&path, degree).map(|_| ExitCode::SUCCESS),
        Command::Exactness { path, degree } => {
            cmd_exactness(&path, degree).map(|_| ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_nonempty(path: &Path) -> Result<QuadratureRule> {
    let rule = load_rule(path)?;
    if rule.is_empty() {
        bail!("{} contains no points", path.display());
    }
    Ok(rule)
}

fn cmd_points(cmd: PointsCommand) -> Result<()> {
    let (rule, out) = match cmd {
        PointsCommand::GenRandom { m, seed, output } => {
            if m == 0 {
                bail!("--m must be at least 1");
            }
            (random_rule(m, seed), output)
        }
        PointsCommand::GenEqualArea { m, output } => {
            if m == 0 {
                bail!("--m must be at least 1");
            }
            (equal_area_rule(m), output)
        }
        PointsCommand::GenGauss { exactness, output } => (gauss_product_rule(exactness), output),
        PointsCommand::Inspect {
            path,
            exactness,
            resolution,
        } => return inspect(&path, exactness, resolution),
    };
    write_rule(&rule, &out)?;
    println!(
        "wrote {} points ({}) to {}",
        rule.len(),
        rule.label(),
        out.display()
    );
    Ok(())
}

fn print_profile(profile: &[f64]) -> usize {
    println!("degree max_error");
    for (l, e) in profile.iter().enumerate() {
        println!("{l} {e:.3e}");
    }
    profile
        .iter()
        .position(|e| *e > LOADED_EXACTNESS_TOLERANCE)
        .map_or(profile.len(), |first_bad| first_bad)
}

/// Number of leading degrees that pass, printed as an exactness degree.
fn report_exactness(passing: usize, requested: usize) {
    match passing {
        0 => println!(
            "exactness: none (constants not integrated within {LOADED_EXACTNESS_TOLERANCE:e})"
        ),
        p if p > requested => {
            println!("exactness: >= {requested} (tolerance {LOADED_EXACTNESS_TOLERANCE:e})")
        }
        p => println!(
            "exactness: {} (tolerance {LOADED_EXACTNESS_TOLERANCE:e})",
            p - 1
        ),
    }
}

fn inspect(path: &Path, exactness: usize, resolution: usize) -> Result<()> {
    let rule = load_nonempty(path)?;
    println!("m = {}", rule.len());
    println!("weight_sum = {:.17e}", rule.total_weight());
    println!("mesh_norm = {:.17e}", mesh_norm(&rule, resolution)?);
    let profile = exactness_profile(&rule, exactness)?;
    report_exactness(print_profile(&profile), exactness);
    Ok(())
}

fn cmd_exactness(path: &Path, degree: usize) -> Result<()> {
    let rule = load_nonempty(path)?;
    let profile = exactness_profile(&rule, degree)?;
    report_exactness(print_profile(&profile), degree);
    Ok(())
}

fn cmd_mz(path: &Path, degree: usize) -> Result<()> {
    let rule = load_nonempty(path)?;
    let report = mz_constant(&rule, degree)?;
    println!("m = {}", rule.len());
    println!("dim_P_N = {}", dim_pn(degree, 3)?);
    println!("eta = {:.17e}", report.eta);
    println!("converged = {}", report.converged);
    println!("iterations = {}", report.iterations);
    if report.is_mz_system() {
        println!("verdict: pass (eta < 1)");
    } else {
        println!("verdict: fail (eta >= 1)");
    }
    Ok(())
}

fn cmd_run(config_path: &Path) -> Result<ExitCode> {
    let started = Instant::now();
    let spec = RunSpec::load(config_path)?;
    for w in spec.warnings() {
        eprintln!("warning: {w}");
    }

    let evolution = spec.points.build().context("building points")?;
    let init = spec
        .init_points
        .as_ref()
        .map(|p| p.build().context("building init_points"))
        .transpose()?;
    let energy_rule = gauss_product_rule(spec.energy_exactness);
    let rules = RulesUsed {
        evolution: evolution.label().to_string(),
        evolution_points: evolution.len(),
        init: init.as_ref().map(|r| r.label().to_string()),
        init_points: init.as_ref().map(|r| r.len()),
        energy: energy_rule.label().to_string(),
    };

    let mut cfg = SolverConfig::new(spec.nu, spec.tau, spec.degree, evolution)
        .with_steps(spec.steps)
        .with_energy_rule(energy_rule)
        .with_probe_grid(ProbeGrid::new(spec.grid_nlat, spec.grid_nlon))
        .with_snapshot_every(spec.snapshot_every);
    if let Some(rule) = init {
        cfg = cfg.with_init_rule(rule);
    }
    if let Some(a) = spec.alpha0 {
        cfg = cfg.with_alpha0(a);
    }
    let solver = Solver::new(cfg)?;

    let (out, failure) = match solver.run(reference_initial_condition) {
        Ok(out) => (out, None),
        Err(f) => (*f.partial, Some(f.error)),
    };

    let dir = &spec.output_dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    output::write_file(
        &dir.join("diagnostics.csv"),
        &output::diagnostics_csv(&out.diagnostics),
    )?;
    let mut snapshots = Vec::new();
    if !out.snapshots.is_empty() {
        std::fs::create_dir_all(dir.join("snapshots"))?;
    }
    for s in &out.snapshots {
        let rel = Path::new("snapshots").join(output::snapshot_name(s.n));
        output::write_file(&dir.join(&rel), &output::snapshot_text(s))?;
        snapshots.push(rel);
    }

    let (status, blow_up_step, code) = match &failure {
        None => ("completed", None, ExitCode::SUCCESS),
        Some(Error::BlowUp { step }) => ("blow-up", Some(*step), ExitCode::from(2)),
        Some(_) => ("failed", None, ExitCode::from(1)),
    };
    let manifest = RunManifest {
        version: output::version_string(),
        config_file: config_path.to_path_buf(),
        config: &spec,
        rules,
        alpha0_used: out.alpha0,
        status,
        blow_up_step,
        rows: out.diagnostics.len(),
        artifacts: Artifacts {
            diagnostics: PathBuf::from("diagnostics.csv"),
            snapshots,
        },
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    output::write_file(
        &dir.join("manifest.json"),
        &(serde_json::to_string_pretty(&manifest)? + "\n"),
    )?;

    match failure {
        None => println!(
            "completed {} steps; outputs in {}",
            spec.steps,
            dir.display()
        ),
        Some(e) => eprintln!("error: {e}; partial outputs in {}", dir.display()),
    }
    Ok(code)
}
