use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use conelab::config::{RunConfig, UsageError};
use conelab::fit::{run_fit, FitTarget};
use conelab::scan::{class_label, scan_csv};
use conelab::table::{is_source_driven, mismatches, parallel_table, render_mismatches, render_table};
use conelab_core::lab::{eval_observable, FitModel, Observable, OBSERVABLES};
use conelab_core::observables::{vacuum_energy_density, vacuum_intensity};
use conelab_core::propagator::{classify, shell_coefficient};
use conelab_core::SpacetimeInterval;

#[derive(Parser)]
#[command(
    name = "conelab",
    version,
    about = "Propagator lab for a massive scalar field with a pointlike source"
)]
struct Cli {
    /// JSON config path; falls back to $CONELAB_CONFIG, then to defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one observable at a single spacetime point.
    Point {
        /// Observable id, e.g. field or glauber_density.
        observable: String,
        /// Absolute time of the evaluation point.
        #[arg(allow_negative_numbers = true)]
        t: f64,
        /// Radius from the source.
        r: f64,
    },
    /// Scan one observable over the configured grid and write CSV.
    Scan {
        observable: String,
        /// Destination file; defaults to the config's output_path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan all nine observables and judge the causal classification.
    Check,
    /// Fit one named decay law and judge the exponent.
    Fit {
        /// One of nw_spacelike, nw_timelike_phase, vacuum_powerlaw,
        /// wightman_spacelike.
        target: String,
    },
    /// Print the cutoff-regularized vacuum expectation values.
    Vacuum,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Point { observable, t, r } => cmd_point(&observable, t, r, &config),
        Command::Scan { observable, out } => cmd_scan(&observable, out.as_deref(), &config),
        Command::Check => cmd_check(&config),
        Command::Fit { target } => cmd_fit(&target, &config),
        Command::Vacuum => cmd_vacuum(&config),
    }
}

fn parse_observable(id: &str) -> Result<Observable> {
    Observable::parse(id).map_err(|_| {
        let known: Vec<&str> = OBSERVABLES.iter().map(|o| o.as_str()).collect();
        UsageError(format!(
            "unknown observable {id:?}; expected one of {}",
            known.join(", ")
        ))
        .into()
    })
}

/// Single-point record. Times on the command line are absolute; the
/// source-relative offset decides classification and evaluation.
fn cmd_point(id: &str, t_abs: f64, r: f64, config: &RunConfig) -> Result<ExitCode> {
    let obs = parse_observable(id)?;
    let grid = config.grid_spec();
    let spec = config.quadrature_spec();
    let t = t_abs - config.y0;
    let class = classify(SpacetimeInterval::new(t, r), config.band_eps);

    println!("observable: {}", obs.as_str());
    println!("T: {t_abs:.16e}");
    println!("r: {r:.16e}");
    println!("class: {}", class_label(class));

    // Before the source fires every source-driven observable is identically
    // zero, including on the backward cone, so the band guard is moot there.
    let sample = if is_source_driven(obs) && t <= 0.0 {
        Some(conelab_core::lab::PointSample {
            value: 0.0,
            err_est: 0.0,
        })
    } else {
        eval_observable(obs, t, r, &grid, &spec)?
    };

    match sample {
        Some(s) => {
            println!("re: {:.16e}", s.value);
            println!("im: {:.16e}", 0.0);
            println!("err_est: {:.16e}", s.err_est);
        }
        None => {
            println!("note: pointwise value undefined inside the light-cone band");
        }
    }
    if obs == Observable::Field && t > 0.0 {
        println!("shell: {:.16e}", config.g * shell_coefficient(r));
    }
    if is_source_driven(obs) && t <= 0.0 {
        println!("note: pre-source");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(id: &str, out: Option<&Path>, config: &RunConfig) -> Result<ExitCode> {
    let obs = parse_observable(id)?;
    let grid = config.grid_spec();
    let spec = config.quadrature_spec();
    let csv = scan_csv(obs, &grid, &spec, config.y0)?;
    let path = out.unwrap_or_else(|| Path::new(&config.output_path));
    std::fs::write(path, &csv)
        .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    println!(
        "wrote {} rows to {}",
        csv.lines().count() - 1,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(config: &RunConfig) -> Result<ExitCode> {
    if config.g == 0.0 {
        println!(
            "warning: g = 0, the source never fires; source-driven rows are \
             vacuous-causal and excluded from the verdict comparison"
        );
    }
    let rows = parallel_table(
        &config.grid_spec(),
        &config.quadrature_spec(),
        config.causal_threshold,
    )?;
    print!("{}", render_table(&rows, config.g));
    let bad = mismatches(&rows, config.g);
    if bad.is_empty() {
        println!("all verdicts match the expected classification");
        Ok(ExitCode::SUCCESS)
    } else {
        print!("{}", render_mismatches(&bad));
        Ok(ExitCode::from(1))
    }
}

fn model_label(model: FitModel) -> &'static str {
    match model {
        FitModel::ExpSqrt => "exp_sqrt",
        FitModel::PowerLaw => "power_law",
    }
}

fn cmd_fit(id: &str, config: &RunConfig) -> Result<ExitCode> {
    let target = FitTarget::parse(id)?;
    let outcome = run_fit(target, config)?;
    println!("target: {}", target.as_str());
    println!("model: {}", model_label(outcome.fit.model));
    println!("samples: {}", outcome.n_samples);
    println!(
        "window: [{:.6e}, {:.6e}]",
        outcome.fit.window.0, outcome.fit.window.1
    );
    println!("exponent: {:.16e}", outcome.fit.exponent);
    println!("stderr: {:.16e}", outcome.fit.stderr);
    println!("r2: {:.16e}", outcome.fit.r2);
    println!(
        "expected: {:.16e} +- {:.16e}",
        outcome.expected, outcome.tolerance
    );
    if let Some(note) = &outcome.note {
        println!("note: {note}");
    }
    if outcome.pass() {
        println!("PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL");
        Ok(ExitCode::from(1))
    }
}

fn cmd_vacuum(config: &RunConfig) -> Result<ExitCode> {
    let p = config.params();
    println!("m: {:.16e}", p.m);
    println!("lambda: {:.16e}", p.lambda);
    println!("vacuum_intensity: {:.16e}", vacuum_intensity(&p));
    println!("vacuum_energy_density: {:.16e}", vacuum_energy_density(&p));
    Ok(ExitCode::SUCCESS)
}
