//! Command-line front end.
//!
//! Exit codes: 0 success (and verification passed), 1 verification
//! failed, 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lorentz_pencil::config::{load_config, LoadedConfig};
use lorentz_pencil::pencil::ConditionReport;
use lorentz_pencil::verify::{verify_all, VerificationReport};
use lorentz_pencil::{fixtures, frenet, obj};

#[derive(Parser)]
#[command(
    name = "lorentz-pencil",
    about = "Surface pencils through a common line of curvature in Minkowski 3-space",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the surface of a config and export it as a Wavefront OBJ.
    Build {
        /// JSON configuration file.
        config: PathBuf,
        /// Output path for the mesh.
        #[arg(short, long)]
        output: PathBuf,
        /// Evaluate grid rows across threads (bit-identical output).
        #[arg(long)]
        parallel: bool,
    },
    /// Run all verification checks (and family conditions, when the
    /// config is in family-coefficient form) against a config.
    Verify {
        /// JSON configuration file.
        config: PathBuf,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Export (and verify) the built-in reference pencils.
    Examples {
        /// A single fixture name; all of them when omitted.
        name: Option<String>,
        /// Directory for the exported meshes.
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Summarize a config: curve kind, curvature/torsion range, grid.
    Info {
        /// JSON configuration file.
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Build {
            config,
            output,
            parallel,
        } => {
            let cfg = load_config(&config).map_err(|e| e.to_string())?;
            build_one(&cfg, &output, parallel)?;
            println!("wrote {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, json } => {
            let cfg = load_config(&config).map_err(|e| e.to_string())?;
            let report = verify_all(&cfg.spec, &cfg.tolerances, cfg.grid.0, cfg.grid.1);
            let conditions = if cfg.spec.ms.is_family() {
                Some(
                    cfg.spec
                        .check_family_conditions()
                        .map_err(|e| e.to_string())?,
                )
            } else {
                None
            };
            let pass = report.overall && conditions.as_ref().is_none_or(|c| c.overall);
            if json {
                print_json(&report, conditions.as_ref())?;
            } else {
                print_table(&report, conditions.as_ref());
            }
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Examples { name, outdir } => {
            let list: Vec<&fixtures::Fixture> = match &name {
                Some(n) => {
                    vec![fixtures::by_name(n).ok_or_else(|| format!("unknown fixture `{n}`"))?]
                }
                None => fixtures::all().iter().collect(),
            };
            let mut all_as_expected = true;
            for f in list {
                let cfg = f.load().map_err(|e| format!("{}: {e}", f.name))?;
                let path = outdir.join(format!("{}.obj", f.name));
                build_one(&cfg, &path, false)?;
                let report = verify_all(&cfg.spec, &cfg.tolerances, cfg.grid.0, cfg.grid.1);
                let verdict = if report.overall { "pass" } else { "FAIL" };
                let note = if report.overall == f.expected_pass {
                    ""
                } else {
                    all_as_expected = false;
                    " (unexpected)"
                };
                println!(
                    "{:<4} {verdict}{note}  {}  -> {}",
                    f.name,
                    f.description,
                    path.display()
                );
            }
            Ok(if all_as_expected {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Info { config } => {
            let cfg = load_config(&config).map_err(|e| e.to_string())?;
            print_info(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_one(cfg: &LoadedConfig, output: &Path, parallel: bool) -> Result<(), String> {
    let mesh = if parallel {
        cfg.spec.sample_grid_parallel(cfg.grid.0, cfg.grid.1)
    } else {
        cfg.spec.sample_grid(cfg.grid.0, cfg.grid.1)
    }
    .map_err(|e| e.to_string())?;
    let row = mesh.nearest_t_row(cfg.spec.t0);
    obj::write_obj(&mesh, row, output).map_err(|e| format!("writing {}: {e}", output.display()))
}

fn print_table(report: &VerificationReport, conditions: Option<&ConditionReport>) {
    println!(
        "{:<16} {:>12} {:>10}  result",
        "check", "residual", "threshold"
    );
    for c in &report.checks {
        println!(
            "{:<16} {:>12.3e} {:>10.1e}  {}",
            c.check,
            c.residual,
            c.threshold,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(cond) = conditions {
        for c in &cond.entries {
            println!(
                "{:<16} {:>12.3e} {:>10.1e}  {}",
                c.name,
                c.residual,
                c.threshold,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    let pass = report.overall && conditions.is_none_or(|c| c.overall);
    println!("overall: {}", if pass { "pass" } else { "FAIL" });
}

fn print_json(
    report: &VerificationReport,
    conditions: Option<&ConditionReport>,
) -> Result<(), String> {
    let doc = serde_json::json!({
        "checks": report.checks,
        "warnings": report.warnings,
        "family_conditions": conditions,
        "overall": report.overall && conditions.is_none_or(|c| c.overall),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?
    );
    Ok(())
}

fn print_info(cfg: &LoadedConfig) -> Result<(), String> {
    let spec = &cfg.spec;
    let (l1, l2) = spec.curve.s_range();
    println!("curve kind: {}", spec.kind);
    println!("s range:    [{l1}, {l2}]");
    println!(
        "t range:    [{}, {}], t0 = {}",
        spec.t_range.0, spec.t_range.1, spec.t0
    );
    println!("grid:       {} x {}", cfg.grid.0, cfg.grid.1);

    let grid = frenet::uniform_grid(l1, l2, 101);
    let profile =
        frenet::torsion_profile(&spec.curve, spec.kind, &grid).map_err(|e| e.to_string())?;
    let (mut tau_min, mut tau_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut k_min, mut k_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &s in &grid {
        let f = spec.frame_at(s).map_err(|e| e.to_string())?;
        k_min = k_min.min(f.kappa);
        k_max = k_max.max(f.kappa);
    }
    for (_, tau) in profile {
        tau_min = tau_min.min(tau);
        tau_max = tau_max.max(tau);
    }
    println!("kappa:      [{k_min:.6}, {k_max:.6}]");
    println!("tau:        [{tau_min:.6}, {tau_max:.6}]");
    let th1 = spec.theta_at(l1).map_err(|e| e.to_string())?;
    let th2 = spec.theta_at(l2).map_err(|e| e.to_string())?;
    println!("theta:      {th1:.6} at s = {l1}, {th2:.6} at s = {l2}");
    for w in spec.construction_warnings() {
        println!("warning:    {w}");
    }
    Ok(())
}
