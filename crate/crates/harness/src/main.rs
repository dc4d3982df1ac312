use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grp_core::scheme::Solver;
use grp_harness::{convergence_study, parse_config, preset, preset_names, run_problem, HarnessError, ProblemConfig};

#[derive(Parser)]
#[command(name = "grp-solve", version, about = "Run one-dimensional GRP finite-volume problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a config file to its end time.
    Run {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        zones: Option<usize>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        tend: Option<f64>,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Observed orders of accuracy over a list of grids.
    Convergence {
        #[arg(long)]
        preset: String,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        grids: Vec<usize>,
    },
    /// Print the available preset names.
    ListPresets,
}

fn load(preset_name: Option<String>, config: Option<PathBuf>) -> Result<ProblemConfig, HarnessError> {
    match (preset_name, config) {
        (Some(p), _) => preset(&p),
        (None, Some(path)) => parse_config(&std::fs::read_to_string(path)?),
        (None, None) => Err(HarnessError::invalid("preset", "either --preset or --config is required")),
    }
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::ListPresets => {
            for n in preset_names() {
                println!("{n}");
            }
        }
        Command::Run {
            preset,
            config,
            zones,
            cfl,
            tend,
            solver,
            out,
        } => {
            let mut cfg = load(preset, config)?;
            if let Some(n) = zones {
                cfg.n_zones = n;
            }
            if let Some(c) = cfl {
                cfg.cfl = c;
            }
            if let Some(t) = tend {
                cfg.t_end = t;
            }
            if let Some(s) = solver {
                cfg.solver = s
                    .parse::<Solver>()
                    .map_err(|e| HarnessError::invalid("solver", e.to_string()))?;
            }
            if out.is_some() {
                cfg.output = out;
            }
            let r = run_problem(&cfg)?;
            let s = &r.summary;
            println!(
                "system={} zones={} solver={} steps={} t={} dt_min={:.3e} dt_max={:.3e}",
                cfg.system,
                cfg.n_zones,
                cfg.solver.as_str(),
                s.steps,
                s.t_final,
                s.min_dt,
                s.max_dt
            );
            println!(
                "floors={} degraded_faces={} picard_failures={} fixed_point_failures={}",
                s.floors_applied, s.faces_degraded, s.picard_failures, s.fixed_point_failures
            );
            if let Some(e) = &r.errors {
                for (k, name) in e.names.iter().enumerate() {
                    println!("{name}: L1={:.6e} L2={:.6e} Linf={:.6e}", e.l1[k], e.l2[k], e.linf[k]);
                }
            }
            if let Some(p) = &cfg.output {
                println!("wrote {}", p.display());
            }
        }
        Command::Convergence { preset: name, grids } => {
            let cfg = preset(&name)?;
            println!("{:>8} {:>14} {:>8}", "zones", "L1", "order");
            for row in convergence_study(&cfg, &grids)? {
                let order = row.order.map_or("-".to_string(), |o| format!("{o:.3}"));
                println!("{:>8} {:>14.6e} {:>8}", row.n_zones, row.l1, order);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
