use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jcgrav::model::PhysicalParams;
use jcgrav::observables::collapse_revival_times;
use jcgrav::scenario::{run_scenario, Engine, Preset, ScenarioConfig};
use jcgrav::Error;

/// Jaynes-Cummings dynamics of a moving atom in a homogeneous gravitational field.
#[derive(Parser)]
#[command(name = "jcgrav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a key=value config file and write CSV output.
    Run {
        /// key=value scenario file
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long)]
        engine: Option<Engine>,
        /// Output directory (default: $JCGRAV_OUTPUT_DIR or ./jcgrav-out)
        #[arg(long)]
        out: Option<PathBuf>,
        /// End of the time grid in units of λt
        #[arg(long)]
        tmax_scaled: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Angle between wave vector and momentum (rad); 0 switches gravity off
        #[arg(long)]
        theta: Option<f64>,
    },
    /// List the figure presets.
    Presets,
    /// Collapse and revival time estimate for the reference parameters.
    Estimate {
        #[arg(long, default_value_t = 4.0)]
        n_mean: f64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        delta0: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        g: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            preset,
            engine,
            out,
            tmax_scaled,
            steps,
            theta,
        } => {
            let mut cfg = match (config, preset) {
                (Some(_), Some(_)) => {
                    return Err(Error::Conflict(
                        "give either a config file or --preset, not both".into(),
                    ))
                }
                (Some(path), None) => ScenarioConfig::from_file(&path)?,
                (None, Some(p)) => ScenarioConfig::preset(p),
                (None, None) => ScenarioConfig::base(),
            };
            if let Some(e) = engine {
                cfg.engine = e;
            }
            if let Some(dir) = out {
                cfg.output_path = dir;
            }
            if let Some(t) = tmax_scaled {
                cfg.t_max_scaled = t;
                cfg.t_end_seconds = None;
            }
            if let Some(n) = steps {
                cfg.n_time_steps = n;
            }
            if let Some(th) = theta {
                cfg.params.theta = th;
            }
            let result = run_scenario(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&result.summary).expect("summary serialises")
            );
            Ok(())
        }
        Command::Presets => {
            for p in Preset::ALL {
                let gravity = if p.with_gravity() {
                    "theta=pi/2"
                } else {
                    "theta=0, q.g=0"
                };
                println!("{:<6} {} ({gravity})", p.name(), p.description());
            }
            Ok(())
        }
        Command::Estimate {
            n_mean,
            m,
            delta0,
            theta,
            g,
        } => {
            let mut params = PhysicalParams::reference();
            if let Some(d) = delta0 {
                params.delta0_override = Some(d);
            }
            if let Some(th) = theta {
                params.theta = th;
            }
            if let Some(g) = g {
                params.g_accel = g;
            }
            let est = collapse_revival_times(&params, params.p0, n_mean, m)?;
            print!("{}", est.report());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
