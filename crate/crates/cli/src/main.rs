//! `bargmann-lab`: run phase-covariance verification scenarios from JSON
//! configs or per-scenario flags, and emit deterministic CSV/JSON reports.
//!
//! Exit codes: 0 all checks passed, 1 a physics tolerance failed,
//! 2 usage / configuration / I-O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bargmann_cli::config::{
    EventSection, EvolutionSection, GridSection, ParticleSection, RingSection, Scenario,
    ScenarioConfig, SweepParameter, SweepSection, TransformSection,
};
use bargmann_cli::scenario::run_scenario;

#[derive(Parser)]
#[command(name = "bargmann-lab", version, about = "Phase-covariance scenario runner")]
struct Cli {
    /// Print the scenario registry and exit.
    #[arg(long)]
    list_scenarios: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated c values for the sweep (e.g. 8,16,32,64,128).
    #[arg(long, value_name = "LIST")]
    sweep_c: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Translate-boost loop on a (multi-mass) Gaussian packet.
    BargmannLoop {
        #[arg(long, default_value = "1024")]
        n: usize,
        #[arg(long, default_value = "28.0")]
        length: f64,
        /// Comma-separated channel masses.
        #[arg(long, default_value = "1.0")]
        masses: String,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "1.0")]
        c: f64,
        /// Boost velocity, scalar x-component or "vx,vy,vz".
        #[arg(long, default_value = "1.0")]
        v: String,
        /// Translation, scalar x-component or "ax,ay,az".
        #[arg(long, default_value = "1.0")]
        a: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolve-then-boost vs boost-then-evolve discrepancy (free potential).
    Covariance {
        #[arg(long, default_value = "1024")]
        n: usize,
        #[arg(long, default_value = "40.0")]
        length: f64,
        #[arg(long, default_value = "1.0")]
        masses: String,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "1.0")]
        c: f64,
        #[arg(long, default_value = "1.0")]
        v: String,
        #[arg(long, default_value = "0.001")]
        dt: f64,
        #[arg(long, default_value = "1000")]
        steps: usize,
        #[arg(long)]
        include_rest_energy: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Klein-Gordon envelope vs Schrodinger evolution over a c sweep.
    KgReduce {
        #[arg(long, default_value = "512")]
        n: usize,
        #[arg(long, default_value = "40.0")]
        length: f64,
        #[arg(long, default_value = "1.0")]
        mass: f64,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "0.01")]
        dt: f64,
        #[arg(long, default_value = "100")]
        steps: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact Lorentz phase vs Galilean boost phase at one event.
    Remnant {
        #[arg(long, default_value = "1.0")]
        mass: f64,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "10.0")]
        c: f64,
        #[arg(long, default_value = "1.0")]
        v: String,
        /// Event position, scalar x-component or "x,y,z".
        #[arg(long, default_value = "0.3")]
        x: String,
        #[arg(long, default_value = "0.7")]
        t: f64,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rotating-ring phase comparators.
    Sagnac {
        #[arg(long, default_value = "1.0")]
        radius: f64,
        #[arg(long, default_value = "0.5")]
        omega: f64,
        #[arg(long, default_value = "1.0")]
        mass: f64,
        /// Signal speed relative to the ring (the projective phase equals the
        /// non-relativistic one exactly at v = 2 Omega R).
        #[arg(long, default_value = "1.0")]
        v_signal: f64,
        #[arg(long)]
        t_flight: Option<f64>,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "20.0")]
        c: f64,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Matrix group loops: central shift, commutators, event shifts.
    GroupLoop {
        #[arg(long, default_value = "1.0")]
        mass: f64,
        #[arg(long, default_value = "1.0")]
        hbar: f64,
        #[arg(long, default_value = "10.0")]
        c: f64,
        #[arg(long, default_value = "1.0")]
        v: String,
        #[arg(long, default_value = "1.0")]
        a: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Poincare-loop contraction onto the central shift over a c sweep.
    Contract {
        #[arg(long, default_value = "0.3")]
        v: String,
        #[arg(long, default_value = "0.7")]
        a: String,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_vec3(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number \"{s}\""))
    };
    match parts.len() {
        1 => Ok([parse(parts[0])?, 0.0, 0.0]),
        3 => Ok([parse(parts[0])?, parse(parts[1])?, parse(parts[2])?]),
        _ => Err(format!(
            "expected a scalar or three comma-separated components, got \"{text}\""
        )),
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number \"{s}\""))
        })
        .collect()
}

fn sweep_section(args: &SweepArgs) -> Result<Option<SweepSection>, String> {
    match &args.sweep_c {
        None => Ok(None),
        Some(text) => Ok(Some(SweepSection {
            parameter: SweepParameter::C,
            values: Some(parse_list(text)?),
            log_range: None,
        })),
    }
}

fn particle(masses: Vec<f64>, hbar: f64, c: f64) -> ParticleSection {
    ParticleSection { masses, hbar, c }
}

fn build_config(command: &Command) -> Result<Option<(ScenarioConfig, &OutputArgs)>, String> {
    let cfg = match command {
        Command::Run { .. } => return Ok(None),
        Command::BargmannLoop {
            n,
            length,
            masses,
            hbar,
            c,
            v,
            a,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::BargmannLoop,
                grid: Some(GridSection { n: *n, length: *length }),
                particle: Some(particle(parse_list(masses)?, *hbar, *c)),
                transform: Some(TransformSection {
                    v: parse_vec3(v)?,
                    a: parse_vec3(a)?,
                }),
                evolution: None,
                ring: None,
                event: None,
                sweep: None,
                tolerances: None,
            },
            output,
        ),
        Command::Covariance {
            n,
            length,
            masses,
            hbar,
            c,
            v,
            dt,
            steps,
            include_rest_energy,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::Covariance,
                grid: Some(GridSection { n: *n, length: *length }),
                particle: Some(particle(parse_list(masses)?, *hbar, *c)),
                transform: Some(TransformSection {
                    v: parse_vec3(v)?,
                    a: [0.0; 3],
                }),
                evolution: Some(EvolutionSection {
                    dt: *dt,
                    steps: *steps,
                    include_rest_energy: *include_rest_energy,
                }),
                ring: None,
                event: None,
                sweep: None,
                tolerances: None,
            },
            output,
        ),
        Command::KgReduce {
            n,
            length,
            mass,
            hbar,
            dt,
            steps,
            sweep,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::KgReduce,
                grid: Some(GridSection { n: *n, length: *length }),
                particle: Some(particle(vec![*mass], *hbar, 1.0)),
                transform: None,
                evolution: Some(EvolutionSection {
                    dt: *dt,
                    steps: *steps,
                    include_rest_energy: false,
                }),
                ring: None,
                event: None,
                sweep: sweep_section(sweep)?,
                tolerances: None,
            },
            output,
        ),
        Command::Remnant {
            mass,
            hbar,
            c,
            v,
            x,
            t,
            sweep,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::Remnant,
                grid: None,
                particle: Some(particle(vec![*mass], *hbar, *c)),
                transform: Some(TransformSection {
                    v: parse_vec3(v)?,
                    a: [0.0; 3],
                }),
                evolution: None,
                ring: None,
                event: Some(EventSection {
                    x: parse_vec3(x)?,
                    t: *t,
                }),
                sweep: sweep_section(sweep)?,
                tolerances: None,
            },
            output,
        ),
        Command::Sagnac {
            radius,
            omega,
            mass,
            v_signal,
            t_flight,
            hbar,
            c,
            sweep,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::Sagnac,
                grid: None,
                particle: Some(particle(vec![*mass], *hbar, *c)),
                transform: None,
                evolution: None,
                ring: Some(RingSection {
                    radius: *radius,
                    omega: *omega,
                    v_signal: *v_signal,
                    t_flight: *t_flight,
                }),
                event: None,
                sweep: sweep_section(sweep)?,
                tolerances: None,
            },
            output,
        ),
        Command::GroupLoop {
            mass,
            hbar,
            c,
            v,
            a,
            output,
        } => (
            ScenarioConfig {
                scenario: Scenario::GroupLoop,
                grid: None,
                particle: Some(particle(vec![*mass], *hbar, *c)),
                transform: Some(TransformSection {
                    v: parse_vec3(v)?,
                    a: parse_vec3(a)?,
                }),
                evolution: None,
                ring: None,
                event: None,
                sweep: None,
                tolerances: None,
            },
            output,
        ),
        Command::Contract { v, a, sweep, output } => (
            ScenarioConfig {
                scenario: Scenario::Contract,
                grid: None,
                particle: None,
                transform: Some(TransformSection {
                    v: parse_vec3(v)?,
                    a: parse_vec3(a)?,
                }),
                evolution: None,
                ring: None,
                event: None,
                sweep: sweep_section(sweep)?,
                tolerances: None,
            },
            output,
        ),
    };
    Ok(Some(cfg))
}

fn emit(report: &bargmann_core::report::PhaseReport, output: &OutputArgs) -> Result<(), String> {
    let text = match output.format {
        Format::Json => report.to_json_string(),
        Format::Csv => report.to_csv_string(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    if cli.list_scenarios {
        for s in Scenario::ALL {
            println!("{:<14} {}", s.name(), s.summary());
        }
        return Ok(true);
    }
    let command = cli
        .command
        .ok_or_else(|| "no command given; try --list-scenarios or --help".to_string())?;

    let (config, output) = match &command {
        Command::Run { config, output } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            (ScenarioConfig::parse(&text).map_err(|e| e.to_string())?, output)
        }
        other => {
            let (cfg, output) = build_config(other)?.expect("non-run command");
            (cfg, output)
        }
    };

    let report = run_scenario(&config)?;
    emit(&report, output)?;
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
