//! qcw: reproducible experiment runner. Every algorithm and protocol is a
//! subcommand drawn from the experiment registry; identical seeds produce
//! byte-identical JSON output.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Arg, ArgAction, Command};

use config::{CliError, OutputFormat, RunConfig};
use experiments::{registry, Registry};

fn common_args(cmd: Command) -> Command {
    cmd.arg(Arg::new("n").long("n").value_parser(clap::value_parser!(usize)))
        .arg(Arg::new("n1").long("n1").value_parser(clap::value_parser!(usize)))
        .arg(Arg::new("n2").long("n2").value_parser(clap::value_parser!(usize)))
        .arg(
            Arg::new("eps")
                .long("eps")
                .value_parser(clap::value_parser!(f64))
                .help("error budget in (0, 0.5]"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_parser(clap::value_parser!(u64))
                .help("master seed (default 0; QCW_SEED overrides the default)"),
        )
        .arg(
            Arg::new("trials")
                .long("trials")
                .value_parser(clap::value_parser!(usize)),
        )
        .arg(Arg::new("marked").long("marked").help("marked bitstring for grover"))
        .arg(
            Arg::new("oracle")
                .long("oracle")
                .value_parser(clap::value_parser!(PathBuf))
                .help("truth-table file: one `x -> f(x)` line per input"),
        )
        .arg(
            Arg::new("circuit")
                .long("circuit")
                .value_parser(clap::value_parser!(PathBuf))
                .help("circuit file (JSON for sat, gate list for simulate)"),
        )
        .arg(Arg::new("input").long("input").help("basis input bitstring for simulate"))
        .arg(Arg::new("a").long("a").value_parser(clap::value_parser!(u64)))
        .arg(Arg::new("N").long("N").value_parser(clap::value_parser!(u64)))
        .arg(
            Arg::new("format")
                .long("format")
                .default_value("json")
                .help("json, csv, or table"),
        )
        .arg(
            Arg::new("timings")
                .long("timings")
                .action(ArgAction::SetTrue)
                .help("include wall_time in reports (breaks byte determinism)"),
        )
}

fn build_command(registry: &Registry) -> Command {
    let mut cmd = Command::new("qcw")
        .about("Quantum complexity workbench: seeded, machine-readable experiment runs")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for exp in registry.iter() {
        cmd = cmd.subcommand(common_args(Command::new(exp.name()).about(exp.about())));
    }
    cmd
}

fn config_from_matches(name: &str, m: &clap::ArgMatches) -> Result<RunConfig, CliError> {
    let env_seed = std::env::var("QCW_SEED")
        .ok()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|e| CliError::Config(format!("QCW_SEED: {e}")))
        })
        .transpose()?;
    let cfg = RunConfig {
        experiment: name.to_string(),
        n: m.get_one::<usize>("n").copied(),
        n1: m.get_one::<usize>("n1").copied(),
        n2: m.get_one::<usize>("n2").copied(),
        eps: m.get_one::<f64>("eps").copied().unwrap_or(0.05),
        seed: m
            .get_one::<u64>("seed")
            .copied()
            .or(env_seed)
            .unwrap_or(0),
        trials: m.get_one::<usize>("trials").copied().unwrap_or(1),
        marked: m.get_one::<String>("marked").cloned(),
        oracle_path: m.get_one::<PathBuf>("oracle").cloned(),
        circuit_path: m.get_one::<PathBuf>("circuit").cloned(),
        input: m.get_one::<String>("input").cloned(),
        base: m.get_one::<u64>("a").copied(),
        modulus: m.get_one::<u64>("N").copied(),
        format: OutputFormat::parse(m.get_one::<String>("format").expect("defaulted"))?,
        timings: m.get_flag("timings"),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(cfg: &RunConfig, registry: &Registry) -> Result<String, CliError> {
    let exp = registry
        .get(&cfg.experiment)
        .ok_or_else(|| CliError::Config(format!("unknown experiment {}", cfg.experiment)))?;
    let mut reports = Vec::new();
    for trial in 0..cfg.trials {
        let started = Instant::now();
        let mut trial_reports = exp.run_trial(cfg, trial)?;
        let elapsed = started.elapsed().as_secs_f64();
        for r in &mut trial_reports {
            r.wall_time = cfg.timings.then_some(elapsed);
        }
        reports.extend(trial_reports);
    }
    let agg = output::aggregate(&cfg.experiment, &reports);
    Ok(output::render(&reports, &agg, cfg.format))
}

fn main() {
    let registry = registry();
    let matches = build_command(&registry).get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let result = config_from_matches(name, sub).and_then(|cfg| run(&cfg, &registry));
    match result {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
