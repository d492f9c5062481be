use std::path::PathBuf;
use std::process::ExitCode;

use caustics::run::{error_record, load_config, run};
use caustics::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "caustics",
    version,
    about = "Semiclassical kernels, caustics and Stokes regions for spin-coupled systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its data files.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// heavy | rotor
    #[arg(long)]
    model: Option<String>,
    /// husimi | imf | caustics | spin-evolution | oracle-compare | domain-d
    #[arg(long)]
    mode: Option<String>,
    /// Kick strength of the rotor.
    #[arg(long = "K")]
    kick: Option<String>,
    /// Im F cutoff of the domain D.
    #[arg(long)]
    cutoff: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// Output directory.
    #[arg(long, short)]
    output: Option<String>,
    /// Any other config key, as key=value. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> ExitCode {
    let Command::Run(args) = Cli::parse().command;
    if let Ok(n) = std::env::var("CAUSTICS_THREADS") {
        let threads = match n.parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => return fail(Error::Config(format!("CAUSTICS_THREADS must be a positive integer, got `{n}`"))),
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            return fail(Error::Config(e.to_string()));
        }
    }
    let mut overrides = Vec::new();
    for (k, v) in [
        ("model", args.model),
        ("mode", args.mode),
        ("kick", args.kick),
        ("cutoff", args.cutoff),
        ("hbar", args.hbar),
        ("steps", args.steps),
        ("output", args.output),
    ] {
        if let Some(v) = v {
            overrides.push((k.to_string(), v));
        }
    }
    for kv in args.set {
        match kv.split_once('=') {
            Some((k, v)) => overrides.push((k.to_string(), v.to_string())),
            None => return fail(Error::Config(format!("--set expects key=value, got `{kv}`"))),
        }
    }
    match load_config(args.config.as_deref(), &overrides).and_then(|c| run(&c)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("{}", error_record(&e));
    ExitCode::from(e.exit_code() as u8)
}
