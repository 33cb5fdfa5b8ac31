use std::path::PathBuf;
use std::process::ExitCode;

use balayage_frames::experiments::config::keys_help;
use balayage_frames::experiments::{exit_code, parse_config, run_experiment, ExperimentKind, RunStatus};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "balayage-frames", version, about = "Frame bounds, balayage and short-time Fourier experiments")]
#[command(after_help = keys_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Config file of key=value lines.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the `out` key; default ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed (overrides the `seed` key).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to BF_THREADS, then all cores.
    #[arg(long, env = "BF_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds of jittered lattices for a band-limited space.
    FrameBoundsSweep(Common),
    /// Balayage residual along a nested family of lattices.
    BalayageCurve(Common),
    /// Energy identity and inversion of the short-time Fourier transform.
    StftRoundtrip(Common),
    /// Sampled short-time Fourier energy against its two-sided bounds.
    SemidiscreteCheck(Common),
    /// Gabor frame bounds over lattices or jitter levels.
    GaborSweep(Common),
    /// Recover a band-limited signal from its samples.
    Reconstruct(Common),
}

impl Command {
    fn split(self) -> (ExperimentKind, Common) {
        match self {
            Command::FrameBoundsSweep(c) => (ExperimentKind::FrameBoundsSweep, c),
            Command::BalayageCurve(c) => (ExperimentKind::BalayageCurve, c),
            Command::StftRoundtrip(c) => (ExperimentKind::StftRoundtrip, c),
            Command::SemidiscreteCheck(c) => (ExperimentKind::SemidiscreteCheck, c),
            Command::GaborSweep(c) => (ExperimentKind::GaborSweep, c),
            Command::Reconstruct(c) => (ExperimentKind::Reconstruct, c),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (kind, common) = cli.command.split();

    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.config.display());
            return ExitCode::from(1);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", common.config.display());
            return ExitCode::from(1);
        }
    };
    if cfg.experiment != kind {
        eprintln!("error: config is for {} but the subcommand is {kind}", cfg.experiment);
        return ExitCode::from(1);
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(t) = common.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let out = common.out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));

    let result = run_experiment(&cfg, &out);
    match &result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            if let RunStatus::Unconverged(why) = &report.status {
                for w in why {
                    eprintln!("unconverged: {w}");
                }
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
