// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ktlab::experiments::{
    cmd_distinguish, cmd_kt_table, cmd_owf_experiment, cmd_prg_experiment, emit, Settings, EXIT_CONFIG, EXIT_OK,
};

#[derive(Parser)]
#[command(name = "ktlab", version, about = "Exact experiments on time-bounded Kolmogorov complexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the kt table for every n-bit string as CSV
    KtTable(Flags),
    /// Inverter-to-heuristic reduction accounting
    Owf(Flags),
    /// Density and entropy of the conditional generator
    Prg(Flags),
    /// Distinguisher census over every truncation
    Distinguish(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    n: Option<usize>,
    /// Step bound: an integer, `4n` or `n^2`
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    gamma: Option<u32>,
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long = "alpha-prime")]
    alpha_prime: Option<u32>,
    /// Approximation constant of the heuristic
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    owf: Option<String>,
    /// perfect, deny-all, deny-random[:p] or deny-z:<hex>
    #[arg(long)]
    inverter: Option<String>,
    /// exact-kt, const:<w>, length or perturbed-kt:<frac>
    #[arg(long)]
    heuristic: Option<String>,
    /// exact or sampled
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seed draws in sampled mode
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long = "gl-k")]
    gl_k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plot data as CSV (x,y,series)
    #[arg(long)]
    plot: Option<PathBuf>,
    /// JSON file with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(self) -> ktlab::Result<Settings> {
        let flags = Settings {
            n: self.n,
            t: self.t,
            gamma: self.gamma,
            delta: self.delta,
            alpha_prime: self.alpha_prime,
            d: self.d,
            owf: self.owf,
            inverter: self.inverter,
            heuristic: self.heuristic,
            mode: self.mode,
            seed: self.seed,
            samples: self.samples,
            gl_k: self.gl_k,
            out: self.out,
            plot: self.plot,
        };
        match &self.config {
            Some(path) => Ok(flags.over(Settings::from_json_file(path)?)),
            None => Ok(flags),
        }
    }
}

fn dispatch(command: Command) -> ktlab::Result<i32> {
    let (settings, report) = match command {
        Command::KtTable(f) => {
            let s = f.settings()?;
            let (n, t, out) = s.kt_table_inputs()?;
            cmd_kt_table(n, t, &out)?;
            return Ok(EXIT_OK);
        }
        Command::Owf(f) => {
            let s = f.settings()?;
            let (n, inverter, t, seed) = s.owf_inputs()?;
            let r = cmd_owf_experiment(n, &inverter, t, seed)?;
            (s, r)
        }
        Command::Prg(f) => {
            let s = f.settings()?;
            let r = cmd_prg_experiment(&s.prg_args()?)?;
            (s, r)
        }
        Command::Distinguish(f) => {
            let s = f.settings()?;
            let r = cmd_distinguish(&s.distinguish_args()?)?;
            (s, r)
        }
    };
    emit(&report, &settings)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { EXIT_OK as u8 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ktlab: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
