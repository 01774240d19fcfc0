use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use whittaker_lab::cli::config::{ModuleInput, RawConfig, RunConfig, Task, TypeInput};
use whittaker_lab::cli::{init_thread_pool, run};

/// Exact-arithmetic checks for Whittaker modules over the Witt algebra.
#[derive(Parser)]
#[command(name = "whittaker-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of two vector fields, cross-checked against the Weyl commutator.
    Bracket(Flags),
    /// Image of a vector field (--x) or polynomial (--poly) under the smash-product map.
    Phi(Flags),
    /// Homomorphism and truncation-rank checks for the smash-product map.
    VerifyIso(Flags),
    /// Whittaker vectors, k_m table, free basis and decomposition round trips.
    Whittaker(Flags),
    /// Decomposes poly ⊗ v_component in the free basis.
    Decompose(Flags),
    /// Searches for the smallest m whose ω operators annihilate the module.
    Omega(Flags),
    /// Twisted de Rham complex: d² = 0, exactness, images; --a 0,... gives the defects.
    Complex(Flags),
    /// Weighting functor: representation law and component dimensions.
    Weighting(Flags),
    /// Runs every acceptance criterion.
    All(Flags),
    /// Runs the task named in the config file.
    Run(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// TOML (or .json) file mirroring the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Whittaker type, e.g. 1,1/2
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// trivial, natural, exterior:k or a JSON object
    #[arg(long)]
    module: Option<String>,
    /// Truncation degree D.
    #[arg(long)]
    deg: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Weight grid: lo:hi or r1,r2;s1,s2;...
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    m_max: Option<u32>,
    /// Vector field, e.g. "t1^2*d1 + 3*d2"
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Polynomial, e.g. "3/2*t1^2*t2 - t3"
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// 1-based basis vector of V for decompose.
    #[arg(long)]
    component: Option<usize>,
}

impl Flags {
    fn into_raw(self, task: Option<Task>) -> (Option<PathBuf>, RawConfig) {
        let raw = RawConfig {
            task,
            n: self.n,
            a: self.a.map(TypeInput::Text),
            module: self.module.map(ModuleInput::Text),
            deg: self.deg,
            out: self.out,
            grid: self.grid,
            trials: self.trials,
            seed: self.seed,
            m_max: self.m_max,
            x: self.x,
            y: self.y,
            poly: self.poly,
            component: self.component,
        };
        (self.config, raw)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    let (task, flags) = match cli.command {
        Command::Bracket(f) => (Some(Task::Bracket), f),
        Command::Phi(f) => (Some(Task::Phi), f),
        Command::VerifyIso(f) => (Some(Task::VerifyIso), f),
        Command::Whittaker(f) => (Some(Task::Whittaker), f),
        Command::Decompose(f) => (Some(Task::Decompose), f),
        Command::Omega(f) => (Some(Task::Omega), f),
        Command::Complex(f) => (Some(Task::Complex), f),
        Command::Weighting(f) => (Some(Task::Weighting), f),
        Command::All(f) => (Some(Task::All), f),
        Command::Run(f) => (None, f),
    };
    let (path, raw) = flags.into_raw(task);
    let outcome = RunConfig::load(path.as_deref(), raw).and_then(|config| {
        let report = run(&config)?;
        let json = report.to_json();
        match &config.out {
            Some(out) => {
                std::fs::write(out, &json)?;
                let verdict = if report.passed { "PASS" } else { "FAIL" };
                println!("{}: {verdict} ({})", config.task, out.display());
            }
            None => print!("{json}"),
        }
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
