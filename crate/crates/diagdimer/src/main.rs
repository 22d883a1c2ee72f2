use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diagdimer::commands::{self, SampleArgs};
use diagdimer::io::{read_json, read_region, to_pretty, CoveringJson};
use diagdimer::render::RenderOptions;
use diagdimer::CliError;
use diagdimer_core::sampler::Kernel;

#[derive(Parser)]
#[command(name = "diagdimer", version, about = "Dimer coverings with diagonal impurities")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build G, H and H⊥ from a region file and summarise them.
    Build { region: PathBuf },
    /// List every covering of G (small regions only).
    Enumerate {
        region: PathBuf,
        /// Per-edge impurity counts instead of the covering list.
        #[arg(long)]
        histogram: bool,
    },
    /// Exact impurity counts and probabilities.
    Prob { region: PathBuf },
    /// Local moves.
    Moves {
        #[command(subcommand)]
        action: MovesAction,
    },
    /// Run the Markov chain and report impurity frequencies.
    Sample {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        burn_in: u64,
        #[arg(long, default_value_t = 1)]
        every: u64,
        #[arg(long, default_value_t = 1)]
        chains: u64,
        #[arg(long, value_enum, default_value_t = KernelArg::Metropolis)]
        kernel: KernelArg,
        /// Directory for SVG snapshots of the first chain.
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Snapshot every this many samples.
        #[arg(long, default_value_t = 1)]
        frame_every: u64,
        region: PathBuf,
        /// Starting covering; defaults to one built from a spanning tree.
        m0: Option<PathBuf>,
    },
    /// Draw a covering file or a sample report as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        slits: bool,
        #[arg(long)]
        forests: bool,
        /// Which final covering of a sample report to draw.
        #[arg(long, default_value_t = 0)]
        chain: usize,
    },
    /// Check the known counts of small regions.
    Selftest,
}

#[derive(Subcommand)]
enum MovesAction {
    /// Moves applicable to a covering.
    List { covering: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Lazy,
    Metropolis,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Lazy => Kernel::Lazy,
            KernelArg::Metropolis => Kernel::Metropolis,
        }
    }
}

fn execute(command: Command) -> Result<(String, bool), CliError> {
    let text = match command {
        Command::Build { region } => to_pretty(&commands::build_summary(&read_region(&region)?)?),
        Command::Enumerate { region, histogram } => {
            let region = read_region(&region)?;
            if histogram {
                to_pretty(&commands::histogram(&region)?)
            } else {
                to_pretty(&commands::enumerate(&region)?)
            }
        }
        Command::Prob { region } => to_pretty(&commands::prob_report(&read_region(&region)?)?),
        Command::Moves { action: MovesAction::List { covering } } => {
            to_pretty(&commands::moves_list(&read_json::<CoveringJson>(&covering)?)?)
        }
        Command::Sample { seed, steps, burn_in, every, chains, kernel, frames, frame_every, region, m0 } => {
            let region = read_region(&region)?;
            let m0 = m0.map(|p| read_json::<CoveringJson>(&p)).transpose()?;
            let args = SampleArgs { seed, steps, burn_in, every, chains, kernel: kernel.into(), frames, frame_every };
            to_pretty(&commands::sample(&region, m0.as_ref(), &args)?)
        }
        Command::Render { input, slits, forests, chain } => {
            commands::render(&input, chain, RenderOptions { slits, forests })?
        }
        Command::Selftest => {
            let checks = commands::selftest()?;
            let mut text = String::new();
            for c in &checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{verdict} {}: {}\n", c.name, c.detail));
            }
            let ok = checks.iter().all(|c| c.passed);
            return Ok((text, ok));
        }
    };
    Ok((text, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(cli.command).and_then(|(text, ok)| {
        match &cli.out {
            Some(path) => fs::write(path, &text).map_err(|source| CliError::Write { path: path.clone(), source })?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
