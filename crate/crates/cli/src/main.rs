use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use treach_core::io::{self, Command, SampleGrid};
use treach_core::{Error, MaxPlus};

/// Backward reachable sets of max-plus linear systems with disturbances.
#[derive(Parser, Debug)]
#[command(name = "treach", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print per-stage generator counts to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// A⁻¹(target): states mapped into the target by A.
    Ainv {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// γ(target): states that some admissible control pushes into the target.
    Gamma {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// φ(target): states that stay in the target under every disturbance.
    Phi {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Υ(target) = A⁻¹ ∘ γ ∘ φ (target): the one-step backward reachable set.
    Upsilon {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Membership grid of a 2-D result file (or of Υ of a problem file) as CSV.
    Sample {
        file: PathBuf,
        #[command(flatten)]
        output: Output,

        /// x1min x1max x2min x2max
        #[arg(long = "box", num_args = 4, allow_negative_numbers = true, required = true,
              value_names = ["X1MIN", "X1MAX", "X2MIN", "X2MAX"])]
        bounds: Vec<String>,

        /// Points per axis.
        #[arg(long, default_value_t = 11)]
        res: usize,
    },
}

fn run(cmd: Cmd) -> treach_core::Result<(String, Output, Vec<String>)> {
    let (command, file, output) = match cmd {
        Cmd::Ainv { file, output } => (Command::AInv, file, output),
        Cmd::Gamma { file, output } => (Command::Gamma, file, output),
        Cmd::Phi { file, output } => (Command::Phi, file, output),
        Cmd::Upsilon { file, output } => (Command::Upsilon, file, output),
        Cmd::Sample {
            file,
            output,
            bounds,
            res,
        } => {
            let bounds = bounds
                .iter()
                .map(|b| b.parse::<MaxPlus>())
                .collect::<treach_core::Result<Vec<_>>>()
                .map_err(|e| Error::Parse {
                    location: "--box".into(),
                    message: e.to_string(),
                })?;
            let grid = SampleGrid::new(bounds.try_into().expect("clap enforces four values"), res)?;
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Parse {
                location: file.display().to_string(),
                message: e.to_string(),
            })?;
            let csv = io::sample(&io::sample_source(&text)?, &grid)?;
            return Ok((csv, output, Vec::new()));
        }
    };
    let problem = io::parse_problem(&file)?;
    let result = io::run_command(command, &problem)?;
    let trace = result
        .provenance
        .iter()
        .map(|s| {
            let detail = s
                .detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default();
            format!("{}: {} span, {} conv{detail}", s.stage, s.span, s.conv)
        })
        .collect();
    Ok((result.to_json(), output, trace))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, output, trace)) => {
            if output.trace {
                for line in trace {
                    eprintln!("trace: {line}");
                }
            }
            let written = match &output.out {
                Some(path) => std::fs::write(path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
