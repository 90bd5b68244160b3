use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cluster_cli::{
    grow, pipeline13, protocol_stats, retry, sequences, verify, Format, GrowMode, Report, Result,
    RunConfig, DEFAULT_THETA_SWEEP,
};

#[derive(Debug, Parser)]
#[command(name = "cluster", version, about = "Perfect cluster states from imperfect global entanglers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of measured middle qubits per protocol (odd).
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// Phase error, or a comma-separated list of them.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    theta: Vec<f64>,
    /// Monte-Carlo trials (runs, for pipeline13).
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long, global = true, default_value_t = cluster_statevector::DEFAULT_MAX_QUBITS)]
    max_qubits: usize,
    /// Protocol applications allowed per pipeline run.
    #[arg(long, global = true, default_value_t = 10_000)]
    retry_cap: usize,
    /// Swap the entangler for the wrong gate, as a negative control.
    #[arg(long, global = true, hide = true)]
    corrupt_gate: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Successful outcome sequences from enumeration and from the rules.
    Sequences,
    /// Success probability: closed form, enumeration and large-n form.
    ProtocolStats,
    /// Success probability after repeated failures on one end pair.
    Retry {
        #[arg(long, default_value_t = 400)]
        max_failures: usize,
    },
    /// Monte-Carlo growth against the cost formulas.
    Grow {
        #[arg(value_enum)]
        mode: Dimension,
        /// Target length (1d) or lattice side (2d).
        #[arg(long)]
        size: Option<usize>,
    },
    /// The thirteen-qubit 3-node preparation.
    Pipeline13,
    /// Full check suite; exit status 0 iff every check passes.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dimension {
    #[value(name = "1d")]
    One,
    #[value(name = "2d")]
    Two,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl Cli {
    fn config(&self) -> RunConfig {
        let sweep = matches!(
            self.command,
            Command::ProtocolStats | Command::Pipeline13 | Command::Verify
        );
        let thetas = if !self.theta.is_empty() {
            self.theta.clone()
        } else if sweep {
            DEFAULT_THETA_SWEEP.to_vec()
        } else {
            vec![0.3]
        };
        let trials = self.trials.unwrap_or(match self.command {
            Command::Grow { mode: Dimension::One, .. } => 10_000,
            Command::Grow { mode: Dimension::Two, .. } => 1000,
            _ => 1,
        });
        RunConfig {
            n: self.n,
            thetas,
            trials,
            seed: self.seed,
            max_qubits: self.max_qubits,
            retry_cap: self.retry_cap,
            corrupt_gate: self.corrupt_gate,
        }
    }

    fn run(&self) -> Result<Report> {
        let cfg = self.config();
        match self.command {
            Command::Sequences => sequences(&cfg),
            Command::ProtocolStats => protocol_stats(&cfg),
            Command::Retry { max_failures } => retry(&cfg, max_failures),
            Command::Grow { mode, size } => grow(
                &cfg,
                match mode {
                    Dimension::One => GrowMode::Linear(size.unwrap_or(30)),
                    Dimension::Two => GrowMode::Lattice(size.unwrap_or(3)),
                },
            ),
            Command::Pipeline13 => pipeline13(&cfg),
            Command::Verify => verify(&cfg),
        }
    }

    fn format(&self) -> Format {
        match self.format {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }

    fn emit(&self, report: &Report) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                report.write(self.format(), &mut w)?;
                w.flush()?;
            }
            None => report.write(self.format(), io::stdout().lock())?,
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = cli.run().and_then(|report| {
        cli.emit(&report)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            for note in &report.notes {
                eprintln!("{note}");
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
