use std::path::PathBuf;
use std::process::ExitCode;

use cherednik_cli::{run, RunOptions};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cherednik",
    version,
    about = "Exact rational Cherednik algebra workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses of a session config.
    Run {
        config: PathBuf,
        /// Run only these analyses (id or kind); repeatable or comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Report directory (default: the config's `output`, else `reports/` beside it).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest |W|³ allowed for restricted-algebra work.
        #[arg(long)]
        max_dim: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Command::Run {
        config,
        only,
        out,
        seed,
        max_dim,
    } = cli.command;
    let opts = RunOptions {
        only,
        out,
        seed,
        max_dim,
    };
    let summary = match run(&config, &opts) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    for r in &summary.results {
        match &r.error {
            None => println!("ok      {:<20} {}", r.id, r.file.display()),
            Some(e) => println!("FAILED  {:<20} {e}", r.id),
        }
    }
    println!("summary {}", summary.out_dir.join("summary.md").display());
    if let Some(first) = summary.failed().next() {
        eprintln!(
            "error: {} failed: {}",
            first.id,
            first.error.as_deref().unwrap_or_default()
        );
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
