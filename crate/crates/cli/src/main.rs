use clap::{Parser, Subcommand};
use loomalg_cli::{format_document, parse, render_text, run, RunOptions, Severity};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "loomalg", version, about = "Exact checks for iterated loop algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every check in a command file.
    Run {
        file: PathBuf,
        /// Verification window radii, e.g. `4` or `4,2`.
        #[arg(long = "box", value_delimiter = ',', allow_negative_numbers = true)]
        window: Option<Vec<i64>>,
        #[arg(long, default_value_t = loomalg_core::typing::DEFAULT_SEED)]
        seed: u64,
        /// Stop at the first failing declaration or check.
        #[arg(long)]
        fail_fast: bool,
        /// Write the JSON report here (`-` for stdout) instead of text.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a command file in canonical layout.
    Fmt { file: PathBuf },
}

fn load(path: &Path) -> Result<(loomalg_cli::Document, String), ExitCode> {
    let src = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(2)
    })?;
    match parse(&src) {
        Ok((doc, warnings)) => {
            for w in warnings {
                eprintln!("{}:{w}", path.display());
            }
            Ok((doc, src))
        }
        Err(diags) => {
            for d in &diags {
                eprintln!("{}:{d}", path.display());
            }
            debug_assert!(diags.iter().any(|d| d.severity == Severity::Error));
            Err(ExitCode::from(2))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Fmt { file } => match load(&file) {
            Ok((doc, _)) => {
                print!("{}", format_document(&doc));
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Cmd::Run { file, window, seed, fail_fast, json } => {
            let doc = match load(&file) {
                Ok((doc, _)) => doc,
                Err(code) => return code,
            };
            let report = run(&doc, &RunOptions { seed, window, fail_fast });
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            match json {
                Some(p) if p.as_os_str() == "-" => print!("{text}"),
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("{}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", render_text(&report));
                }
                None => print!("{}", render_text(&report)),
            }
            if report["ok"].as_bool() == Some(true) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
