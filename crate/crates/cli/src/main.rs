use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use codedshift::system::parse_spec;
use codedshift_cli::{run, Command};

/// Analysis of coded shift spaces given by generator sets, families,
/// half-synchronized data or line covers.
#[derive(Debug, Parser)]
#[command(name = "codedshift", version)]
struct Cli {
    /// System file (JSON).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Truncation level for generator families.
    #[arg(long, global = true)]
    level: Option<usize>,

    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COD_LOG", "warn")).init();
    // Usage errors share exit status 1 with other failures; 2 means "unknown".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = cli
        .spec
        .as_ref()
        .map(parse_spec)
        .transpose()
        .map_err(anyhow::Error::from)
        .and_then(|spec| run(&cli.command, spec.as_ref(), cli.level));
    match outcome {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
