use std::process::ExitCode;

use clap::Parser;

mod cmd;
mod output;

#[derive(Parser)]
#[command(
    name = "shotnoise",
    version,
    about = "Request-trace analysis, synthesis and LRU evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: cmd::Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cmd::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
