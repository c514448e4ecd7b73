mod args;
mod commands;
mod error;
mod figures;

use clap::Parser;

use args::{Cli, Command};
use commands::extract::Mode;
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Extract(a) => commands::extract::run(a, Mode::Extract),
        Command::Rsd(a) => commands::rsd::run(a),
        Command::Compare(a) => commands::compare::run(a),
        Command::Plot(a) => commands::extract::run(a, Mode::Plot),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
