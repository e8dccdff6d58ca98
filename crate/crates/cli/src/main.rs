use std::process::ExitCode;

use clap::Parser;
use tailindex_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli, &mut std::io::stderr());
    ExitCode::from(code as u8)
}
