use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use tunnel_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(err) => {
            let _ = out.flush();
            eprintln!("tunnel: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
