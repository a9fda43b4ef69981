use std::process::ExitCode;

use clap::Parser;
use noma_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    match noma_cli::run(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("noma-aloha: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
