use std::io;
use std::process::ExitCode;

use clap::Parser;
use entfilter_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version also arrive here, on stdout.
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out, &mut io::stderr()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("entfilter: {f}");
            ExitCode::from(f.code)
        }
    }
}
