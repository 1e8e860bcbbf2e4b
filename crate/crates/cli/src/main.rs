use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use opinv_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(done) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(done.text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(exit::INTERNAL);
            }
            ExitCode::from(done.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
