use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use xychain_cli::{configure_threads, run, Cli, THREADS_VAR};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not usage errors
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let threads = std::env::var(THREADS_VAR).ok();
    let result = configure_threads(threads.as_deref()).and_then(|()| {
        let mut stdout = io::stdout().lock();
        let r = run(&cli, &mut stdout, &mut io::stderr());
        stdout.flush()?;
        r
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
