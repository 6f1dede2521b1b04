use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ncft_cli::{run, Args, CliError};

fn main() -> ExitCode {
    let args = Args::parse();
    let result = args.config().and_then(|cfg| {
        let report = run(&cfg, args.exec())?;
        if cfg.output.is_none() {
            std::io::stdout().write_all(report.text.as_bytes())?;
        }
        match report.failure {
            Some(msg) => Err(CliError::Numerical(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncft-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
