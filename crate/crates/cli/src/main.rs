use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use synergodic_cli::{write_atomically, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let result = cli.execute().and_then(|report| {
        match cli.output_path()? {
            Some(path) => write_atomically(&path, &report.output)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(report.output.as_bytes());
            }
        }
        Ok(report.code)
    });
    let code = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
