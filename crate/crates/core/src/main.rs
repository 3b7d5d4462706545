use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = hilbseries::cli::dispatch(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.stderr.trim_end());
    }
    ExitCode::from(outcome.exit_code as u8)
}
