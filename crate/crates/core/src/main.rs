use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = irrbin::cli::run_from(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(code as u8)
}
