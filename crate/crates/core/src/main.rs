use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = touching_lines::cli::run_from_args(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr());
    ExitCode::from(code as u8)
}
