use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(nimhoff::cli::run(std::env::args()) as u8)
}
