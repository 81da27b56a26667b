use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ptcubic_cli::run(std::env::args_os()))
}
