use std::process::ExitCode;

fn main() -> ExitCode {
    xychain::cli::main_with_args(std::env::args_os())
}
