use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(taylor_dtm::cli::run(std::env::args_os()) as u8)
}
