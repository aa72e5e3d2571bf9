use std::process::ExitCode;

fn main() -> ExitCode {
    samspin_cli::run()
}
