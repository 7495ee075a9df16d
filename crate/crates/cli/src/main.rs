use std::process::ExitCode;

fn main() -> ExitCode {
    spinsqueeze::cli::main()
}
