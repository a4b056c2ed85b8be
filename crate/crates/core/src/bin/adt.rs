use std::process::ExitCode;

fn main() -> ExitCode {
    adt_core::cli::main()
}
