use std::process::ExitCode;

fn main() -> ExitCode {
    lrc_avail::cli::main()
}
