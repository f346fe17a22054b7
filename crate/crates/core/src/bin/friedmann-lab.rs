use std::io::Write;
use std::process::ExitCode;

use friedmann_lab::cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter(cli::LOG_ENV)).init();
    let outcome = cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
