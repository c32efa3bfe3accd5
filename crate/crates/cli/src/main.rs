use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let outcome = packetvision_cli::run(std::env::args_os());
    if outcome.exit_code == 0 {
        println!("{}", outcome.summary.trim_end());
    } else {
        eprintln!("{}", outcome.summary.trim_end());
    }
    ExitCode::from(outcome.exit_code as u8)
}
