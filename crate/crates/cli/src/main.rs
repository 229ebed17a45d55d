use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GMG_LOG", "warn")).init();
    gmg_cli::main_with(std::env::args_os())
}
