mod args;
mod reports;
mod run;

use std::process::ExitCode;

const MOBY_URL: &str = "http://tuvalu.santafe.edu/~aaronc/powerlaws/data/words.txt";

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    run::run(std::env::args_os())
}
