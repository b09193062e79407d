use std::io::{stderr, stdout};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FGT_LOG", "warn")).init();
    let code = fingroup::cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
