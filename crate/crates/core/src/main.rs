use std::process::exit;

fn main() {
    exit(rotamix::cli::run_command(std::env::args_os()));
}
