use clap::Parser;

use ringlock::cli::{run, Cli};

fn main() {
    let out = run(Cli::parse());
    if out.is_error() {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    std::process::exit(out.exit_code);
}
