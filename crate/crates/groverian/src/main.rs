use clap::Parser;

use groverian::cli::{run, Cli};

fn main() {
    // clap exits with code 2 on usage errors, matching the CLI contract.
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
