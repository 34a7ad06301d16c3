use clap::Parser;

use biphoton::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    std::process::exit(run(&config));
}
