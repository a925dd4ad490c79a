use clap::Parser;
use mhsec_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("mhsec: {e}");
        std::process::exit(e.exit_code());
    }
}
