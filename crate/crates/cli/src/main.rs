use clap::Parser;
use diatomic_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = diatomic_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
