use clap::Parser;

fn main() {
    let cli = snlab::cli::Cli::parse();
    std::process::exit(snlab::cli::run(cli));
}
