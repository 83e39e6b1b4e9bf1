use clap::Parser;

fn main() {
    let cli = expsphere::cli::Cli::parse();
    std::process::exit(expsphere::cli::run(cli));
}
