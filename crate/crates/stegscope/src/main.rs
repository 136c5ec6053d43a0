use clap::Parser;

fn main() {
    let cli = stegscope::cli::Cli::parse();
    std::process::exit(stegscope::cli::run(cli));
}
