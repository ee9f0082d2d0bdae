use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = frieze_cli::Cli::parse();
    std::process::ExitCode::from(frieze_cli::run(cli))
}
