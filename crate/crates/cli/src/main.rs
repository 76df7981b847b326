use clap::Parser;

fn main() {
    let cli = zpow_cli::Cli::parse();
    match zpow_cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
