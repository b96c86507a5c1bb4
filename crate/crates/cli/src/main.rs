use clap::Parser;

fn main() {
    let cli = passpoints_cli::Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = passpoints_cli::run(cli, &mut stdout.lock()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
