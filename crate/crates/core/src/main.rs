use clap::Parser;
use compdiff::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &report) {
                    eprintln!("failed to write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{report}");
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
