use clap::Parser;
use perco_cli::{execute, Cli};

fn main() {
    match execute(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("{h}");
            }
            std::process::exit(e.exit_code());
        }
    }
}
