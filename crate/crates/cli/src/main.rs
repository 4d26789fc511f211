use clap::Parser;
use eulersum_cli::{run, Cli, EXIT_FAIL, EXIT_USAGE};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = run(&cli, argv).unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        EXIT_FAIL
    });
    std::process::exit(code);
}
