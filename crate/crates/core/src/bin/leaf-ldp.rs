use clap::Parser;
use leaf_ldp::cli::{execute, exit_code, Cli, RunConfig};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result =
        RunConfig::resolve(&cli).and_then(|cfg| execute(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("leaf-ldp: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
