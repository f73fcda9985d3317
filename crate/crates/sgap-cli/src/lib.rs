//! Scenario-driven command line around [`sgap_core`]: configuration files,
//! CSV emission, and the built-in verification battery.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod verify;

use clap::Parser;

/// Parse arguments, dispatch, and map every outcome to an exit code:
/// 0 success, 1 usage, 2 configuration, 3 numeric/I-O, 4 verification.
pub fn run_cli() -> i32 {
    let cli = match commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
