use std::process::exit;

use clap::error::ErrorKind;
use clap::Parser;
use weylcrit_cli::{run, Cli, CmdError};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            exit(2);
        }
        Err(CmdError::Args(msg)) => {
            eprintln!("error: {msg}");
            exit(3);
        }
    }
}
