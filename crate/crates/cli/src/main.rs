use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use strongconvex_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = run(&cli);
    if out.code == 0 || out.code == 3 {
        let _ = std::io::stdout().write_all(out.text.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.text.as_bytes());
    }
    ExitCode::from(out.code as u8)
}
