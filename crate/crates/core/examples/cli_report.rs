//! Running a CLI command from code and reading its JSON.

use clap::Parser;
use cp2q::cli::{run, Cli};

fn main() {
    let cli = Cli::parse_from([
        "cp2q",
        "cohomology",
        "--q",
        "1/2",
        "--nmax",
        "2",
        "--no-cache",
    ]);
    let out = run(&cli).unwrap();
    println!("exit code {}", out.exit_code());
    print!("{}", out.to_json());
}
