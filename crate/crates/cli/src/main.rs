//! `photonmodes` command-line driver.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use config::{Command, RunConfig};

const USAGE: &str = "\
usage: photonmodes <command> [--key value ...] [--config FILE]

commands:
  couplings   sample h, htilde and its gradient on a geometric grid
  decayfit    fit a power-law decay exponent and check it against a band
  anisotropy  sample a polarized coupling along a ray and run tail diagnostics
  fock        spectral, commutator and scalar-evolution checks on a box lattice
  planck      continuum and finite-box free energy densities

Values come from defaults, then the config file (`key = value` lines),
then PHOTONMODES_<KEY> environment variables, then flags.

exit codes: 0 ok, 2 configuration error, 3 quadrature budget exceeded,
            4 fitted exponent outside band, 5 check failed";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(first) = args.first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    if matches!(first.as_str(), "help" | "--help" | "-h") {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let command: Command = match first.parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cfg = match RunConfig::resolve(command, &args[1..], std::env::vars()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = commands::run(&cfg, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
