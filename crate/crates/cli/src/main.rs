//! `resotunnel`: spectra, resonance sweeps, singular points and the singular
//! locus of symmetric double barriers, as CSV and JSON.

mod commands;
mod csv;
mod error;
mod scenario;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use resotunnel::validation::Mutation;
use resotunnel::ConstantSet;

use crate::error::CliError;
use crate::scenario::{Scenario, SignArg, StructureKind};

#[derive(Parser, Debug)]
#[command(name = "resotunnel", version, about = "Resonant tunneling through complex-potential double barriers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// T2, R2, A and D over an energy grid.
    Spectrum,
    /// Resonant T2, R2, A over a grid of the imaginary potential.
    ResSweep,
    /// Imaginary potential and energy of the transmission singularity (JSON).
    Singularity,
    /// Singular locus V0R(V0I) of the double delta barrier.
    Locus,
    /// Singularity cubic over a V0I grid.
    Cubic,
    /// Compare closed forms against the transfer-matrix solver (JSON).
    OracleCheck {
        /// Corrupt the closed-form D to confirm the check can fail.
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON scenario file; flags override its fields.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    structure: Option<StructureKind>,
    /// Barrier width, nm.
    #[arg(long, global = true, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Well width, nm.
    #[arg(long, global = true, allow_negative_numbers = true)]
    w: Option<f64>,
    /// Real barrier height, eV.
    #[arg(long, global = true, allow_negative_numbers = true)]
    u0r: Option<f64>,
    /// Imaginary barrier height, eV.
    #[arg(long, global = true, allow_negative_numbers = true)]
    u0i: Option<f64>,
    /// Real delta strength, nm·eV.
    #[arg(long, global = true, allow_negative_numbers = true)]
    v0r: Option<f64>,
    /// Imaginary delta strength, nm·eV.
    #[arg(long, global = true, allow_negative_numbers = true)]
    v0i: Option<f64>,
    /// Effective mass in units of the electron rest mass (default 0.067).
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// Fundamental constants behind ħ²/2m0 (default codata).
    #[arg(long, global = true, value_parser = parse_constants)]
    constants: Option<ConstantSet>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Fixed energy, eV (cubic).
    #[arg(long, global = true, allow_negative_numbers = true)]
    energy: Option<f64>,
    /// Start of the imaginary-potential axis.
    #[arg(long, global = true, allow_negative_numbers = true)]
    imin: Option<f64>,
    /// End of the imaginary-potential axis.
    #[arg(long, global = true, allow_negative_numbers = true)]
    imax: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Log-spaced sweep axis.
    #[arg(long, global = true)]
    log_axis: bool,
    /// Locus branch index.
    #[arg(long, global = true)]
    branch: Option<u32>,
    /// Barrier or well locus.
    #[arg(long, global = true, value_enum)]
    sign: Option<SignArg>,
    /// Resonance index, 0 = lowest.
    #[arg(long, global = true)]
    index: Option<usize>,
    #[arg(long, global = true)]
    draws: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<String>,
}

fn parse_constants(s: &str) -> Result<ConstantSet, String> {
    s.parse().map_err(|e: resotunnel::TunnelError| e.to_string())
}

impl Common {
    fn scenario(&self) -> Result<Scenario, CliError> {
        let base = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default(),
        };
        let flags = Scenario {
            structure: self.structure,
            b: self.b,
            w: self.w,
            u0r: self.u0r,
            u0i: self.u0i,
            v0r: self.v0r,
            v0i: self.v0i,
            mass: self.mass,
            constants: self.constants,
            emin: self.emin,
            emax: self.emax,
            energy: self.energy,
            imin: self.imin,
            imax: self.imax,
            points: self.points,
            log_axis: self.log_axis.then_some(true),
            branch: self.branch,
            sign: self.sign,
            index: self.index,
            draws: self.draws,
            seed: self.seed,
            out: self.out.clone(),
        };
        Ok(base.overlay(&flags))
    }
}

fn emit(sc: &Scenario, text: &str) -> Result<(), CliError> {
    match &sc.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let sc = cli.common.scenario()?;
    let result = match &cli.command {
        Command::Spectrum => commands::spectrum(&sc),
        Command::ResSweep => commands::res_sweep(&sc),
        Command::Locus => commands::locus(&sc),
        Command::Cubic => commands::cubic(&sc),
        Command::Singularity => match commands::singularity(&sc) {
            Ok(text) => Ok(text),
            Err(e) => {
                // solver errors still produce a JSON document
                if !matches!(e, CliError::Usage(_)) {
                    emit(&sc, &commands::error_json(&e))?;
                }
                return Err(e);
            }
        },
        Command::OracleCheck { inject_sign_flip } => {
            let mutation = if *inject_sign_flip { Mutation::FlipVSign } else { Mutation::None };
            let (text, pass) = commands::oracle_check_report(&sc, mutation)?;
            emit(&sc, &text)?;
            return if pass { Ok(()) } else { Err(CliError::OracleFailed) };
        }
    }?;
    emit(&sc, &result)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("resotunnel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
