use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use su2mub_cli::basis_file::Construction;
use su2mub_cli::{cmd_gen, cmd_suite, cmd_verify, table, CliError, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "su2mub",
    version,
    about = "Generate and verify mutually unbiased bases from the {J^2, U_r} scheme"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a basis collection for dimension d = 2j+1.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, value_enum)]
        construction: Construction,
        /// Output path; JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check orthonormality and pairwise unbiasedness of a basis file.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Also write the pairwise overlap table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the j = 1/2 and j = 1 worked examples.
    Table,
    /// Run every identity and MUB check for k = 2..=kmax.
    Suite {
        #[arg(long, default_value_t = 7)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Gen {
            dim,
            r,
            construction,
            out,
            tol,
        } => cmd_gen(dim, r, construction, out.as_deref(), tol),
        Command::Verify {
            file,
            tol,
            json,
            csv,
        } => cmd_verify(&file, &VerifyOptions { tol, json, csv }),
        Command::Table => {
            print!("{}", table::render_tables()?);
            Ok(0)
        }
        Command::Suite {
            kmax,
            tol,
            json,
            inject_fault,
        } => cmd_suite(kmax, tol, json, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("su2mub: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
