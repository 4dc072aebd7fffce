//! Command implementations behind the `su2mub` binary.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 precondition or usage
//! error, 3 I/O or parse error.

pub mod basis_file;
pub mod table;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use su2mub::mub::{
    basis_br, gauss_mub_set, is_prime, mub_set_prime, spherical_basis, LabeledBasis,
};
use su2mub::su2::Spin;
use su2mub::verify::{
    mub_report, overlap_moduli, run_suite, MubReport, PairClass, SuiteConfig, DEFAULT_R_GRID,
};
use thiserror::Error;

use crate::basis_file::{BasisFile, Construction, Generator};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Io(_) | Self::Parse(_) => 3,
        }
    }
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;

/// Builds the bases of one construction for dimension `dim`.
pub fn generate(
    dim: usize,
    r: f64,
    construction: Construction,
    tol: f64,
) -> Result<BasisFile, CliError> {
    let spin = Spin::from_dim(dim).map_err(|e| CliError::Usage(e.to_string()))?;
    let needs_prime = matches!(construction, Construction::Weyl | Construction::Gauss);
    if needs_prime && !is_prime(dim) {
        return Err(CliError::Usage(format!(
            "--dim {dim} is not prime: the {construction} construction gives 2j+2 MUBs only when 2j+1 is prime"
        )));
    }
    let bases: Vec<LabeledBasis> = match construction {
        Construction::Fourier => vec![spherical_basis(spin), basis_br(spin, r)],
        Construction::Weyl => {
            mub_set_prime(spin, r, tol).map_err(|e| CliError::Usage(e.to_string()))?
        }
        Construction::Gauss => {
            if dim.is_multiple_of(2) {
                return Err(CliError::Usage(format!(
                    "--dim {dim} is even: the gauss construction needs an odd prime dimension"
                )));
            }
            gauss_mub_set(spin).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let r = if construction == Construction::Gauss {
        0.0
    } else {
        r
    };
    Ok(BasisFile::from_bases(
        Generator {
            j: spin.j(),
            r,
            construction,
        },
        &bases,
    ))
}

pub fn cmd_gen(
    dim: usize,
    r: f64,
    construction: Construction,
    out: Option<&Path>,
    tol: f64,
) -> Result<u8, CliError> {
    let file = generate(dim, r, construction, tol)?;
    match out {
        Some(path) => {
            file.save(path)?;
            eprintln!(
                "wrote {} bases of dimension {dim} to {}",
                file.bases.len(),
                path.display()
            );
        }
        None => println!("{}", file.to_json()),
    }
    Ok(EXIT_PASS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub json: bool,
    pub csv: Option<PathBuf>,
}

pub fn render_report(report: &MubReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimension {}  tolerance {:e}", report.d, report.tol);
    for (i, (label, ortho)) in report.labels.iter().zip(&report.orthonormal).enumerate() {
        let _ = writeln!(
            s,
            "  [{i}] {label:<28} orthonormal residual {:.3e} {}",
            ortho.residual,
            if ortho.passed { "ok" } else { "FAIL" }
        );
    }
    for p in &report.pairs {
        let class = match p.class {
            PairClass::Unbiased => "unbiased",
            PairClass::EqualUpToPhase => "equal_up_to_phase",
            PairClass::Neither => "neither",
        };
        let _ = writeln!(
            s,
            "  [{}] vs [{}]  {class:<18} residual {:.3e}",
            p.a, p.b, p.residual
        );
    }
    let _ = writeln!(
        s,
        "max deviation {:.3e}; {}",
        report.max_deviation,
        if report.all_unbiased() {
            "PASS"
        } else {
            "FAIL"
        }
    );
    s
}

/// `basisA,vecA,basisB,vecB,abs_overlap`, rows ordered by `(A, vecA, B, vecB)`.
pub fn overlap_csv(bases: &[LabeledBasis]) -> Result<String, CliError> {
    let mut s = String::from("basisA,vecA,basisB,vecB,abs_overlap\n");
    for (ia, a) in bases.iter().enumerate() {
        for b in &bases[ia + 1..] {
            let moduli = overlap_moduli(a, b).map_err(|e| CliError::Parse(e.to_string()))?;
            let d = a.dim();
            for (idx, m) in moduli.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "\"{}\",{},\"{}\",{},{m:e}",
                    a.label,
                    idx / d,
                    b.label,
                    idx % d
                );
            }
        }
    }
    Ok(s)
}

pub fn cmd_verify(file: &Path, opts: &VerifyOptions) -> Result<u8, CliError> {
    let bases = BasisFile::load(file)?.to_bases()?;
    let report = mub_report(&bases, opts.tol).map_err(|e| CliError::Parse(e.to_string()))?;
    if opts.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", render_report(&report));
    }
    if let Some(path) = &opts.csv {
        std::fs::write(path, overlap_csv(&bases)?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(if report.all_unbiased() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

#[derive(Debug, Serialize)]
struct SuiteSummary<'a> {
    total: usize,
    failed: usize,
    checks: &'a [su2mub::verify::CheckResult],
}

pub fn cmd_suite(kmax: usize, tol: f64, json: bool, inject_fault: bool) -> Result<u8, CliError> {
    if !(2..=12).contains(&kmax) {
        return Err(CliError::Usage(format!(
            "--kmax must be in 2..=12, got {kmax}"
        )));
    }
    let mut config = SuiteConfig::new(2..=kmax, &DEFAULT_R_GRID, tol);
    config.inject_fault = inject_fault;
    let checks = run_suite(&config);
    let failed = checks.iter().filter(|c| !c.passed).count();
    if json {
        let summary = SuiteSummary {
            total: checks.len(),
            failed,
            checks: &checks,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary serializes")
        );
    } else {
        for c in checks.iter().filter(|c| !c.passed) {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!(
                "FAIL {} [{}] residual {:e} > {:e}",
                c.name,
                params.join(", "),
                c.residual,
                c.tol
            );
        }
        println!(
            "suite k=2..={kmax}: {} checks, {} passed, {failed} failed",
            checks.len(),
            checks.len() - failed
        );
    }
    Ok(if failed == 0 { EXIT_PASS } else { EXIT_FAIL })
}
