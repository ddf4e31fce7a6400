mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uecsm_core::report::Tolerances;
use uecsm_core::tracetests::DEFAULT_TOL;
use uecsm_core::{Error, Result, C64};

#[derive(Debug, Parser)]
#[command(name = "uecsm", version, about = "Decide whether a matrix is unitarily equivalent to a complex symmetric matrix")]
struct Cli {
    /// Tolerance for every criterion.
    #[arg(long, global = true, env = "UECSM_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the oracle restarts and for constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(flatten)]
    overrides: ToleranceOverrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ToleranceOverrides {
    #[arg(id = "tol_uecsm_verdict", long = "tol-uecsm-verdict", global = true, value_name = "TOL")]
    uecsm_verdict: Option<f64>,
    #[arg(id = "tol_transpose_equivalence", long = "tol-transpose-equivalence", global = true, value_name = "TOL")]
    transpose_equivalence: Option<f64>,
    #[arg(id = "tol_wat", long = "tol-wat", global = true, value_name = "TOL")]
    wat: Option<f64>,
    #[arg(id = "tol_sat", long = "tol-sat", global = true, value_name = "TOL")]
    sat: Option<f64>,
    #[arg(id = "tol_lsat", long = "tol-lsat", global = true, value_name = "TOL")]
    lsat: Option<f64>,
    #[arg(id = "tol_det_criterion_3", long = "tol-det-criterion-3", global = true, value_name = "TOL")]
    det_criterion_3: Option<f64>,
    /// Witness threshold of the oracle (default 1e-6).
    #[arg(id = "tol_oracle", long = "tol-oracle", global = true, value_name = "TOL")]
    oracle: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every applicable criterion on one matrix file.
    Test {
        file: PathBuf,
        /// Also search for a symmetrizing unitary.
        #[arg(long)]
        oracle: bool,
    },
    /// Classify a 4x4 strictly upper-triangular matrix from its six entries.
    ClassifyNilpotent {
        /// a,b,c,d,e,f; each entry is `re` or `re:im`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_params)]
        params: Params,
    },
    /// Build Q D Q^-1 for a random Q in SU(k, m) and write it to a file.
    Construct {
        /// Cone sizes k,m of the Hermitian form.
        #[arg(long, value_parser = parse_signature)]
        sig: (usize, usize),
        /// Distinct diagonal entries, `re` or `re:im` each (default -1,0,1,2).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_list)]
        diag: Option<ComplexList>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test every `.json` file of a directory.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Clone)]
struct Params([C64; 6]);

#[derive(Debug, Clone)]
struct ComplexList(Vec<C64>);

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let number = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let z = match s.split_once(':') {
        Some((re, im)) => C64::new(number(re)?, number(im)?),
        None => C64::new(number(s)?, 0.0),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_complex_list(s: &str) -> std::result::Result<ComplexList, String> {
    s.split(',').map(parse_complex).collect::<std::result::Result<_, _>>().map(ComplexList)
}

fn parse_params(s: &str) -> std::result::Result<Params, String> {
    let list = parse_complex_list(s)?.0;
    let array: [C64; 6] = list.try_into().map_err(|v: Vec<C64>| format!("expected 6 entries, got {}", v.len()))?;
    Ok(Params(array))
}

fn parse_signature(s: &str) -> std::result::Result<(usize, usize), String> {
    let (k, m) = s.split_once(',').ok_or("expected k,m")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(k)?, parse(m)?))
}

impl Cli {
    fn tolerances(&self) -> Result<Tolerances> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Precondition("--tol must be positive".into()));
        }
        let mut tols = Tolerances::uniform(self.tol);
        let o = &self.overrides;
        for (name, value) in [
            ("uecsm_verdict", o.uecsm_verdict),
            ("transpose_equivalence", o.transpose_equivalence),
            ("wat", o.wat),
            ("sat", o.sat),
            ("lsat", o.lsat),
            ("det_criterion_3", o.det_criterion_3),
            ("oracle", o.oracle),
        ] {
            if let Some(tol) = value {
                tols.set(name, tol)?;
            }
        }
        Ok(tols)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    ExitCode::from(code)
}
