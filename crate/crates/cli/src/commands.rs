use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use uecsm_core::constructors::{construct_lsat, default_diagonal, generate_wat_not_sat, Signature, TripleObstruction};
use uecsm_core::nilpotent4::{classify, psi_closed_forms, NilpotentParams, PsiClosedForms};
use uecsm_core::oracle::OracleConfig;
use uecsm_core::report::{analyze, exit_code, AnalysisOptions, Report};
use uecsm_core::tracetests::uecsm_verdict;
use uecsm_core::{Error, MatrixDocument, Result, Verdict, C64};

use crate::{render, Cli, Command};

pub fn run(cli: &Cli) -> Result<u8> {
    let tolerances = cli.tolerances()?;
    let options = |oracle: bool| AnalysisOptions {
        tolerances: tolerances.clone(),
        oracle: oracle.then(|| OracleConfig { seed: cli.seed, ..OracleConfig::default() }),
    };
    match &cli.command {
        Command::Test { file, oracle } => test(file, &options(*oracle), cli.json),
        Command::ClassifyNilpotent { params } => classify_nilpotent(&params.0, cli.tol, cli.json),
        Command::Construct { sig, diag, out } => {
            let diag = diag.as_ref().map(|d| d.0.clone()).unwrap_or_else(default_diagonal);
            construct(*sig, &diag, cli.seed, out, cli.json)
        }
        Command::Batch { dir, oracle } => batch(dir, &options(*oracle), cli.json),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&(serde_json::to_string_pretty(value).expect("reports serialize") + "\n"));
}

fn analyze_file(path: &Path, options: &AnalysisOptions) -> Result<Report> {
    let doc = MatrixDocument::read(path)?;
    let label = doc.label.or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()));
    analyze(&doc.matrix, label, options)
}

fn test(file: &Path, options: &AnalysisOptions, json: bool) -> Result<u8> {
    let report = analyze_file(file, options)?;
    if json {
        print_json(&report);
    } else {
        emit(&render::report(&report));
    }
    Ok(exit_code(&report) as u8)
}

#[derive(Debug, Serialize)]
struct NilpotentReport {
    params: [C64; 6],
    tol: f64,
    satisfied: Vec<u8>,
    uecsm: bool,
    phase_obstructed: bool,
    closed_forms: PsiClosedForms,
    psi: Verdict,
    /// Classification and the Psi test disagree.
    conflict: bool,
}

fn classify_nilpotent(params: &[C64; 6], tol: f64, json: bool) -> Result<u8> {
    let p = NilpotentParams::from_slice(params);
    let cls = classify(&p, tol);
    let psi = uecsm_verdict(&p.build_matrix(), tol)?;
    let report = NilpotentReport {
        params: *params,
        tol,
        satisfied: cls.satisfied.iter().copied().collect(),
        uecsm: cls.uecsm,
        phase_obstructed: cls.phase_obstructed,
        closed_forms: psi_closed_forms(&p),
        conflict: cls.uecsm != psi.pass,
        psi,
    };
    if json {
        print_json(&report);
    } else {
        emit(&render::nilpotent(&report.satisfied, report.uecsm, report.phase_obstructed, &report.closed_forms, &p, &report.psi));
    }
    Ok(match (report.conflict, report.uecsm) {
        (true, _) => 2,
        (false, true) => 0,
        (false, false) => 1,
    })
}

#[derive(Debug, Serialize)]
struct ConstructionReport {
    signature: (usize, usize),
    seed: u64,
    kind: &'static str,
    out: PathBuf,
    diagonal: Vec<C64>,
    attempts: usize,
    all_real: bool,
    obstruction: Vec<TripleObstruction>,
}

fn construct(sig: (usize, usize), diag: &[C64], seed: u64, out: &Path, json: bool) -> Result<u8> {
    let (k, m) = sig;
    let signature = Signature::from_cones(k, m)?;
    let (kind, built) = if k.min(m) >= 2 {
        ("wat_not_sat", generate_wat_not_sat(seed, signature, diag)?)
    } else {
        ("uecsm", construct_lsat(seed, signature, diag)?)
    };
    let label = format!("Q D Q^-1, Q in SU({k},{m}), seed {seed}");
    MatrixDocument::new(Some(label), built.t.clone()).write(out)?;
    let report = ConstructionReport {
        signature: sig,
        seed,
        kind,
        out: out.to_path_buf(),
        diagonal: built.diagonal.clone(),
        attempts: built.attempts,
        all_real: built.all_real(),
        obstruction: built.obstruction.clone(),
    };
    if json {
        print_json(&report);
    } else {
        emit(&render::construction(kind, sig, seed, out, built.attempts, &built.obstruction));
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct BatchEntry {
    pub file: String,
    pub report: Option<Report>,
    pub error: Option<String>,
    pub exit_code: Option<i32>,
    pub millis: f64,
}

#[derive(Debug, Default, Serialize)]
pub struct BatchSummary {
    pub files: usize,
    pub uecsm: usize,
    pub not_uecsm: usize,
    pub undecided: usize,
    pub errors: usize,
    pub conflicts: usize,
    pub millis: f64,
}

#[derive(Debug, Serialize)]
struct BatchOutput {
    entries: Vec<BatchEntry>,
    summary: BatchSummary,
}

fn batch(dir: &Path, options: &AnalysisOptions, json: bool) -> Result<u8> {
    let start = Instant::now();
    let listing = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = listing
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let entries: Vec<BatchEntry> = files
        .par_iter()
        .map(|path| {
            let t0 = Instant::now();
            let result = analyze_file(path, options);
            let millis = t0.elapsed().as_secs_f64() * 1e3;
            let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            match result {
                Ok(report) => BatchEntry { file, exit_code: Some(exit_code(&report)), report: Some(report), error: None, millis },
                Err(e) => BatchEntry { file, report: None, error: Some(e.to_string()), exit_code: None, millis },
            }
        })
        .collect();
    let mut summary = BatchSummary { files: entries.len(), ..Default::default() };
    for entry in &entries {
        match &entry.report {
            None => summary.errors += 1,
            Some(r) => {
                summary.conflicts += usize::from(!r.conflicts.is_empty());
                match r.uecsm {
                    Some(true) => summary.uecsm += 1,
                    Some(false) => summary.not_uecsm += 1,
                    None => summary.undecided += 1,
                }
            }
        }
    }
    summary.millis = start.elapsed().as_secs_f64() * 1e3;
    let any_conflict = summary.conflicts > 0;
    if json {
        print_json(&BatchOutput { entries, summary });
    } else {
        emit(&render::batch(&entries, &summary));
    }
    Ok(if any_conflict { 2 } else { 0 })
}
