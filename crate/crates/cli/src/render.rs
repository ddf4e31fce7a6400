//! Plain-text rendering of reports.

use std::fmt::Write as _;
use std::path::Path;

use uecsm_core::constructors::TripleObstruction;
use uecsm_core::nilpotent4::{NilpotentParams, PsiClosedForms};
use uecsm_core::oracle::OracleStatus;
use uecsm_core::report::{exit_code, Report, SpectralStatus};
use uecsm_core::{Verdict, C64};

use crate::commands::{BatchEntry, BatchSummary};

fn complex(z: C64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

fn pass(v: bool) -> &'static str {
    if v {
        "pass"
    } else {
        "fail"
    }
}

fn verdict_line(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "  {:<22} {}  max residual {:.3e}  (tol {:.1e})", v.criterion, pass(v.pass), v.max_residual(), v.tol);
}

pub fn report(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (n = {})", r.label.as_deref().unwrap_or("<unlabeled>"), r.dimension);
    let status = match r.uecsm {
        Some(true) => "UECSM",
        Some(false) => "not UECSM",
        None => "undecided",
    };
    match &r.decided_by {
        Some(by) => {
            let _ = writeln!(out, "status: {status} (decided by {by})");
        }
        None => {
            let _ = writeln!(out, "status: {status}");
        }
    }
    for v in r.verdicts.values() {
        verdict_line(&mut out, v);
    }
    for (name, why) in &r.skipped {
        let _ = writeln!(out, "  {name:<22} skipped: {why}");
    }
    if r.spectral_status == SpectralStatus::Degenerate {
        let _ = writeln!(out, "spectrum: degenerate");
    }
    if let Some(o) = &r.oracle {
        let status = match o.status {
            OracleStatus::Witness => "witness",
            OracleStatus::Inconclusive => "inconclusive",
        };
        let _ = writeln!(
            out,
            "oracle: {status}, residual {:.3e} after {} restarts / {} iterations",
            o.residual, o.restarts_used, o.iterations
        );
    }
    if r.conflicts.is_empty() {
        out.push_str("conflicts: none\n");
    } else {
        for c in &r.conflicts {
            let _ = writeln!(out, "CONFLICT: {}", c.detail);
        }
    }
    out
}

pub fn nilpotent(
    satisfied: &[u8],
    uecsm: bool,
    phase_obstructed: bool,
    forms: &PsiClosedForms,
    p: &NilpotentParams,
    psi: &Verdict,
) -> String {
    let mut out = String::new();
    let conditions: Vec<String> = satisfied.iter().map(u8::to_string).collect();
    let _ = writeln!(
        out,
        "conditions satisfied: {}",
        if conditions.is_empty() { "none".to_string() } else { conditions.join(", ") }
    );
    let _ = writeln!(out, "classification: {}", if uecsm { "UECSM" } else { "not UECSM" });
    if phase_obstructed {
        out.push_str("note: |a| = |f| and |b| = |e| but ae != bf\n");
    }
    let _ = writeln!(out, "closed forms:");
    let _ = writeln!(out, "  psi4 = {}", complex(forms.psi4));
    let _ = writeln!(out, "  psi7 = {}", complex(forms.psi7));
    let zero = |z: C64| z == C64::new(0.0, 0.0);
    if zero(p.d) {
        let _ = writeln!(out, "  psi1 = {} (d = 0)", complex(forms.psi1_d0));
        let _ = writeln!(out, "  psi6 = {} (d = 0)", complex(forms.psi6_d0));
    }
    if zero(p.a) {
        let _ = writeln!(out, "  psi1 = {} (a = 0)", complex(forms.psi1_a0));
        let _ = writeln!(out, "  psi6 = {} (a = 0)", complex(forms.psi6_a0));
    }
    verdict_line(&mut out, psi);
    if psi.pass != uecsm {
        out.push_str("CONFLICT: classification and psi test disagree\n");
    }
    out
}

pub fn construction(kind: &str, sig: (usize, usize), seed: u64, path: &Path, attempts: usize, obstruction: &[TripleObstruction]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "wrote {} ({kind}, SU({},{}), seed {seed}, {attempts} draws)", path.display(), sig.0, sig.1);
    for o in obstruction {
        let (i, j, k) = o.triple;
        let _ = writeln!(out, "  triple ({i},{j},{k}) = {}  {}", complex(o.value), if o.real_flag { "real" } else { "NOT real" });
    }
    out
}

pub fn batch(entries: &[BatchEntry], summary: &BatchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<32} {:>3} {:<10} {:>4} {:>9} {:>10}", "file", "n", "status", "exit", "conflicts", "ms");
    for e in entries {
        match &e.report {
            Some(r) => {
                let status = match r.uecsm {
                    Some(true) => "UECSM",
                    Some(false) => "not UECSM",
                    None => "undecided",
                };
                let _ = writeln!(
                    out,
                    "{:<32} {:>3} {:<10} {:>4} {:>9} {:>10.1}",
                    e.file,
                    r.dimension,
                    status,
                    exit_code(r),
                    r.conflicts.len(),
                    e.millis
                );
            }
            None => {
                let _ = writeln!(out, "{:<32} error: {}", e.file, e.error.as_deref().unwrap_or("unknown"));
            }
        }
    }
    let _ = writeln!(
        out,
        "{} files: {} UECSM, {} not UECSM, {} undecided, {} errors, {} with conflicts ({:.1} ms)",
        summary.files, summary.uecsm, summary.not_uecsm, summary.undecided, summary.errors, summary.conflicts, summary.millis
    );
    out
}
