//! Runs every applicable criterion on one matrix and cross-checks them.
//!
//! For `n <= 4` the trace criterion `uecsm_verdict` is the reference. Other
//! criteria that decide UECSM on their domain must agree with it; any
//! disagreement is listed as a conflict and never resolved automatically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angletests::{det_criterion_3, lsat, sat, wat};
use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::oracle::{find_symmetrizer_with, OracleConfig, OracleStatus};
use crate::spectra::{eigensystem, DEFAULT_DISTINCT_TOL};
use crate::tracetests::{transpose_equivalence, uecsm_verdict, DEFAULT_TOL};
use crate::verdict::Verdict;

pub const REFERENCE: &str = "uecsm_verdict";

/// Criterion names accepted by [`Tolerances::set`].
pub const CRITERIA: [&str; 7] =
    ["uecsm_verdict", "transpose_equivalence", "wat", "sat", "lsat", "det_criterion_3", "oracle"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub default: f64,
    pub overrides: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(DEFAULT_TOL)
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { default: tol, overrides: BTreeMap::new() }
    }

    pub fn set(&mut self, criterion: &str, tol: f64) -> Result<()> {
        if !CRITERIA.contains(&criterion) {
            return Err(Error::Precondition(format!("unknown criterion {criterion:?}")));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Precondition(format!("tolerance for {criterion} must be positive")));
        }
        self.overrides.insert(criterion.to_string(), tol);
        Ok(())
    }

    pub fn get(&self, criterion: &str) -> f64 {
        self.overrides.get(criterion).copied().unwrap_or(self.default)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisOptions {
    pub tolerances: Tolerances,
    /// Run the oracle with this configuration. Its `witness_tol` is replaced
    /// by a `"oracle"` tolerance override when one is set.
    pub oracle: Option<OracleConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralStatus {
    Ok,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub status: OracleStatus,
    pub residual: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub witness_tol: f64,
}

/// Two criteria that disagree about UECSM.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub reference: String,
    pub criterion: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub label: Option<String>,
    pub dimension: usize,
    /// The decided UECSM status, `None` when no applicable criterion decides.
    pub uecsm: Option<bool>,
    /// Criterion whose verdict determines `uecsm`.
    pub decided_by: Option<String>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub spectral_status: SpectralStatus,
    pub spectral_detail: Option<String>,
    pub oracle: Option<OracleSummary>,
    pub conflicts: Vec<Conflict>,
    /// Criteria that could not run, with the reason.
    pub skipped: BTreeMap<String, String>,
}

/// 0 = UECSM, 1 = not UECSM, 2 = conflict or undecided.
pub fn exit_code(report: &Report) -> i32 {
    if !report.conflicts.is_empty() {
        return 2;
    }
    match report.uecsm {
        Some(true) => 0,
        Some(false) => 1,
        None => 2,
    }
}

pub fn analyze(t: &CMatrix, label: Option<String>, options: &AnalysisOptions) -> Result<Report> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = t.n();
    let tols = &options.tolerances;
    let mut verdicts = BTreeMap::new();
    let mut skipped = BTreeMap::new();

    if n <= 4 {
        verdicts.insert(REFERENCE.to_string(), uecsm_verdict(t, tols.get(REFERENCE))?);
        let name = "transpose_equivalence";
        verdicts.insert(name.to_string(), transpose_equivalence(t, tols.get(name))?);
    } else {
        for name in [REFERENCE, "transpose_equivalence"] {
            skipped.insert(name.to_string(), Error::UnsupportedDimension(n).to_string());
        }
    }

    let (spectral_status, spectral_detail) = match eigensystem(t, DEFAULT_DISTINCT_TOL) {
        Ok(s) => {
            for report in [wat(&s, tols.get("wat")), sat(&s, tols.get("sat")), lsat(&s, tols.get("lsat"))] {
                verdicts.insert(report.verdict.criterion.clone(), report.verdict);
            }
            if n == 3 {
                match det_criterion_3(&s, tols.get("det_criterion_3")) {
                    Ok(v) => {
                        verdicts.insert(v.criterion.clone(), v);
                    }
                    Err(e) => {
                        skipped.insert("det_criterion_3".into(), e.to_string());
                    }
                }
            }
            (SpectralStatus::Ok, None)
        }
        Err(e @ (Error::DegenerateSpectrum { .. } | Error::IllConditionedSpectrum { .. } | Error::NoConvergence(_))) => {
            for name in ["wat", "sat", "lsat"] {
                skipped.insert(name.into(), e.to_string());
            }
            (SpectralStatus::Degenerate, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };

    let oracle = match &options.oracle {
        Some(config) => {
            let config = OracleConfig { witness_tol: tols.overrides.get("oracle").copied().unwrap_or(config.witness_tol), ..*config };
            match find_symmetrizer_with(t, &config) {
                Ok(r) => Some(OracleSummary {
                    status: r.status,
                    residual: r.residual,
                    iterations: r.iterations,
                    restarts_used: r.restarts_used,
                    witness_tol: config.witness_tol,
                }),
                Err(e) => {
                    skipped.insert("oracle".into(), e.to_string());
                    None
                }
            }
        }
        None => None,
    };

    let decided_by = if verdicts.contains_key(REFERENCE) {
        Some(REFERENCE)
    } else if verdicts.contains_key("sat") {
        Some("sat")
    } else {
        None
    };
    let uecsm = decided_by.map(|name| verdicts[name].pass);
    let conflicts = match (decided_by, uecsm) {
        (Some(reference), Some(status)) => find_conflicts(reference, status, n, &verdicts, oracle.as_ref()),
        _ => Vec::new(),
    };
    Ok(Report {
        label,
        dimension: n,
        uecsm,
        decided_by: decided_by.map(str::to_string),
        verdicts,
        spectral_status,
        spectral_detail,
        oracle,
        conflicts,
        skipped,
    })
}

fn find_conflicts(
    reference: &str,
    status: bool,
    n: usize,
    verdicts: &BTreeMap<String, Verdict>,
    oracle: Option<&OracleSummary>,
) -> Vec<Conflict> {
    let word = |pass: bool| if pass { "pass" } else { "fail" };
    let mut conflicts = Vec::new();
    let mut push = |criterion: &str, detail: String| {
        conflicts.push(Conflict { reference: reference.to_string(), criterion: criterion.to_string(), detail });
    };
    // criteria equivalent to UECSM on their domain
    let mut exact = vec!["transpose_equivalence", "sat"];
    if n <= 3 {
        exact.extend(["wat", "det_criterion_3"]);
    }
    for name in exact {
        if name == reference {
            continue;
        }
        if let Some(v) = verdicts.get(name) {
            if v.pass != status {
                push(name, format!("{name} {} but {reference} {}", word(v.pass), word(status)));
            }
        }
    }
    // WAT is necessary in every dimension
    if n > 3 && status {
        if let Some(v) = verdicts.get("wat").filter(|v| !v.pass) {
            push("wat", format!("wat fail but {reference} pass (max deviation {:.3e})", v.max_residual()));
        }
    }
    if let Some(o) = oracle {
        if o.status == OracleStatus::Witness && !status {
            push("oracle", format!("oracle witness with residual {:.3e} but {reference} fail", o.residual));
        }
    }
    conflicts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn run(t: &CMatrix) -> Report {
        analyze(t, None, &AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn named_fixtures_have_expected_status_and_no_conflicts() {
        for (label, t, uecsm) in fixtures::named() {
            let r = run(&t);
            assert_eq!(r.uecsm, Some(uecsm), "{label}");
            assert!(r.conflicts.is_empty(), "{label}: {:?}", r.conflicts);
            assert_eq!(exit_code(&r), if uecsm { 0 } else { 1 });
        }
    }

    #[test]
    fn balayan_report_has_wat_pass_sat_fail() {
        let r = run(&fixtures::balayan());
        assert!(r.verdicts["wat"].pass);
        assert!(!r.verdicts["sat"].pass);
        assert!(r.verdicts["lsat"].pass);
        assert_eq!(r.spectral_status, SpectralStatus::Ok);
    }

    #[test]
    fn nilpotent_is_degenerate_but_decided() {
        let r = run(&fixtures::stump(6.0));
        assert_eq!(r.spectral_status, SpectralStatus::Degenerate);
        assert!(r.skipped.contains_key("sat"));
        assert_eq!(r.uecsm, Some(true));
    }

    #[test]
    fn large_dimension_uses_sat_or_gives_up() {
        let d: Vec<_> = (0..5).map(|k| crate::matcore::C64::new(k as f64, 0.0)).collect();
        let r = run(&CMatrix::diag(&d));
        assert_eq!(r.decided_by.as_deref(), Some("sat"));
        assert_eq!(exit_code(&r), 0);
        let r = run(&CMatrix::zeros(5));
        assert_eq!(r.uecsm, None);
        assert_eq!(exit_code(&r), 2);
    }

    #[test]
    fn tight_override_creates_conflict() {
        let mut options = AnalysisOptions::default();
        // a strict sat tolerance cannot fail a symmetric matrix, but a loose
        // reference tolerance can pass a non-UECSM one
        options.tolerances.set(REFERENCE, 10.0).unwrap();
        let r = analyze(&fixtures::balayan(), None, &options).unwrap();
        assert_eq!(r.uecsm, Some(true));
        assert!(r.conflicts.iter().any(|c| c.criterion == "sat"));
        assert_eq!(exit_code(&r), 2);
    }

    #[test]
    fn exit_code_is_a_function_of_the_report() {
        let mut r = run(&fixtures::t1());
        assert_eq!(exit_code(&r), 0);
        r.uecsm = Some(false);
        assert_eq!(exit_code(&r), 1);
        r.conflicts.push(Conflict { reference: "a".into(), criterion: "b".into(), detail: String::new() });
        assert_eq!(exit_code(&r), 2);
        let replayed: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(exit_code(&replayed), 2);
    }

    #[test]
    fn oracle_summary_is_attached() {
        let options = AnalysisOptions { oracle: Some(OracleConfig::default()), ..Default::default() };
        let r = analyze(&fixtures::symmetric3(), Some("s".into()), &options).unwrap();
        assert_eq!(r.oracle.as_ref().unwrap().status, OracleStatus::Witness);
        assert!(r.conflicts.is_empty());
    }

    #[test]
    fn unknown_override_is_rejected() {
        let mut t = Tolerances::default();
        assert!(t.set("nope", 1e-3).is_err());
        assert!(t.set("sat", -1.0).is_err());
        t.set("sat", 1e-3).unwrap();
        assert_eq!(t.get("sat"), 1e-3);
        assert_eq!(t.get("wat"), DEFAULT_TOL);
    }
}
