//! Trace-word criteria for unitary equivalence and for UECSM in dimensions
//! three and four.
//!
//! All residuals are computed on `T / ||T||_F`, which is the same as dividing
//! each trace by `||T||_F^deg` for the degree of its word; verdicts are
//! therefore scale invariant and one default tolerance works at any scale.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{commutator, word_trace, CMatrix, Word, C64};
use crate::verdict::Verdict;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Pearcy-Sibirskii words: a complete unitary invariant for 3x3 matrices.
pub const PHI_WORDS: [&str; 7] = ["x", "x^2", "x^3", "yx", "yx^2", "y^2x^2", "yx^2y^2x"];

/// Djokovic's words: a complete unitary invariant for 4x4 matrices.
pub const DJOKOVIC_WORDS: [&str; 20] = [
    "x",
    "x^2",
    "xy",
    "x^3",
    "x^2y",
    "x^4",
    "x^3y",
    "x^2y^2",
    "xyxy",
    "x^3y^2",
    "x^2yx^2y",
    "x^2y^2xy",
    "y^2x^2yx",
    "x^3y^2xy",
    "x^3y^2x^2y",
    "x^3y^3xy",
    "y^3x^3yx",
    "x^3yx^2yxy",
    "x^2y^2xyx^2y",
    "x^3y^3x^2y^2",
];

/// Degrees of the seven Psi traces.
pub const PSI_DEGREES: [u32; 7] = [6, 7, 8, 8, 9, 9, 10];

/// 1-based Djokovic word index whose reversal defect each Psi entry measures.
pub const PSI_WORD_INDEX: [usize; 7] = [12, 14, 15, 16, 18, 19, 20];

fn parse_table(table: &[&str]) -> Vec<Word> {
    table.iter().map(|s| Word::parse(s).expect("static word table is well formed")).collect()
}

pub fn phi_words() -> &'static [Word] {
    static WORDS: OnceLock<Vec<Word>> = OnceLock::new();
    WORDS.get_or_init(|| parse_table(&PHI_WORDS))
}

pub fn djokovic_words() -> &'static [Word] {
    static WORDS: OnceLock<Vec<Word>> = OnceLock::new();
    WORDS.get_or_init(|| parse_table(&DJOKOVIC_WORDS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignatureKind {
    Phi3,
    Djokovic20,
    Psi7,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSignature {
    pub kind: SignatureKind,
    pub values: Vec<C64>,
    pub degrees: Vec<u32>,
}

fn require_dim(t: &CMatrix, n: usize) -> Result<()> {
    if t.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: t.n() });
    }
    Ok(())
}

fn word_signature(kind: SignatureKind, words: &[Word], t: &CMatrix) -> TraceSignature {
    TraceSignature {
        kind,
        values: words.iter().map(|w| word_trace(w, t)).collect(),
        degrees: words.iter().map(Word::degree).collect(),
    }
}

/// `T / ||T||_F`, or `T` itself when it is zero.
pub fn unit_scaled(t: &CMatrix) -> CMatrix {
    let norm = t.frobenius_norm();
    if norm > 0.0 {
        t.scale_real(1.0 / norm)
    } else {
        t.clone()
    }
}

/// `(tr X, tr X^2, tr X^3, tr X*X, tr X*X^2, tr X*^2 X^2, tr X* X^2 X*^2 X)`.
pub fn phi3(t: &CMatrix) -> Result<TraceSignature> {
    require_dim(t, 3)?;
    Ok(word_signature(SignatureKind::Phi3, phi_words(), t))
}

/// The twenty traces `tr w_i(T, T*)` in table order.
pub fn djokovic_signature(t: &CMatrix) -> Result<TraceSignature> {
    require_dim(t, 4)?;
    Ok(word_signature(SignatureKind::Djokovic20, djokovic_words(), t))
}

/// The seven commutator-form traces whose joint vanishing characterizes
/// 4x4 UECSMs. Each is the reversal defect `tr w - tr reverse(w)` of one
/// Djokovic word, up to sign, with the dominant terms cancelled inside the
/// product instead of between two large traces.
pub fn psi7(t: &CMatrix) -> Result<TraceSignature> {
    require_dim(t, 4)?;
    let s = t.adjoint();
    let t2 = t * t;
    let s2 = &s * &s;
    let s3 = &s2 * &s;
    let ts = t * &s;
    let t2s = &t2 * &s;
    let st2 = &s * &t2;
    let products = [
        // T (T T*^2 - T*^2 T) T T*
        &(t * &commutator(t, &s2)) * &ts,
        // T (T^2 T*^2 - T*^2 T^2) T T*
        &(t * &commutator(&t2, &s2)) * &ts,
        // T^2 (T T*^2 - T*^2 T) T^2 T*
        &(&t2 * &commutator(t, &s2)) * &t2s,
        // T (T^2 T*^3 - T*^3 T^2) T T*
        &(t * &commutator(&t2, &s3)) * &ts,
        // T [(T^2 T*)^2 - (T* T^2)^2] T T*
        &(t * &(&(&t2s * &t2s) - &(&st2 * &st2))) * &ts,
        // T^2 T* (T* T - T T*) T* T^2 T*
        &(&(&t2s * &commutator(&s, t)) * &st2) * &s,
        // T^2 (T T*^3 - T*^3 T) T^2 T*^2
        &(&(&t2 * &commutator(t, &s3)) * &t2) * &s2,
    ];
    Ok(TraceSignature {
        kind: SignatureKind::Psi7,
        values: products.iter().map(CMatrix::trace).collect(),
        degrees: PSI_DEGREES.to_vec(),
    })
}

/// Single-trace UECSM test for 3x3 matrices:
/// `tr[T*T (T*T - T T*) T T*] = 0`, normalized by `||T||_F^6`.
pub fn trace_test_3(t: &CMatrix, tol: f64) -> Result<Verdict> {
    require_dim(t, 3)?;
    let u = unit_scaled(t);
    let s = u.adjoint();
    let st = &s * &u;
    let value = (&(&st * &commutator(&s, &u)) * &(&u * &s)).trace();
    Ok(Verdict::from_residuals("trace_test_3", vec![("trace", value.norm())], tol))
}

/// Compares the twenty Djokovic traces of `A` and `B`, each difference
/// normalized by `max(||A||_F, ||B||_F)^deg`.
pub fn unitary_equivalence_4(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<Verdict> {
    signature_comparison("unitary_equivalence_4", a, b, tol)
}

fn signature_comparison(criterion: &str, a: &CMatrix, b: &CMatrix, tol: f64) -> Result<Verdict> {
    let (words, prefix) = match (a.n(), b.n()) {
        (3, 3) => (phi_words(), "phi"),
        (4, 4) => (djokovic_words(), "w"),
        (na, nb) if na != nb => return Err(Error::DimensionMismatch { expected: na, found: nb }),
        (n, _) => return Err(Error::UnsupportedDimension(n)),
    };
    let m = a.frobenius_norm().max(b.frobenius_norm());
    let (sa, sb) = if m > 0.0 { (a.scale_real(1.0 / m), b.scale_real(1.0 / m)) } else { (a.clone(), b.clone()) };
    let residuals = words
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("{prefix}{}", i + 1), (word_trace(w, &sa) - word_trace(w, &sb)).norm()))
        .collect();
    Ok(Verdict::from_residuals(criterion, residuals, tol))
}

/// UECSM decision for `n <= 4`: unconditional for `n <= 2`, the single trace
/// test for `n = 3`, normalized Psi for `n = 4`.
pub fn uecsm_verdict(t: &CMatrix, tol: f64) -> Result<Verdict> {
    match t.n() {
        // every 1x1 and 2x2 matrix is UECSM
        1 | 2 => Ok(Verdict::from_residuals::<&str>("uecsm_trivial", vec![], tol)),
        3 => {
            let mut v = trace_test_3(t, tol)?;
            v.criterion = "uecsm_verdict".into();
            Ok(v)
        }
        4 => {
            let psi = psi7(&unit_scaled(t))?;
            let residuals = psi.values.iter().enumerate().map(|(i, z)| (format!("psi{}", i + 1), z.norm())).collect();
            Ok(Verdict::from_residuals("uecsm_verdict", residuals, tol))
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// UECSM via `T ~ T^t`: compares the complete unitary invariants of `T` and
/// its transpose (Pearcy-Sibirskii for n = 3, Djokovic for n = 4).
pub fn transpose_equivalence(t: &CMatrix, tol: f64) -> Result<Verdict> {
    match t.n() {
        1 | 2 => Ok(Verdict::from_residuals::<&str>("transpose_equivalence", vec![], tol)),
        3 | 4 => signature_comparison("transpose_equivalence", t, &t.transpose(), tol),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tables_have_expected_degrees() {
        let degrees: Vec<u32> = djokovic_words().iter().map(Word::degree).collect();
        assert_eq!(degrees, vec![1, 2, 2, 3, 3, 4, 4, 4, 4, 5, 6, 6, 6, 7, 8, 8, 8, 9, 9, 10]);
        let phi: Vec<u32> = phi_words().iter().map(Word::degree).collect();
        assert_eq!(phi, vec![1, 2, 3, 2, 3, 4, 6]);
        for (k, &i) in PSI_WORD_INDEX.iter().enumerate() {
            assert_eq!(djokovic_words()[i - 1].degree(), PSI_DEGREES[k]);
        }
    }

    #[test]
    fn phi3_of_zero_and_identity() {
        let z = phi3(&CMatrix::zeros(3)).unwrap();
        assert!(z.values.iter().all(|v| *v == c(0.0, 0.0)));
        let id = phi3(&CMatrix::identity(3)).unwrap();
        assert!(id.values.iter().all(|v| *v == c(3.0, 0.0)));
        assert_eq!(id.kind, SignatureKind::Phi3);
    }

    #[test]
    fn djokovic_of_zero_and_identity() {
        let z = djokovic_signature(&CMatrix::zeros(4)).unwrap();
        assert_eq!(z.values.len(), 20);
        assert!(z.values.iter().all(|v| v.norm() == 0.0));
        let id = djokovic_signature(&CMatrix::identity(4)).unwrap();
        assert!(id.values.iter().all(|v| *v == c(4.0, 0.0)));
    }

    #[test]
    fn wrong_dimensions() {
        assert!(matches!(phi3(&CMatrix::identity(4)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(psi7(&CMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(uecsm_verdict(&CMatrix::identity(5), DEFAULT_TOL), Err(Error::UnsupportedDimension(5))));
        assert!(matches!(
            unitary_equivalence_4(&CMatrix::identity(4), &CMatrix::identity(3), DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psi_of_the_two_example_matrices() {
        let p1 = psi7(&fixtures::t1()).unwrap();
        assert!(p1.values.iter().all(|v| v.norm() < 1e-10));
        let p2 = psi7(&fixtures::t2()).unwrap();
        assert!((p2.values[0] - c(-12.0, 0.0)).norm() < 1e-9);
        assert!(p2.values[1..].iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn symmetric_matrices_pass() {
        let v = trace_test_3(&fixtures::symmetric3(), DEFAULT_TOL).unwrap();
        assert!(v.pass && v.max_residual() < 1e-12);
        let v = uecsm_verdict(&fixtures::symmetric4(), DEFAULT_TOL).unwrap();
        assert!(v.pass && v.max_residual() < 1e-12);
        assert!(transpose_equivalence(&fixtures::symmetric4(), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn orthogonal_pair_form_passes_when_a_or_b_vanishes() {
        let lam = c(2.5, -1.0);
        assert!(trace_test_3(&fixtures::orthogonal_pair_form(c(0.0, 0.0), c(1.5, 2.0), lam), DEFAULT_TOL).unwrap().pass);
        assert!(trace_test_3(&fixtures::orthogonal_pair_form(c(-0.7, 1.0), c(0.0, 0.0), lam), DEFAULT_TOL).unwrap().pass);
        assert!(!trace_test_3(&fixtures::orthogonal_pair_form(c(1.0, 0.0), c(1.0, 0.0), lam), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn small_dimensions_always_pass() {
        let t = CMatrix::from_real_rows([[1.0, 5.0], [0.0, 2.0]]);
        assert!(uecsm_verdict(&t, DEFAULT_TOL).unwrap().pass);
        assert!(uecsm_verdict(&CMatrix::identity(1), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn zero_matrix_passes_with_zero_residual() {
        let v = trace_test_3(&CMatrix::zeros(3), DEFAULT_TOL).unwrap();
        assert!(v.pass);
        assert_eq!(v.max_residual(), 0.0);
        assert!(uecsm_verdict(&CMatrix::zeros(4), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn example_pair_is_separated_by_word_traces() {
        let v = unitary_equivalence_4(&fixtures::t1(), &fixtures::t2(), DEFAULT_TOL).unwrap();
        assert!(!v.pass);
        // already w3 = tr T T* = ||T||_F^2 differs: (9 - 6) / 9
        assert!((v.residual("w3").unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(unitary_equivalence_4(&fixtures::t1(), &fixtures::t1(), DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn transpose_equivalence_rejects_t2() {
        assert!(!transpose_equivalence(&fixtures::t2(), DEFAULT_TOL).unwrap().pass);
        assert!(transpose_equivalence(&fixtures::t1(), DEFAULT_TOL).unwrap().pass);
    }
}
