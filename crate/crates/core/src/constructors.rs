//! Matrices built from the indefinite unitary groups SU(k, n-k).
//!
//! `T = Q D Q^{-1}` with `Q` in SU(k, n-k) and `D` diagonal with distinct
//! entries always passes the linear strong angle test. It passes the strong
//! angle test (is UECSM) exactly when every cyclic triple product of the
//! columns of `Q` is real, which is rare for `min(k, n-k) >= 2` and
//! automatic when `min(k, n-k) <= 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angletests::angle_suite;
use crate::error::{Error, Result};
use crate::matcore::{inner, CMatrix, C64};
use crate::sampling::gaussian_integer_vector;
use crate::verdict::Verdict;

/// Self-products below this are treated as isotropic.
pub const ISOTROPY_CUTOFF: f64 = 1e-10;

/// Random constructions reject `Q` with `||Q||_F^2` above this. For
/// `Q` in SU(k, n-k), `Q^{-1} = A Q* A`, so this bounds the condition number.
pub const MAX_CONSTRUCTION_NORM_SQ: f64 = 200.0;

pub const MAX_ATTEMPTS: usize = 1000;

/// Tolerance used to verify a generated counterexample before returning it.
pub const VERIFY_TOL: f64 = 1e-7;

/// Default diagonal `(-1, 0, 1, 2)`.
pub fn default_diagonal() -> Vec<C64> {
    [-1.0, 0.0, 1.0, 2.0].iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Hermitian form of signature `(k, n - k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    k: usize,
    n: usize,
}

impl Signature {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidSignature { k, n });
        }
        Ok(Self { k, n })
    }

    /// Signature from the cone sizes `(k, n - k)`.
    pub fn from_cones(positive: usize, negative: usize) -> Result<Self> {
        Self::new(positive, positive + negative)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn negative(&self) -> usize {
        self.n - self.k
    }

    /// `A = I_k (+) -I_{n-k}`.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::diag(&(0..self.n).map(|j| self.sign(j)).collect::<Vec<_>>())
    }

    fn sign(&self, j: usize) -> C64 {
        C64::new(if j < self.k { 1.0 } else { -1.0 }, 0.0)
    }
}

/// `<v, w>_k = sum_{j<=k} v_j conj(w_j) - sum_{j>k} v_j conj(w_j)`.
pub fn indefinite_inner(v: &[C64], w: &[C64], sig: Signature) -> Result<C64> {
    for len in [v.len(), w.len()] {
        if len != sig.n {
            return Err(Error::DimensionMismatch { expected: sig.n, found: len });
        }
    }
    Ok(v.iter().zip(w).enumerate().map(|(j, (a, b))| sig.sign(j) * a * b.conj()).sum())
}

/// Orthonormalizes `vectors` (in order) for the indefinite form, scales by
/// `|self-product|^{-1/2}`, moves the positive columns first, and fixes the
/// phase of the last column so that `det Q = 1`. The result satisfies
/// `Q* A Q = A`.
pub fn indefinite_gram_schmidt(vectors: &[Vec<C64>], sig: Signature) -> Result<CMatrix> {
    let n = sig.n;
    if vectors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
    }
    let mut basis: Vec<(Vec<C64>, f64)> = Vec::with_capacity(n);
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let mut w = v.clone();
        // two passes of projection
        for _ in 0..2 {
            for (u, s) in &basis {
                let h = indefinite_inner(&w, u, sig)? * *s;
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= h * ui;
                }
            }
        }
        let self_product = indefinite_inner(&w, &w, sig)?.re;
        if self_product.abs() < ISOTROPY_CUTOFF {
            return Err(Error::IsotropicVector { index, value: self_product.abs() });
        }
        let scale = self_product.abs().sqrt();
        basis.push((w.iter().map(|z| z / scale).collect(), self_product.signum()));
    }
    let positive = basis.iter().filter(|(_, s)| *s > 0.0).count();
    if positive != sig.k {
        return Err(Error::SignatureMismatch { expected: sig.k, found: positive });
    }
    let mut cols: Vec<Vec<C64>> = basis.iter().filter(|(_, s)| *s > 0.0).map(|(u, _)| u.clone()).collect();
    cols.extend(basis.iter().filter(|(_, s)| *s < 0.0).map(|(u, _)| u.clone()));
    let mut q = CMatrix::from_columns(&cols)?;
    let det = q.determinant();
    let correction = det.conj() / det.norm();
    for i in 0..n {
        q[(i, n - 1)] *= correction;
    }
    Ok(q)
}

/// Residuals `||Q* A Q - A||_F` and `|det Q - 1|`.
pub fn su_membership(q: &CMatrix, sig: Signature, tol: f64) -> Verdict {
    if q.n() != sig.n {
        return Verdict::from_residuals("su_membership", vec![("dimension", f64::INFINITY)], tol);
    }
    let a = sig.matrix();
    let form = (&(&(&q.adjoint() * &a) * q) - &a).frobenius_norm();
    let det = (q.determinant() - C64::new(1.0, 0.0)).norm();
    Verdict::from_residuals("su_membership", vec![("form", form), ("determinant", det)], tol)
}

/// `Q diag(d) Q^{-1}`.
pub fn conjugated_diagonal(q: &CMatrix, d: &[C64]) -> Result<CMatrix> {
    if d.len() != q.n() {
        return Err(Error::DimensionMismatch { expected: q.n(), found: d.len() });
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i] == d[j] {
                return Err(Error::RepeatedDiagonal);
            }
        }
    }
    let inv = q.inverse().map_err(|_| Error::SingularQ)?;
    Ok(&(q * &CMatrix::diag(d)) * &inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleObstruction {
    /// 1-based column indices `i < j < k`.
    pub triple: (usize, usize, usize),
    pub value: C64,
    pub real_flag: bool,
}

/// Cyclic triple products `<q_i,q_j><q_j,q_k><q_k,q_i>` of the raw columns
/// of `Q`, `i < j < k`, flagged real when the imaginary part is within
/// `tol` of the product of squared column norms. Scaling a column by a
/// positive number scales the product by a positive number, so reality is
/// the same as for the normalized eigenvectors of `Q D Q^{-1}`.
pub fn sat_obstruction(q: &CMatrix, tol: f64) -> Vec<TripleObstruction> {
    let cols = q.columns();
    let norms: Vec<f64> = cols.iter().map(|c| inner(c, c).re).collect();
    let n = q.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let value = inner(&cols[i], &cols[j]) * inner(&cols[j], &cols[k]) * inner(&cols[k], &cols[i]);
                // Cauchy-Schwarz bound on |value|; keeps vanishing products real
                let scale = norms[i] * norms[j] * norms[k];
                out.push(TripleObstruction {
                    triple: (i + 1, j + 1, k + 1),
                    value,
                    real_flag: value.im.abs() <= tol * scale,
                });
            }
        }
    }
    out
}

/// A generated `T = Q D Q^{-1}` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub t: CMatrix,
    pub q: CMatrix,
    pub diagonal: Vec<C64>,
    pub signature: Signature,
    pub obstruction: Vec<TripleObstruction>,
    /// Draws consumed, including rejected ones.
    pub attempts: usize,
}

impl Construction {
    /// True when every triple product is real, i.e. `T` is UECSM.
    pub fn all_real(&self) -> bool {
        self.obstruction.iter().all(|o| o.real_flag)
    }
}

/// Draws an element of SU(k, n-k) from Gaussian-integer vectors with
/// entries in `{-2..2} + {-2..2} i`, redrawing on isotropic or wrongly
/// signed draws and on badly conditioned results.
pub fn random_su(rng: &mut ChaCha8Rng, sig: Signature) -> Result<(CMatrix, usize)> {
    for attempt in 1..=MAX_ATTEMPTS {
        let vectors: Vec<Vec<C64>> = (0..sig.n).map(|_| gaussian_integer_vector(rng, sig.n, 2)).collect();
        match indefinite_gram_schmidt(&vectors, sig) {
            Ok(q) if q.frobenius_norm().powi(2) <= MAX_CONSTRUCTION_NORM_SQ => return Ok((q, attempt)),
            Ok(_) | Err(Error::IsotropicVector { .. } | Error::SignatureMismatch { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ExhaustedRetries(MAX_ATTEMPTS))
}

fn check_diagonal(d: &[C64], sig: Signature) -> Result<()> {
    if d.len() != sig.n {
        return Err(Error::DimensionMismatch { expected: sig.n, found: d.len() });
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i] == d[j] {
                return Err(Error::RepeatedDiagonal);
            }
        }
    }
    Ok(())
}

/// `T = Q D Q^{-1}` for a random `Q` in SU(k, n-k); passes the linear strong
/// angle test. Deterministic in `seed`.
pub fn construct_lsat(seed: u64, sig: Signature, d: &[C64]) -> Result<Construction> {
    check_diagonal(d, sig)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q, attempts) = random_su(&mut rng, sig)?;
    let t = conjugated_diagonal(&q, d)?;
    Ok(Construction {
        obstruction: sat_obstruction(&q, VERIFY_TOL),
        t,
        q,
        diagonal: d.to_vec(),
        signature: sig,
        attempts,
    })
}

/// A matrix passing the weak and linear strong angle tests but failing the
/// strong one (hence not UECSM). Requires both cones of dimension at least
/// two: for SU(n-1, 1) every construction is UECSM. The result is checked
/// with [`angle_suite`] before it is returned.
pub fn generate_wat_not_sat(seed: u64, sig: Signature, d: &[C64]) -> Result<Construction> {
    if sig.k.min(sig.negative()) < 2 {
        return Err(Error::Precondition(format!(
            "signature ({}, {}) has a cone of dimension < 2; every such construction is UECSM",
            sig.k,
            sig.negative()
        )));
    }
    check_diagonal(d, sig)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while attempts < MAX_ATTEMPTS {
        let (q, used) = random_su(&mut rng, sig)?;
        attempts += used;
        let obstruction = sat_obstruction(&q, VERIFY_TOL);
        if obstruction.iter().all(|o| o.real_flag) {
            continue;
        }
        let Ok(t) = conjugated_diagonal(&q, d) else { continue };
        let Ok(suite) = angle_suite(&t, VERIFY_TOL) else { continue };
        if suite.wat.verdict.pass && suite.lsat.verdict.pass && !suite.sat.verdict.pass {
            return Ok(Construction { t, q, diagonal: d.to_vec(), signature: sig, obstruction, attempts });
        }
    }
    Err(Error::ExhaustedRetries(MAX_ATTEMPTS))
}

/// Columns of `Q` as the list of starting vectors, convenient for feeding
/// a known basis back into [`indefinite_gram_schmidt`].
pub fn columns_of(q: &CMatrix) -> Vec<Vec<C64>> {
    q.columns()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matcore::ZERO;
    use crate::sampling::random_unitary;

    const TOL: f64 = 1e-10;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis(n: usize) -> Vec<Vec<C64>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { c(1.0, 0.0) } else { ZERO }).collect()).collect()
    }

    #[test]
    fn signature_bounds() {
        assert!(Signature::new(0, 3).is_err());
        assert!(Signature::new(4, 3).is_err());
        let s = Signature::from_cones(2, 2).unwrap();
        assert_eq!((s.k(), s.n(), s.negative()), (2, 4, 2));
    }

    #[test]
    fn indefinite_inner_basics() {
        let sig = Signature::new(2, 4).unwrap();
        let e = basis(4);
        assert_eq!(indefinite_inner(&e[0], &e[0], sig).unwrap(), c(1.0, 0.0));
        assert_eq!(indefinite_inner(&e[3], &e[3], sig).unwrap(), c(-1.0, 0.0));
        let v = vec![c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(-1.0, 1.0)];
        let w = vec![c(0.0, 1.0), c(2.0, 2.0), c(-1.0, 0.5), c(1.0, 0.0)];
        let vw = indefinite_inner(&v, &w, sig).unwrap();
        let wv = indefinite_inner(&w, &v, sig).unwrap();
        assert!((vw - wv.conj()).norm() < 1e-15);
        assert!(indefinite_inner(&v[..3], &w, sig).is_err());
    }

    #[test]
    fn standard_basis_gives_identity() {
        let q = indefinite_gram_schmidt(&basis(4), Signature::new(2, 4).unwrap()).unwrap();
        assert_eq!(q, CMatrix::identity(4));
    }

    #[test]
    fn reordering_moves_positive_columns_first() {
        let sig = Signature::new(2, 4).unwrap();
        let e = basis(4);
        let q = indefinite_gram_schmidt(&[e[2].clone(), e[0].clone(), e[3].clone(), e[1].clone()], sig).unwrap();
        assert!(su_membership(&q, sig, TOL).pass);
        assert_eq!(q.column(0), e[0]);
        assert_eq!(q.column(1), e[1]);
    }

    #[test]
    fn isotropic_and_mismatched_inputs() {
        let sig = Signature::new(1, 2).unwrap();
        let iso = vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(indefinite_gram_schmidt(&iso, sig), Err(Error::IsotropicVector { index: 0, .. })));
        // dependent vectors leave a zero residual
        let dependent = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(2.0, 0.0), c(0.0, 0.0)]];
        assert!(matches!(indefinite_gram_schmidt(&dependent, sig), Err(Error::IsotropicVector { index: 1, .. })));
        assert!(matches!(indefinite_gram_schmidt(&basis(3), sig), Err(Error::DimensionMismatch { .. })));
        let q = indefinite_gram_schmidt(&basis(2), Signature::new(2, 2).unwrap()).unwrap();
        assert_eq!(q, CMatrix::identity(2));
    }

    #[test]
    fn su22_example_q_is_in_su22() {
        let sig = Signature::new(2, 4).unwrap();
        let v = su_membership(&fixtures::su22_example(), sig, TOL);
        assert!(v.pass, "{v:?}");
        assert!(su_membership(&CMatrix::identity(4), sig, TOL).pass);
    }

    #[test]
    fn random_unitary_is_not_signature_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = random_unitary(&mut rng, 4);
        let v = su_membership(&u, Signature::new(2, 4).unwrap(), TOL);
        assert!(v.residual("form").unwrap() > 0.1);
        assert!(!v.pass);
    }

    #[test]
    fn conjugated_diagonal_reproduces_printed_matrix() {
        let d: Vec<C64> = fixtures::SU22_DIAGONAL.iter().map(|&x| c(x, 0.0)).collect();
        let t = conjugated_diagonal(&fixtures::su22_example(), &d).unwrap();
        let want = fixtures::su22_lsat_matrix();
        assert!(t.entries().iter().zip(want.entries()).all(|(a, b)| (a - b).norm() < 1e-8));
        let id = conjugated_diagonal(&CMatrix::identity(4), &d).unwrap();
        assert_eq!(id, CMatrix::diag(&d));
    }

    #[test]
    fn conjugated_diagonal_errors() {
        let d = vec![c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(conjugated_diagonal(&CMatrix::identity(2), &d), Err(Error::RepeatedDiagonal));
        let d = vec![c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(conjugated_diagonal(&CMatrix::zeros(2), &d), Err(Error::SingularQ));
    }

    #[test]
    fn su22_example_q_obstruction() {
        let obs = sat_obstruction(&fixtures::su22_example(), 1e-8);
        let first = obs.iter().find(|o| o.triple == (1, 2, 3)).unwrap();
        assert!((first.value - c(100.0, -8.0) / 3.0).norm() < 1e-8);
        assert!(!first.real_flag);
        assert!(sat_obstruction(&CMatrix::identity(4), 1e-8).iter().all(|o| o.real_flag && o.value == ZERO));
    }

    #[test]
    fn real_q_has_real_triples() {
        let sig = Signature::new(2, 4).unwrap();
        let vectors: Vec<Vec<C64>> = [[2.0, 1.0, 0.5, -1.0], [0.0, 3.0, 1.0, 1.0], [1.0, 0.0, 2.0, 0.5], [0.0, 1.0, -1.0, 2.0]]
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        let q = indefinite_gram_schmidt(&vectors, sig).unwrap();
        assert!(sat_obstruction(&q, 1e-8).iter().all(|o| o.real_flag));
    }

    #[test]
    fn generator_preconditions() {
        let d = default_diagonal();
        assert!(matches!(generate_wat_not_sat(1, Signature::new(3, 4).unwrap(), &d), Err(Error::Precondition(_))));
        let d3 = vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(generate_wat_not_sat(1, Signature::new(2, 3).unwrap(), &d3), Err(Error::Precondition(_))));
        assert!(matches!(generate_wat_not_sat(1, Signature::new(2, 4).unwrap(), &d3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn generator_produces_counterexample() {
        let sig = Signature::new(2, 4).unwrap();
        let built = generate_wat_not_sat(7, sig, &default_diagonal()).unwrap();
        let suite = angle_suite(&built.t, VERIFY_TOL).unwrap();
        assert!(suite.wat.verdict.pass && suite.lsat.verdict.pass && !suite.sat.verdict.pass);
        assert!(!built.all_real());
        // deterministic in the seed
        assert_eq!(generate_wat_not_sat(7, sig, &default_diagonal()).unwrap().t, built.t);
    }
}
