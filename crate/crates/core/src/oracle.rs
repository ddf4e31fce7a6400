//! Numerical search for a unitary `U` making `U T U*` complex symmetric.
//!
//! Minimizes `f(U) = ||S - S^t||_F^2` with `S = U T U*` by descent on the
//! unitary group. Steps are Cayley transforms of skew-Hermitian directions
//! (damped Gauss-Newton, or the Riemannian gradient as a fallback) with a
//! step-halving line search. The search is advisory: `Inconclusive` never
//! means "not UECSM".

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{commutator, CMatrix, Lu, C64};
use crate::sampling::{orthonormalize, random_unitary};
use crate::tracetests::unit_scaled;
use crate::verdict::Verdict;

pub const MAX_ORACLE_DIM: usize = 6;
pub const DEFAULT_WITNESS_TOL: f64 = 1e-6;
pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A returned witness must be unitary to this accuracy.
pub const UNITARITY_TOL: f64 = 1e-9;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const REORTHONORMALIZE_EVERY: usize = 50;
const MIN_DAMPING: f64 = 1e-12;
const MAX_DAMPING: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub witness_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            witness_tol: DEFAULT_WITNESS_TOL,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleStatus {
    Witness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Best unitary found; present whenever a witness is claimed.
    pub u: Option<CMatrix>,
    /// `||S - S^t||_F / ||T||_F` at the best unitary.
    pub residual: f64,
    /// Descent iterations summed over all restarts run.
    pub iterations: usize,
    pub restarts_used: usize,
}

/// `S = U T U*` and `M = S - S^t`.
fn symmetry_defect(t: &CMatrix, u: &CMatrix) -> (CMatrix, CMatrix) {
    let s = &(u * t) * &u.adjoint();
    let m = &s - &s.transpose();
    (s, m)
}

/// `f(U) = ||U T U* - (U T U*)^t||_F^2`.
pub fn objective(t: &CMatrix, u: &CMatrix) -> f64 {
    symmetry_defect(t, u).1.frobenius_norm().powi(2)
}

/// Riemannian gradient of `f` at `U` as a skew-Hermitian `G`: for a step
/// `U -> (I + eps W) U` with `W` skew-Hermitian, `df = Re tr(G* W) eps`.
///
/// With `C = S M* - M* S`, `df = 4 Re tr(C W)` and the skew-Hermitian
/// part of `2 C*` represents it, giving `G = 2 (C* - C)`.
pub fn gradient(t: &CMatrix, u: &CMatrix) -> (f64, CMatrix) {
    let (s, m) = symmetry_defect(t, u);
    let ms = m.adjoint();
    let c = &(&s * &ms) - &(&ms * &s);
    let g = (&c.adjoint() - &c).scale_real(2.0);
    (m.frobenius_norm().powi(2), g)
}

/// `(I - W/2)^{-1} (I + W/2)`, unitary for skew-Hermitian `W`.
pub fn cayley(w: &CMatrix) -> CMatrix {
    let n = w.n();
    let half = w.scale_real(0.5);
    let id = CMatrix::identity(n);
    let lhs = (&id - &half).inverse().expect("I - W/2 is invertible for skew-Hermitian W");
    &lhs * &(&id + &half)
}

/// Real basis of the skew-Hermitian matrices: `E_ij - E_ji` and
/// `i (E_ij + E_ji)` for `i < j`, then `i E_ii`.
fn skew_basis(n: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i + 1..n {
            let mut a = CMatrix::zeros(n);
            a[(i, j)] = C64::new(1.0, 0.0);
            a[(j, i)] = C64::new(-1.0, 0.0);
            basis.push(a);
            let mut b = CMatrix::zeros(n);
            b[(i, j)] = C64::new(0.0, 1.0);
            b[(j, i)] = C64::new(0.0, 1.0);
            basis.push(b);
        }
    }
    for i in 0..n {
        let mut d = CMatrix::zeros(n);
        d[(i, i)] = C64::new(0.0, 1.0);
        basis.push(d);
    }
    basis
}

/// Real coordinates of an antisymmetric matrix: its strict upper triangle.
fn antisymmetric_coords(m: &CMatrix) -> Vec<f64> {
    let n = m.n();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Levenberg-Marquardt step for the residual `M`. To first order a step
/// `U -> cayley(W) U` changes `M` by `L(W) = [W, S] - [W, S]^t`; the step
/// solves `(J^t J + mu I) w = -J^t r` over the skew-Hermitian basis with
/// `mu = damping * ||r||`.
fn lm_direction(s: &CMatrix, m: &CMatrix, basis: &[CMatrix], damping: f64) -> Option<CMatrix> {
    let r = antisymmetric_coords(m);
    let columns: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let c = commutator(b, s);
            antisymmetric_coords(&(&c - &c.transpose()))
        })
        .collect();
    let p = basis.len();
    let mu = damping * r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let normal = CMatrix::from_fn(p, |k, l| {
        C64::new(dot(&columns[k], &columns[l]) + if k == l { mu } else { 0.0 }, 0.0)
    });
    let rhs: Vec<C64> = columns.iter().map(|col| C64::new(-dot(col, &r), 0.0)).collect();
    let w = Lu::factor(&normal)?.solve(&rhs);
    let mut step = CMatrix::zeros(s.n());
    for (wk, b) in w.iter().zip(basis) {
        step = &step + &b.scale_real(wk.re);
    }
    step.is_finite().then_some(step)
}

struct Descent {
    u: CMatrix,
    f: f64,
    iterations: usize,
}

/// Damped Gauss-Newton descent with a Cayley retraction and step-halving
/// line search, falling back to the negative gradient whenever the
/// Gauss-Newton direction is not a descent direction.
fn descend(t: &CMatrix, mut u: CMatrix, max_iters: usize, target_f: f64) -> Descent {
    let basis = skew_basis(t.n());
    let mut damping = 1.0;
    let mut iterations = 0;
    loop {
        let (s, m) = symmetry_defect(t, &u);
        let f = m.frobenius_norm().powi(2);
        if f <= target_f || iterations >= max_iters {
            break;
        }
        iterations += 1;
        let (_, g) = gradient(t, &u);
        // directional derivative of f along W is Re tr(G* W)
        let slope = |w: &CMatrix| (&g.adjoint() * w).trace().re;
        let direction = lm_direction(&s, &m, &basis, damping)
            .filter(|w| slope(w) < 0.0)
            .unwrap_or_else(|| g.scale_real(-1.0));
        let descent = slope(&direction);
        if descent >= 0.0 {
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        while step >= MIN_STEP {
            let candidate = &cayley(&direction.scale_real(step)) * &u;
            if objective(t, &candidate) <= f + ARMIJO * step * descent {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(mut next) = accepted else { break };
        // trust the Gauss-Newton model more after a full step, less otherwise
        damping = if step == 1.0 { (damping * 0.1).max(MIN_DAMPING) } else { (damping * 10.0).min(MAX_DAMPING) };
        if iterations % REORTHONORMALIZE_EVERY == 0 {
            next = orthonormalize(&next).unwrap_or(next);
        }
        u = next;
    }
    let u = orthonormalize(&u).unwrap_or(u);
    let f = objective(t, &u);
    Descent { u, f, iterations }
}

/// Multi-start descent with the default seed. See [`find_symmetrizer_with`].
pub fn find_symmetrizer(t: &CMatrix, restarts: usize, max_iters: usize, witness_tol: f64) -> Result<OracleResult> {
    find_symmetrizer_with(t, &OracleConfig { restarts, max_iters, witness_tol, seed: DEFAULT_SEED })
}

/// Runs up to `restarts` descents: the first from `U = I`, the rest from
/// seeded random unitaries. Stops at the first restart whose residual is
/// within `witness_tol`; otherwise reports the smallest residual seen, ties
/// going to the earlier restart.
pub fn find_symmetrizer_with(t: &CMatrix, config: &OracleConfig) -> Result<OracleResult> {
    let n = t.n();
    if n > MAX_ORACLE_DIM {
        return Err(Error::CostGuard(n));
    }
    if config.restarts < 1 {
        return Err(Error::Precondition("restarts must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let ts = unit_scaled(t);
    // stop a little below the witness threshold so the reported residual
    // is not marginal
    let target_f = (0.01 * config.witness_tol).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<Descent> = None;
    let mut iterations = 0;
    let mut restarts_used = 0;
    for restart in 0..config.restarts {
        let start = if restart == 0 { CMatrix::identity(n) } else { random_unitary(&mut rng, n) };
        let run = descend(&ts, start, config.max_iters, target_f);
        iterations += run.iterations;
        restarts_used += 1;
        if best.as_ref().is_none_or(|b| run.f < b.f) {
            best = Some(run);
        }
        if best.as_ref().is_some_and(|b| b.f.sqrt() <= config.witness_tol) {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let residual = best.f.sqrt();
    let status = if residual <= config.witness_tol { OracleStatus::Witness } else { OracleStatus::Inconclusive };
    Ok(OracleResult { status, u: Some(best.u), residual, iterations, restarts_used })
}

/// Checks that `u` is unitary and that `u t u*` is symmetric, both to `tol`.
/// The symmetry residual is relative to `||T||_F`.
pub fn verify_witness(t: &CMatrix, u: &CMatrix, tol: f64) -> Verdict {
    if t.n() != u.n() {
        return Verdict::from_residuals("verify_witness", vec![("dimension", f64::INFINITY)], tol);
    }
    let unitarity = (&(&u.adjoint() * u) - &CMatrix::identity(u.n())).frobenius_norm();
    let norm = t.frobenius_norm();
    let symmetry = symmetry_defect(t, u).1.frobenius_norm() / if norm > 0.0 { norm } else { 1.0 };
    Verdict::from_residuals("verify_witness", vec![("unitarity", unitarity), ("symmetry", symmetry)], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matcore::C64;
    use crate::nilpotent4::{persymmetric_witness, NilpotentParams};
    use crate::sampling::{gaussian_matrix, symmetric_matrix};

    fn skew(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let g = gaussian_matrix(rng, n);
        (&g - &g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..20 {
            let n = 3 + trial % 2;
            let t = gaussian_matrix(&mut rng, n);
            let u = random_unitary(&mut rng, n);
            let w = skew(&mut rng, n);
            let (_, g) = gradient(&t, &u);
            let analytic = (&g.adjoint() * &w).trace().re;
            let h = 1e-5;
            let plus = objective(&t, &(&cayley(&w.scale_real(h)) * &u));
            let minus = objective(&t, &(&cayley(&w.scale_real(-h)) * &u));
            let numeric = (plus - minus) / (2.0 * h);
            let rel = (analytic - numeric).abs() / analytic.abs().max(1e-12);
            assert!(rel < 1e-5, "trial {trial}: analytic {analytic} numeric {numeric}");
        }
    }

    #[test]
    fn cayley_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = cayley(&skew(&mut rng, 4));
        assert!((&(&q.adjoint() * &q) - &CMatrix::identity(4)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn objective_is_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = gaussian_matrix(&mut rng, 4);
        let u = random_unitary(&mut rng, 4);
        let w = random_unitary(&mut rng, 4);
        let moved = &(&w * &t) * &w.adjoint();
        let f0 = objective(&t, &u);
        let f1 = objective(&moved, &(&u * &w.adjoint()));
        assert!((f0 - f1).abs() < 1e-10 * f0.max(1.0));
    }

    #[test]
    fn symmetric_input_is_immediate() {
        let r = find_symmetrizer(&fixtures::symmetric4(), 1, 10, DEFAULT_WITNESS_TOL).unwrap();
        assert_eq!(r.status, OracleStatus::Witness);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.u, Some(CMatrix::identity(4)));
    }

    #[test]
    fn finds_witness_for_hidden_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [3, 4] {
            let s = symmetric_matrix(&mut rng, n);
            let v = random_unitary(&mut rng, n);
            let t = &(&v * &s) * &v.adjoint();
            let r = find_symmetrizer(&t, 20, DEFAULT_MAX_ITERS, DEFAULT_WITNESS_TOL).unwrap();
            assert_eq!(r.status, OracleStatus::Witness, "n={n}: {r:?}");
            let u = r.u.unwrap();
            assert!(verify_witness(&t, &u, 1e-6).pass);
            assert!((&(&u.adjoint() * &u) - &CMatrix::identity(n)).frobenius_norm() <= UNITARITY_TOL);
        }
    }

    #[test]
    fn t1_has_witness() {
        let r = find_symmetrizer(&fixtures::t1(), 20, DEFAULT_MAX_ITERS, 1e-7).unwrap();
        assert_eq!(r.status, OracleStatus::Witness, "{r:?}");
        assert!(r.residual < 1e-7);
    }

    #[test]
    fn non_uecsm_is_inconclusive() {
        let r = find_symmetrizer(&fixtures::balayan(), 5, 500, DEFAULT_WITNESS_TOL).unwrap();
        assert_eq!(r.status, OracleStatus::Inconclusive);
        assert!(r.residual > 1e-3, "{r:?}");
        assert_eq!(r.restarts_used, 5);
    }

    #[test]
    fn guards() {
        assert_eq!(find_symmetrizer(&CMatrix::identity(7), 1, 1, 1e-6), Err(Error::CostGuard(7)));
        assert!(matches!(find_symmetrizer(&CMatrix::identity(2), 0, 1, 1e-6), Err(Error::Precondition(_))));
    }

    #[test]
    fn verify_witness_reports_each_defect() {
        let s = fixtures::symmetric3();
        assert!(verify_witness(&s, &CMatrix::identity(3), 1e-12).pass);
        let v = verify_witness(&s, &CMatrix::identity(3).scale_real(2.0), 1e-6);
        assert!(!v.pass);
        assert!(v.residual("unitarity").unwrap() > 1.0);
        assert!(!verify_witness(&s, &CMatrix::identity(4), 1e-6).pass);
    }

    #[test]
    fn persymmetric_witness_verifies() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        // |a| = |f|, |b| = |e|, ae = bf = i
        let p = NilpotentParams::new(one, one, C64::new(2.0, -1.0), C64::new(0.5, 0.0), i, i);
        let u = persymmetric_witness(&p).unwrap();
        let v = verify_witness(&p.build_matrix(), &u, 1e-12);
        assert!(v.pass, "{v:?}");
    }
}
