//! Closed-form UECSM classification of 4x4 strictly upper-triangular
//! (hence nilpotent) matrices
//!
//! ```text
//!     [0 a b c]
//!     [0 0 d e]
//!     [0 0 0 f]
//!     [0 0 0 0]
//! ```
//!
//! Every 4x4 nilpotent matrix is unitarily equivalent to one of these by
//! Schur triangularization.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::matcore::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NilpotentParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
}

impl NilpotentParams {
    pub fn new(a: C64, b: C64, c: C64, d: C64, e: C64, f: C64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        let r = |x| C64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d), r(e), r(f))
    }

    pub fn from_slice(p: &[C64; 6]) -> Self {
        Self::new(p[0], p[1], p[2], p[3], p[4], p[5])
    }

    pub fn as_array(&self) -> [C64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn build_matrix(&self) -> CMatrix {
        let mut t = CMatrix::zeros(4);
        t[(0, 1)] = self.a;
        t[(0, 2)] = self.b;
        t[(0, 3)] = self.c;
        t[(1, 2)] = self.d;
        t[(1, 3)] = self.e;
        t[(2, 3)] = self.f;
        t
    }

    /// Third column `(b, d, 0, 0)`.
    pub fn v3(&self) -> [C64; 4] {
        [self.b, self.d, C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
    }

    /// Fourth column `(c, e, f, 0)`.
    pub fn v4(&self) -> [C64; 4] {
        [self.c, self.e, self.f, C64::new(0.0, 0.0)]
    }
}

/// Symbolic values of selected Psi entries. All are polynomials in the
/// parameters and are evaluated everywhere; the `_d0` and `_a0` fields
/// equal the matrix Psi entries only on `d = 0` and `a = 0` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiClosedForms {
    pub psi4: C64,
    pub psi7: C64,
    pub psi1_d0: C64,
    pub psi6_d0: C64,
    pub psi1_a0: C64,
    pub psi6_a0: C64,
}

pub fn psi_closed_forms(p: &NilpotentParams) -> PsiClosedForms {
    let sq = |z: C64| z.norm_sqr();
    let (a2, b2, c2, d2, e2, f2) = (sq(p.a), sq(p.b), sq(p.c), sq(p.d), sq(p.e), sq(p.f));
    let norm_gap = a2 + b2 - e2 - f2;
    let psi4 = a2 * d2 * f2 * norm_gap;
    let psi7 = a2 * d2 * d2 * f2 * (a2 - f2);

    let ae_bf = p.a * p.e + p.b * p.f;
    let psi1_d0 = ae_bf.norm_sqr() * norm_gap;
    let psi6_d0 = p.c.conj() * ae_bf * psi1_d0;

    // <v3, v4> = b conj(c) + d conj(e)
    let v34 = p.b * p.c.conj() + p.d * p.e.conj();
    let v3_sq = b2 + d2;
    let psi1_a0 = f2 * (v3_sq * (v3_sq - c2 - e2 - f2) + v34.norm_sqr());
    let psi6_a0 = p.f * v34 * psi1_a0;

    let r = |x: f64| C64::new(x, 0.0);
    PsiClosedForms {
        psi4: r(psi4),
        psi7: r(psi7),
        psi1_d0: r(psi1_d0),
        psi6_d0,
        psi1_a0: r(psi1_a0),
        psi6_a0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// Condition numbers 1..=6 that hold.
    pub satisfied: BTreeSet<u8>,
    pub uecsm: bool,
    /// `|a| = |f|` and `|b| = |e|` hold but `ae != bf`: the moduli match
    /// condition 6 while the phases obstruct it.
    pub phase_obstructed: bool,
}

/// The two quadratic forms of conditions 4 and 5 together with a positive
/// magnitude scale for relative comparison.
fn quadratic_4(p: &NilpotentParams) -> (f64, f64) {
    let sq = |z: C64| z.norm_sqr();
    let v3 = sq(p.b) + sq(p.d);
    let value = v3 * (v3 - sq(p.c) - sq(p.e) - sq(p.f)) + (p.b * p.c.conj() + p.d * p.e.conj()).norm_sqr();
    let scale = v3 * (v3 + sq(p.c) + sq(p.e) + sq(p.f)) + (p.b.norm() * p.c.norm() + p.d.norm() * p.e.norm()).powi(2);
    (value, scale)
}

fn quadratic_5(p: &NilpotentParams) -> (f64, f64) {
    let sq = |z: C64| z.norm_sqr();
    let v = sq(p.d) + sq(p.e);
    let value = v * (v - sq(p.a) - sq(p.b) - sq(p.c)) + (p.c * p.e.conj() + p.b * p.d.conj()).norm_sqr();
    let scale = v * (v + sq(p.a) + sq(p.b) + sq(p.c)) + (p.c.norm() * p.e.norm() + p.b.norm() * p.d.norm()).powi(2);
    (value, scale)
}

/// Evaluates the six UECSM conditions:
///
/// 1. `d = 0` and `ae + bf = 0`
/// 2. `d = 0` and `|a|^2 + |b|^2 = |e|^2 + |f|^2`
/// 3. `a = 0` and `f = 0`
/// 4. `a = 0` and `(|b|^2+|d|^2)(|b|^2+|d|^2-|c|^2-|e|^2-|f|^2) + |b c* + d e*|^2 = 0`
/// 5. `f = 0` and `(|d|^2+|e|^2)(|d|^2+|e|^2-|a|^2-|b|^2-|c|^2) + |c e* + b d*|^2 = 0`
/// 6. `|a| = |f|`, `|b| = |e|` and `ae = bf`
///
/// Vanishing of `a`, `d`, `f` is gated absolutely at
/// `tol * (1 + max |entry|)`; every other equality is relative to the sum
/// of the magnitudes of its terms. The phase requirement `ae = bf` in
/// condition 6 is what lets a diagonal unitary bring `T` to the
/// persymmetric form `(a, b, c, d, b, a)`; without it `T` and `T^t` have
/// different word traces.
pub fn classify(p: &NilpotentParams, tol: f64) -> Classification {
    let sq = |z: C64| z.norm_sqr();
    let max_entry = p.as_array().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gate = tol * (1.0 + max_entry);
    let is_zero = |z: C64| z.norm() <= gate;
    let close = |value: f64, scale: f64| value.abs() <= tol * (scale + f64::MIN_POSITIVE);

    let (d0, a0, f0) = (is_zero(p.d), is_zero(p.a), is_zero(p.f));
    let ae_bf = p.a * p.e + p.b * p.f;
    let ae_bf_scale = p.a.norm() * p.e.norm() + p.b.norm() * p.f.norm();
    let ae_minus_bf = p.a * p.e - p.b * p.f;
    let (a2, b2, e2, f2) = (sq(p.a), sq(p.b), sq(p.e), sq(p.f));

    let mut satisfied = BTreeSet::new();
    if d0 && close(ae_bf.norm(), ae_bf_scale) {
        satisfied.insert(1);
    }
    if d0 && close(a2 + b2 - e2 - f2, a2 + b2 + e2 + f2) {
        satisfied.insert(2);
    }
    if a0 && f0 {
        satisfied.insert(3);
    }
    if a0 {
        let (value, scale) = quadratic_4(p);
        if close(value, scale) {
            satisfied.insert(4);
        }
    }
    if f0 {
        let (value, scale) = quadratic_5(p);
        if close(value, scale) {
            satisfied.insert(5);
        }
    }
    let moduli_match = close(a2 - f2, a2 + f2) && close(b2 - e2, b2 + e2);
    let phases_match = close(ae_minus_bf.norm(), ae_bf_scale);
    if moduli_match && phases_match {
        satisfied.insert(6);
    }
    Classification {
        uecsm: !satisfied.is_empty(),
        phase_obstructed: moduli_match && !phases_match,
        satisfied,
    }
}

/// Diagonal unitary `D` and the symmetric unitary `V` with
/// `V D T D* V*` complex symmetric, for parameters satisfying condition 6
/// with `a, d, f` nonzero. Returns the composite unitary `V D`.
///
/// `D` brings `T` to the persymmetric form `(a', b', c', d', b', a')`, which
/// satisfies `J T' J = T'^t` for the anti-diagonal permutation `J`; then
/// `V = e^{-i pi/4} (I + iJ) / sqrt 2` obeys `V = conj(V) J`, which makes
/// `V T' V*` symmetric.
pub fn persymmetric_witness(p: &NilpotentParams) -> Option<CMatrix> {
    if p.a.norm() == 0.0 || p.f.norm() == 0.0 {
        return None;
    }
    // T'_{ij} = phi_i T_{ij} conj(phi_j) with phi = (1, rho, 1, 1) and
    // rho = a/f (unimodular when |a| = |f|) gives T'_{12} = |a| f/|f| = T'_{34};
    // T'_{13} = b and T'_{24} = rho e agree exactly when ae = bf.
    let one = C64::new(1.0, 0.0);
    let rho = p.a / p.f;
    let phases = [one, rho / rho.norm(), one, one];
    let d = CMatrix::diag(&phases);
    let n = 4;
    let j = CMatrix::from_fn(n, |r, s| if r + s == n - 1 { one } else { C64::new(0.0, 0.0) });
    let v = (&CMatrix::identity(n) + &j.scale(C64::new(0.0, 1.0)))
        .scale(C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4) / 2f64.sqrt());
    Some(&v * &d)
}
