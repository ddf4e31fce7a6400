//! Eigenvalues and paired eigenvector systems for small matrices with
//! distinct eigenvalues.
//!
//! The characteristic polynomial comes from the Faddeev-LeVerrier recursion
//! on a centred and rescaled copy of `T`; its roots are found with
//! Durand-Kerner (Weierstrass) iteration and polished with Newton steps.
//! Eigenvectors of `T` and `T*` are computed independently by inverse
//! iteration, so the biorthogonality `<x_i, y_j> = 0` (i != j) is a genuine
//! consistency check rather than an identity.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matcore::{inner, vec_norm, CMatrix, Lu, C64, ONE, ZERO};

/// Default relative eigenvalue gap below which the spectrum counts as repeated.
pub const DEFAULT_DISTINCT_TOL: f64 = 1e-6;

/// Largest accepted eigenvalue condition number `1 / |<x_i, y_i>|`.
pub const MAX_EIGEN_CONDITION: f64 = 1e8;

const DK_MAX_ITERS: usize = 200;
const DK_RESTARTS: u64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub n: usize,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Unit eigenvectors of `T`.
    pub x_vecs: Vec<Vec<C64>>,
    /// Unit eigenvectors of `T*` for the conjugate eigenvalues.
    pub y_vecs: Vec<Vec<C64>>,
    /// Smallest pairwise eigenvalue distance.
    pub gap: f64,
}

impl SpectralData {
    pub fn x_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.x_vecs).expect("n vectors of length n")
    }

    pub fn y_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.y_vecs).expect("n vectors of length n")
    }

    /// `max_{i != j} |<x_i, y_j>|`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, x) in self.x_vecs.iter().enumerate() {
            for (j, y) in self.y_vecs.iter().enumerate() {
                if i != j {
                    worst = worst.max(inner(x, y).norm());
                }
            }
        }
        worst
    }

    /// `max_i ||T x_i - lambda_i x_i||`.
    pub fn eigen_residual(&self, t: &CMatrix) -> f64 {
        self.x_vecs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(x, &lam)| {
                let tx = t.apply(x);
                let r: Vec<C64> = tx.iter().zip(x).map(|(a, b)| a - lam * b).collect();
                vec_norm(&r)
            })
            .fold(0.0, f64::max)
    }

    /// Largest eigenvalue condition number `1 / |<x_i, y_i>|`.
    pub fn max_condition(&self) -> f64 {
        self.x_vecs
            .iter()
            .zip(&self.y_vecs)
            .map(|(x, y)| 1.0 / inner(x, y).norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients `c_0..=c_n` of the monic characteristic polynomial
/// `det(lambda I - T) = sum_k c_k lambda^k`, via Faddeev-LeVerrier.
pub fn characteristic_polynomial(t: &CMatrix) -> Vec<C64> {
    let n = t.n();
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = ONE;
    let identity = CMatrix::identity(n);
    let mut m = CMatrix::zeros(n);
    for k in 1..=n {
        m = &(t * &m) + &identity.scale(coeffs[n + 1 - k]);
        coeffs[n - k] = -(t * &m).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a monic polynomial given by ascending coefficients.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        Error::NoConvergence("polynomial must have degree >= 1".into())
    })?;
    let lead = coeffs[degree];
    if lead == ZERO {
        return Err(Error::NoConvergence("leading coefficient is zero".into()));
    }
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }
    // Fujiwara-style radius keeps the starting circle on the scale of the roots.
    let radius = (0..degree)
        .map(|k| monic[k].norm().powf(1.0 / (degree - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);

    let mut best: Option<(f64, Vec<C64>)> = None;
    for attempt in 0..=DK_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt);
        let seed = C64::new(0.4, 0.9);
        let mut z: Vec<C64> = (0..degree)
            .map(|k| {
                let jitter = if attempt == 0 {
                    ONE
                } else {
                    C64::from_polar(1.0 + 0.2 * rng.random::<f64>(), rng.random::<f64>())
                };
                seed.powu(k as u32 + 1) * radius * jitter
            })
            .collect();
        let mut converged = false;
        for _ in 0..DK_MAX_ITERS {
            let mut max_step: f64 = 0.0;
            for i in 0..degree {
                let denom: C64 = (0..degree).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
                if denom == ZERO {
                    z[i] += C64::new(1e-8, 1e-8) * radius;
                    max_step = f64::INFINITY;
                    continue;
                }
                let step = horner(&monic, z[i]) / denom;
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step <= 4.0 * f64::EPSILON * radius {
                converged = true;
                break;
            }
        }
        if z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            continue;
        }
        polish(&monic, &mut z);
        let err = backward_error(&monic, &z);
        if converged || err <= 1e-9 {
            return Ok(z);
        }
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, z));
        }
    }
    Err(Error::NoConvergence(format!(
        "Durand-Kerner failed after {} restarts (best backward error {:.3e})",
        DK_RESTARTS,
        best.map_or(f64::NAN, |(e, _)| e)
    )))
}

fn polish(monic: &[C64], z: &mut [C64]) {
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_with_derivative(monic, *root);
            if dp == ZERO {
                break;
            }
            let candidate = *root - p / dp;
            if horner(monic, candidate).norm() < p.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }
}

/// Largest `|p(z)| / sum |c_k| |z|^k` over the computed roots.
fn backward_error(monic: &[C64], z: &[C64]) -> f64 {
    z.iter()
        .map(|&w| {
            let scale: f64 = monic.iter().enumerate().map(|(k, c)| c.norm() * w.norm().powi(k as i32)).sum();
            horner(monic, w).norm() / scale.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

fn lexicographic(a: &C64, b: &C64, tie: f64) -> Ordering {
    if (a.re - b.re).abs() > tie {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

/// Eigenvalues of `T`, sorted by real then imaginary part.
pub fn eigenvalues(t: &CMatrix) -> Result<Vec<C64>> {
    let n = t.n();
    let shift = t.trace() / n as f64;
    let centred = t - &CMatrix::identity(n).scale(shift);
    let scale = centred.frobenius_norm();
    let mut values = if scale == 0.0 {
        vec![shift; n]
    } else {
        let roots = polynomial_roots(&characteristic_polynomial(&centred.scale_real(1.0 / scale)))?;
        roots.into_iter().map(|r| shift + r * scale).collect()
    };
    let tie = 1e-9 * t.frobenius_norm().max(1.0);
    values.sort_by(|a, b| lexicographic(a, b, tie));
    Ok(values)
}

fn min_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Rotates `v` so its first non-negligible component is positive real.
pub fn fix_phase(v: &mut [C64]) {
    let size = vec_norm(v);
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-10 * size) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Unit vector spanning the (numerical) kernel of `m`, by inverse iteration
/// from a fixed start with two refinement steps.
fn kernel_vector(m: &CMatrix, scale: f64) -> Vec<C64> {
    let n = m.n();
    let lu = Lu::factor_with_floor(m, 1e-14 * scale).expect("floored factorization cannot fail");
    let mut v: Vec<C64> = (0..n)
        .map(|k| C64::new(1.0 + 0.37 * k as f64, 0.21 - 0.13 * (k * k) as f64))
        .collect();
    for _ in 0..3 {
        v = lu.solve(&v);
        let s = vec_norm(&v);
        v.iter_mut().for_each(|z| *z /= s);
    }
    fix_phase(&mut v);
    v
}

/// Eigenvalues with paired unit eigenvectors of `T` and `T*`.
///
/// Fails with `DegenerateSpectrum` when the smallest eigenvalue gap is at or
/// below `distinct_tol * max(1, ||T||_F)`, and with `IllConditionedSpectrum`
/// when some eigenvalue is numerically defective even though the computed
/// roots are separated.
pub fn eigensystem(t: &CMatrix, distinct_tol: f64) -> Result<SpectralData> {
    let n = t.n();
    let norm = t.frobenius_norm();
    let values = eigenvalues(t)?;
    let gap = min_gap(&values);
    let threshold = distinct_tol * norm.max(1.0);
    if gap <= threshold {
        return Err(Error::DegenerateSpectrum { gap, threshold });
    }
    let scale = norm.max(f64::MIN_POSITIVE);
    let adjoint = t.adjoint();
    let identity = CMatrix::identity(n);
    let mut x_vecs = Vec::with_capacity(n);
    let mut y_vecs = Vec::with_capacity(n);
    for &lam in &values {
        x_vecs.push(kernel_vector(&(t - &identity.scale(lam)), scale));
        y_vecs.push(kernel_vector(&(&adjoint - &identity.scale(lam.conj())), scale));
    }
    let data = SpectralData { n, eigenvalues: values, x_vecs, y_vecs, gap };
    let condition = data.max_condition();
    if !(condition <= MAX_EIGEN_CONDITION) {
        return Err(Error::IllConditionedSpectrum { condition });
    }
    Ok(data)
}
