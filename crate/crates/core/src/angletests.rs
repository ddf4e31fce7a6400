//! Eigenvector angle criteria: weak (WAT), strong (SAT) and linear strong
//! (LSAT) angle tests, plus the 3x3 determinant criterion.
//!
//! `x_i` are unit eigenvectors of `T`, `y_i` unit eigenvectors of `T*`
//! for the conjugate eigenvalues. All quantities used are invariant under
//! re-phasing individual eigenvectors: WAT compares moduli, and SAT/LSAT
//! compare cyclic triple products `<x_i,x_j><x_j,x_k><x_k,x_i>`.

use crate::error::{Error, Result};
use crate::matcore::{inner, CMatrix, C64};
use crate::spectra::{eigensystem, SpectralData, DEFAULT_DISTINCT_TOL};
use crate::verdict::Verdict;

/// Triple deviations are `|lhs - rhs| / max(TRIPLE_FLOOR, |lhs|, |rhs|)`.
/// Unit eigenvectors make every triple product at most 1 in modulus; below
/// the floor the comparison is absolute so noise-level triples from
/// (nearly) orthogonal eigenvectors do not blow up.
pub const TRIPLE_FLOOR: f64 = 1e-6;

/// Pairwise inner products below this make the determinant criterion
/// inapplicable.
pub const ORTHOGONALITY_CUTOFF: f64 = 1e-10;

/// Tolerance for the internal determinant identities checked on every call
/// of [`det_criterion_3`].
pub const IDENTITY_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleReport {
    pub verdict: Verdict,
    /// WAT only: `| |<x_i,x_j>| - |<y_i,y_j>| |` for `i < j`.
    pub pair_deviations: Vec<((usize, usize), f64)>,
    /// SAT/LSAT only: normalized triple mismatch for `i <= j <= k`.
    pub triple_deviations: Vec<((usize, usize, usize), f64)>,
}

impl AngleReport {
    pub fn max_deviation(&self) -> f64 {
        self.pair_deviations
            .iter()
            .map(|p| p.1)
            .chain(self.triple_deviations.iter().map(|t| t.1))
            .fold(0.0, f64::max)
    }
}

fn gram(vecs: &[Vec<C64>]) -> Vec<Vec<C64>> {
    vecs.iter().map(|u| vecs.iter().map(|v| inner(u, v)).collect()).collect()
}

fn triple(g: &[Vec<C64>], i: usize, j: usize, k: usize) -> C64 {
    g[i][j] * g[j][k] * g[k][i]
}

/// Weak angle test: `|<x_i,x_j>| = |<y_i,y_j>|` for all `i < j`.
pub fn wat(s: &SpectralData, tol: f64) -> AngleReport {
    let gx = gram(&s.x_vecs);
    let gy = gram(&s.y_vecs);
    let mut pairs = Vec::new();
    for i in 0..s.n {
        for j in i + 1..s.n {
            pairs.push(((i, j), (gx[i][j].norm() - gy[i][j].norm()).abs()));
        }
    }
    let worst = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    AngleReport {
        verdict: Verdict::from_residuals("wat", vec![("max_pair_deviation", worst)], tol),
        pair_deviations: pairs,
        triple_deviations: Vec::new(),
    }
}

fn triple_test(criterion: &str, s: &SpectralData, tol: f64, conjugate_rhs: bool) -> AngleReport {
    let gx = gram(&s.x_vecs);
    let gy = gram(&s.y_vecs);
    let mut triples = Vec::new();
    for i in 0..s.n {
        for j in i..s.n {
            for k in j..s.n {
                let lhs = triple(&gx, i, j, k);
                let rhs = triple(&gy, i, j, k);
                let rhs = if conjugate_rhs { rhs.conj() } else { rhs };
                let scale = TRIPLE_FLOOR.max(lhs.norm()).max(rhs.norm());
                triples.push(((i, j, k), (lhs - rhs).norm() / scale));
            }
        }
    }
    let worst = triples.iter().map(|t| t.1).fold(0.0, f64::max);
    AngleReport {
        verdict: Verdict::from_residuals(criterion, vec![("max_triple_deviation", worst)], tol),
        pair_deviations: Vec::new(),
        triple_deviations: triples,
    }
}

/// Strong angle test: `<x_i,x_j><x_j,x_k><x_k,x_i>` equals the conjugate of
/// the same product over the `y` system, for all `i <= j <= k`.
pub fn sat(s: &SpectralData, tol: f64) -> AngleReport {
    triple_test("sat", s, tol, true)
}

/// Linear strong angle test: as [`sat`] without the conjugation.
pub fn lsat(s: &SpectralData, tol: f64) -> AngleReport {
    triple_test("lsat", s, tol, false)
}

/// 3x3 determinant criterion
/// `det X*X = (1 - |<x1,x2>|^2)(1 - |<x2,x3>|^2)(1 - |<x3,x1>|^2)`.
///
/// Only defined when no two eigenvectors are orthogonal. Each call also
/// verifies the identities `det X*X = |<x_i,y_i>|^2 (1 - |<x_j,x_k>|^2)` and
/// `det Y*Y = |<x_i,y_i>|^2 (1 - |<y_j,y_k>|^2)` for `{i,j,k} = {1,2,3}`.
pub fn det_criterion_3(s: &SpectralData, tol: f64) -> Result<Verdict> {
    if s.n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: s.n });
    }
    let gx = gram(&s.x_vecs);
    let gy = gram(&s.y_vecs);
    for i in 0..3 {
        for j in i + 1..3 {
            let value = gx[i][j].norm();
            if value < ORTHOGONALITY_CUTOFF {
                return Err(Error::OrthogonalEigenvectors { i: i + 1, j: j + 1, value });
            }
        }
    }
    let x = s.x_matrix();
    let y = s.y_matrix();
    let det_xx = (&x.adjoint() * &x).determinant().re;
    let det_yy = (&y.adjoint() * &y).determinant().re;

    let mut identity_residual: f64 = 0.0;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let duality = inner(&s.x_vecs[i], &s.y_vecs[i]).norm_sqr();
        identity_residual = identity_residual
            .max((det_xx - duality * (1.0 - gx[j][k].norm_sqr())).abs())
            .max((det_yy - duality * (1.0 - gy[j][k].norm_sqr())).abs());
    }
    if !(identity_residual <= IDENTITY_CHECK_TOL) {
        return Err(Error::IdentityCheck(identity_residual));
    }

    let product: f64 = [(0, 1), (1, 2), (2, 0)].iter().map(|&(i, j)| 1.0 - gx[i][j].norm_sqr()).product();
    Ok(Verdict::from_residuals("det_criterion_3", vec![("determinant", (det_xx - product).abs())], tol))
}

/// Everything the angle criteria say about one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSuite {
    pub spectral: SpectralData,
    pub wat: AngleReport,
    pub sat: AngleReport,
    pub lsat: AngleReport,
    /// `n = 3` only; `Err` when the determinant criterion is inapplicable.
    pub det3: Option<std::result::Result<Verdict, Error>>,
}

impl AngleSuite {
    /// SAT decides UECSM for distinct spectra; WAT and LSAT are diagnostics
    /// (WAT is also decisive at n <= 3).
    pub fn uecsm(&self) -> bool {
        self.sat.verdict.pass
    }
}

/// Eigensystem followed by all angle tests. Propagates `DegenerateSpectrum`,
/// meaning the angle tests do not apply.
pub fn angle_suite(t: &CMatrix, tol: f64) -> Result<AngleSuite> {
    let spectral = eigensystem(t, DEFAULT_DISTINCT_TOL)?;
    let det3 = (spectral.n == 3).then(|| det_criterion_3(&spectral, tol));
    Ok(AngleSuite {
        wat: wat(&spectral, tol),
        sat: sat(&spectral, tol),
        lsat: lsat(&spectral, tol),
        det3,
        spectral,
    })
}
