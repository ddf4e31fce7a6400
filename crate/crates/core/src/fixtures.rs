//! Named example matrices used throughout the tests, the CLI fixtures and
//! the Python smoke test.

use crate::matcore::{CMatrix, C64};
use crate::nilpotent4::NilpotentParams;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Nilpotent `(a,b,c,d,e,f) = (2, 9, 1, 0, e, 7)`; exactly `e = 6` is UECSM.
pub fn stump(e: f64) -> CMatrix {
    NilpotentParams::real(2.0, 9.0, 1.0, 0.0, e, 7.0).build_matrix()
}

/// `1 (+) [[0,2,0],[0,0,2],[0,0,0]]`: UECSM.
pub fn t1() -> CMatrix {
    let mut t = CMatrix::zeros(4);
    t[(0, 0)] = c(1.0, 0.0);
    t[(1, 2)] = c(2.0, 0.0);
    t[(2, 3)] = c(2.0, 0.0);
    t
}

/// `1 (+) [[0,1,0],[0,0,2],[0,0,0]]`: not UECSM, `Psi = (-12, 0, ..., 0)`.
pub fn t2() -> CMatrix {
    let mut t = CMatrix::zeros(4);
    t[(0, 0)] = c(1.0, 0.0);
    t[(1, 2)] = c(1.0, 0.0);
    t[(2, 3)] = c(2.0, 0.0);
    t
}

/// Integer 4x4 matrix passing the weak and linear strong angle tests while
/// failing to be UECSM.
pub fn balayan() -> CMatrix {
    CMatrix::from_real_rows([
        [5.0, 0.0, -1.0, 3.0],
        [2.0, 4.0, 1.0, 2.0],
        [2.0, -2.0, 6.0, -2.0],
        [0.0, -2.0, 1.0, 4.0],
    ])
}

/// An element of SU(2,2) obtained by indefinite Gram-Schmidt from a
/// Gaussian-integer seed.
pub fn su22_example() -> CMatrix {
    let s6 = 6f64.sqrt();
    let s23 = (2.0f64 / 3.0).sqrt();
    let rows = vec![
        vec![c(1.0, 0.5), c(0.0, 0.0), c(-1.0, 1.0) / (2.0 * s6), c(0.0, 1.0) / s6],
        vec![c(0.0, -0.5), c(0.0, 2.0), c(7.0, 5.0) / (2.0 * s6), c(0.0, -1.0) / s6],
        vec![c(-0.5, 0.5), c(1.0, -1.0), c(-1.0, -4.0) / s6, c(-s23, 0.0)],
        vec![c(0.0, 0.0), c(0.0, -1.0), c(-s23, -s23), c(s23, 0.0)],
    ];
    CMatrix::from_rows(&rows).expect("4x4 literal")
}

/// `Q diag(-1, 0, 1, 2) Q^{-1}` for `Q = su22_example()`, as printed.
pub fn su22_lsat_matrix() -> CMatrix {
    let rows = vec![
        vec![c(-10.0, 0.0), c(4.0, -6.0), c(-3.0, -11.0), c(0.0, 2.0)],
        vec![c(4.0, 6.0), c(-22.0, 0.0), c(-15.0, 17.0), c(-12.0, -2.0)],
        vec![c(3.0, -11.0), c(15.0, 17.0), c(28.0, 0.0), c(2.0, 6.0)],
        vec![c(0.0, 2.0), c(12.0, -2.0), c(2.0, -6.0), c(16.0, 0.0)],
    ];
    CMatrix::from_rows(&rows).expect("4x4 literal").scale_real(1.0 / 6.0)
}

pub const SU22_DIAGONAL: [f64; 4] = [-1.0, 0.0, 1.0, 2.0];

/// A 3x3 complex symmetric matrix.
pub fn symmetric3() -> CMatrix {
    CMatrix::from_rows(&[
        vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
        vec![c(0.0, 2.0), c(3.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
    ])
    .expect("3x3 literal")
}

/// A 4x4 complex symmetric matrix with distinct eigenvalues.
pub fn symmetric4() -> CMatrix {
    CMatrix::from_rows(&[
        vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(-1.0, 0.0)],
        vec![c(1.0, 1.0), c(0.0, -1.0), c(3.0, 0.0), c(0.0, 2.0)],
        vec![c(0.0, 0.0), c(3.0, 0.0), c(1.0, 0.0), c(1.0, -1.0)],
        vec![c(-1.0, 0.0), c(0.0, 2.0), c(1.0, -1.0), c(-2.0, 0.0)],
    ])
    .expect("4x4 literal")
}

/// Lower-triangular `[[0, 0, 0], [a, 1, 0], [b, 0, lambda]]`, the normal
/// form of a 3x3 matrix with a pair of orthogonal eigenvectors. `T*` has
/// eigenvectors `(conj a, 1, 0)` and `(conj b, 0, conj lambda)`.
pub fn orthogonal_pair_form(a: C64, b: C64, lambda: C64) -> CMatrix {
    CMatrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![a, c(1.0, 0.0), c(0.0, 0.0)],
        vec![b, c(0.0, 0.0), lambda],
    ])
    .expect("3x3 literal")
}

/// Every named fixture with its label and expected UECSM status.
pub fn named() -> Vec<(&'static str, CMatrix, bool)> {
    vec![
        ("stump_e4", stump(4.0), false),
        ("stump_e5", stump(5.0), false),
        ("stump_e6", stump(6.0), true),
        ("stump_e7", stump(7.0), false),
        ("t1", t1(), true),
        ("t2", t2(), false),
        ("su22_lsat", su22_lsat_matrix(), false),
        ("balayan", balayan(), false),
    ]
}
