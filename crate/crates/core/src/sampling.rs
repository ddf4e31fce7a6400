//! Seeded random matrices: Haar-ish unitaries, integer and Gaussian samples.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matcore::{inner, vec_norm, CMatrix, C64};

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, |_, _| gaussian_complex(rng))
}

/// Real integer matrix with entries drawn uniformly from `lo..=hi`.
pub fn integer_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: i64, hi: i64) -> CMatrix {
    CMatrix::from_fn(n, |_, _| C64::new(rng.random_range(lo..=hi) as f64, 0.0))
}

/// Gaussian-integer vector with real and imaginary parts in `-r..=r`.
pub fn gaussian_integer_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, r: i64) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-r..=r) as f64, rng.random_range(-r..=r) as f64))
        .collect()
}

/// Random complex symmetric matrix with Gaussian entries.
pub fn symmetric_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n);
    CMatrix::from_fn(n, |i, j| if i <= j { g[(i, j)] } else { g[(j, i)] })
}

/// Orthonormalizes the columns of `m` in order (Gram-Schmidt applied twice
/// per column). `None` when a column is dependent on the earlier ones.
pub fn orthonormalize(m: &CMatrix) -> Option<CMatrix> {
    let n = m.n();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for _ in 0..2 {
            for q in &cols {
                let h = inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= h * qi;
                }
            }
        }
        let s = vec_norm(&v);
        if s < 1e-8 {
            return None;
        }
        cols.push(v.iter().map(|z| z / s).collect());
    }
    Some(CMatrix::from_columns(&cols).expect("square by construction"))
}

/// Unitary from orthonormalizing a Gaussian matrix. The implicit R factor
/// has a positive diagonal, so the result is Haar distributed.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        if let Some(u) = orthonormalize(&gaussian_matrix(rng, n)) {
            return u;
        }
    }
}
