//! Dense square complex matrices and words in two non-commuting letters.
//!
//! Everything here is sized for the tiny matrices this crate deals with
//! (n at most a handful), so storage is a flat row-major `Vec` and the
//! algorithms are the textbook ones.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Square `n x n` complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Self { n, entries: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from a row-major entry list; fails on wrong length or
    /// non-finite entries.
    pub fn from_vec(n: usize, entries: Vec<C64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::from_vec(n, entries)
    }

    /// Convenience constructor for matrices with real entries.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let n = cols.len();
        if let Some(bad) = cols.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::from_vec(n, (0..n * n).map(|k| cols[k % n][k / n]).collect())
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.n).map(<[C64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(C64::conj).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Determinant. Cofactor expansion for n <= 4, LU with partial pivoting
    /// beyond that.
    pub fn determinant(&self) -> C64 {
        if self.n <= 4 {
            let idx: Vec<usize> = (0..self.n).collect();
            cofactor_det(self, 0, &idx)
        } else {
            match Lu::factor(self) {
                Some(lu) => lu.determinant(),
                None => ZERO,
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = Lu::factor(self).ok_or(Error::Singular)?;
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            cols.push(lu.solve(&e));
        }
        let inv = Self::from_columns(&cols)?;
        if !inv.is_finite() {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self - &self.transpose()).frobenius_norm() <= tol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

fn cofactor_det(m: &CMatrix, row: usize, cols: &[usize]) -> C64 {
    match cols.len() {
        1 => m[(row, cols[0])],
        2 => m[(row, cols[0])] * m[(row + 1, cols[1])] - m[(row, cols[1])] * m[(row + 1, cols[0])],
        _ => {
            let mut acc = ZERO;
            for (k, &c) in cols.iter().enumerate() {
                let minor: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = m[(row, c)] * cofactor_det(m, row + 1, &minor);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// LU factorization with partial pivoting (row-major, in place).
pub(crate) struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Returns `None` when an exactly zero pivot is hit.
    pub(crate) fn factor(m: &CMatrix) -> Option<Self> {
        Self::factor_with_floor(m, 0.0)
    }

    /// Zero (or tiny) pivots are replaced with `floor`; used by inverse
    /// iteration where the shifted matrix is singular on purpose.
    pub(crate) fn factor_with_floor(m: &CMatrix, floor: f64) -> Option<Self> {
        let n = m.n;
        let mut lu = m.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[a * n + k].norm().total_cmp(&lu[b * n + k].norm()))
                .unwrap();
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            if lu[k * n + k].norm() <= floor {
                if floor == 0.0 {
                    return None;
                }
                lu[k * n + k] = C64::new(floor, 0.0);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    let t = factor * lu[k * n + j];
                    lu[i * n + j] -= t;
                }
            }
        }
        Some(Self { n, lu, perm, swaps })
    }

    pub(crate) fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i * n + j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    fn determinant(&self) -> C64 {
        let d: C64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.n + j]
    }
}

// The operator impls panic on a dimension mismatch; use `mul`/`add` for a
// checked variant.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix sum");
        CMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix difference");
        CMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        write!(f, "]")
    }
}

/// Checked matrix product.
pub fn mul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.check_same(b)?;
    Ok(a * b)
}

pub fn add(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.check_same(b)?;
    Ok(a + b)
}

/// `A B - B A`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    &(a * b) - &(b * a)
}

/// Standard inner product, linear in the first slot: `<u, v> = sum u_j conj(v_j)`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

pub fn normalized(v: &[C64]) -> Vec<C64> {
    let s = vec_norm(v);
    v.iter().map(|z| z / s).collect()
}

/// A letter of the two-symbol alphabet: `X` stands for the matrix, `Y` for
/// its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    fn symbol(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A word in `x` and `y`, stored as maximal runs `(letter, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    runs: Vec<(Letter, u32)>,
}

impl Word {
    /// Builds a word from runs. Zero exponents are rejected and adjacent runs
    /// of the same letter are merged.
    pub fn new(runs: &[(Letter, u32)]) -> Result<Self> {
        let mut merged: Vec<(Letter, u32)> = Vec::with_capacity(runs.len());
        for &(letter, exp) in runs {
            if exp == 0 {
                return Err(Error::Parse("word exponents must be >= 1".into()));
            }
            match merged.last_mut() {
                Some((l, e)) if *l == letter => *e += exp,
                _ => merged.push((letter, exp)),
            }
        }
        if merged.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        Ok(Self { runs: merged })
    }

    /// Parses words such as `x^2y^2xy` or `x2y2xy`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut runs = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'x' | 'X' => Letter::X,
                'y' | 'Y' => Letter::Y,
                other => return Err(Error::Parse(format!("unexpected symbol {other:?} in word {s:?}"))),
            };
            if chars.peek() == Some(&'^') {
                chars.next();
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let exp = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?
            };
            runs.push((letter, exp));
        }
        Self::new(&runs)
    }

    pub fn runs(&self) -> &[(Letter, u32)] {
        &self.runs
    }

    /// Total number of letters.
    pub fn degree(&self) -> u32 {
        self.runs.iter().map(|&(_, e)| e).sum()
    }

    pub fn reverse(&self) -> Self {
        Self { runs: self.runs.iter().rev().copied().collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(l, e) in &self.runs {
            if e == 1 {
                write!(f, "{}", l.symbol())?;
            } else {
                write!(f, "{}^{}", l.symbol(), e)?;
            }
        }
        Ok(())
    }
}

/// Substitutes `x` and `y` into the word and multiplies left to right.
pub fn evaluate_word(w: &Word, x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    x.check_same(y)?;
    let mut acc = CMatrix::identity(x.n());
    for &(letter, exp) in w.runs() {
        let m = match letter {
            Letter::X => x,
            Letter::Y => y,
        };
        for _ in 0..exp {
            acc = &acc * m;
        }
    }
    Ok(acc)
}

/// `tr w(T, T*)`.
pub fn word_trace(w: &Word, t: &CMatrix) -> C64 {
    evaluate_word(w, t, &t.adjoint()).expect("T and T* share a dimension").trace()
}
