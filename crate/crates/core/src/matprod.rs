//! Limits of infinite products of matrices that deviate summably from a
//! matrix of finite multiplicative order.
//!
//! If `M^m = I` and `sum_n |D(n) - M| < infinity`, the partial products taken
//! in blocks of `m` factors converge: each block is a small perturbation of
//! `M^m = I`, and the perturbations are absolutely summable.  Along arbitrary
//! indices the partial products need not converge at all; they settle into
//! `m` residue limits `F * M^j` (products growing to the right) or
//! `M^j * F` (growing to the left).

use crate::error::{Error, Result};
use crate::Complex64;
use std::sync::Arc;

/// Dense `p x p` complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    p: usize,
    e: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zero(p: usize) -> Self {
        assert!(p >= 1);
        Self {
            p,
            e: vec![Complex64::new(0.0, 0.0); p * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        let mut m = Self::zero(p);
        for i in 0..p {
            m.e[i * p + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let p = rows.len();
        assert!(rows.iter().all(|r| r.len() == p));
        Self {
            p,
            e: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.e[i * self.p + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.e[i * self.p + j] = v;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = Self::zero(p);
        for i in 0..p {
            for k in 0..p {
                let aik = self.e[i * p + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..p {
                    out.e[i * p + j] += aik * rhs.e[k * p + j];
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let mut out = self.clone();
        for (x, y) in out.e.iter_mut().zip(rhs.e.iter()) {
            *x -= *y;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let mut out = self.clone();
        for (x, y) in out.e.iter_mut().zip(rhs.e.iter()) {
            *x += *y;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for x in out.e.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut out = Self::identity(self.p);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Entrywise max-modulus norm.
    pub fn norm_inf(&self) -> f64 {
        self.e.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.p);
        (0..self.p)
            .map(|i| {
                (0..self.p)
                    .map(|j| self.e[i * self.p + j] * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

/// `|A - B|` in the entrywise max norm.
pub fn max_diff(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    a.sub(b).norm_inf()
}

/// Companion matrix of `t^p = a(p-1) t^(p-1) + ... + a(1) t + a(0)`:
/// top row `a(p-1) ... a(0)`, ones on the subdiagonal.
pub fn companion(coeffs: &[Complex64]) -> SquareMatrix {
    let p = coeffs.len();
    assert!(p >= 1);
    let mut m = SquareMatrix::zero(p);
    for (j, &c) in coeffs.iter().rev().enumerate() {
        m.set(0, j, c);
    }
    for i in 1..p {
        m.set(i, i - 1, Complex64::new(1.0, 0.0));
    }
    m
}

/// Least `k <= m_max` with `|M^k - I| <= tol`.
pub fn min_period(m: &SquareMatrix, m_max: u64, tol: f64) -> Result<u64> {
    let id = SquareMatrix::identity(m.dim());
    let mut acc = id.clone();
    for k in 1..=m_max {
        acc = acc.mul(m);
        if max_diff(&acc, &id) <= tol {
            return Ok(k);
        }
    }
    Err(Error::NoPeriodFound { m_max, tol })
}

/// A sequence `D(1), D(2), ...` close to a fixed finite-order `M`, with a
/// declared summable deviation: `|D(n) - M| <= bound(n)` and
/// `sum_{n > cut} bound(n) <= tail(cut)`.
#[derive(Clone)]
pub struct MatrixSeq {
    d: Arc<dyn Fn(u64) -> SquareMatrix + Send + Sync>,
    m: SquareMatrix,
    bound: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    tail: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    period: Option<u64>,
}

impl MatrixSeq {
    pub fn new(
        d: impl Fn(u64) -> SquareMatrix + Send + Sync + 'static,
        m: SquareMatrix,
        bound: impl Fn(u64) -> f64 + Send + Sync + 'static,
        tail: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            d: Arc::new(d),
            m,
            bound: Arc::new(bound),
            tail: Arc::new(tail),
            period: None,
        }
    }

    /// Declares the exact order of `M`, skipping the numeric search.
    pub fn with_period(mut self, m: u64) -> Self {
        self.period = Some(m);
        self
    }

    pub fn d_at(&self, n: u64) -> SquareMatrix {
        (self.d)(n)
    }

    pub fn limit_matrix(&self) -> &SquareMatrix {
        &self.m
    }

    pub fn bound(&self, n: u64) -> f64 {
        (self.bound)(n)
    }

    pub fn tail(&self, cut: u64) -> f64 {
        (self.tail)(cut)
    }
}

impl std::fmt::Debug for MatrixSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixSeq")
            .field("m", &self.m)
            .field("period", &self.period)
            .finish()
    }
}

/// Which side new factors multiply on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `... D(2) D(1)`
    Left,
    /// `D(1) D(2) ...`
    Right,
}

#[derive(Clone, Debug)]
pub struct ProductLimit {
    /// Limit of the partial products over whole blocks of `m` factors.
    pub f: SquareMatrix,
    /// `residue[j]` = limit of partial products with `km + j` factors:
    /// `F M^j` (right) or `M^j F` (left).
    pub residue: Vec<SquareMatrix>,
    /// Blocks consumed before the stopping rule fired.
    pub blocks: u64,
}

/// How many leading deviations are checked against the declared bound.
const BOUND_SPOT_CHECKS: u64 = 32;

/// Consecutive block-to-block agreements required before accepting a limit.
pub(crate) const CAUCHY_RUN: u32 = 3;

/// Limit of `prod D(n)` over whole blocks, plus the `m` residue limits.
///
/// Stops once `|F_(k+1) - F_k| < tol` for three consecutive blocks; a single
/// small step is not accepted because slowly drifting products can pause.
pub fn product_limit(
    seq: &MatrixSeq,
    direction: Direction,
    tol: f64,
    k_max: u64,
) -> Result<ProductLimit> {
    let m = match seq.period {
        Some(m) => m,
        None => min_period(&seq.m, 1000, 1e-9)?,
    };
    for n in 1..=BOUND_SPOT_CHECKS {
        let observed = max_diff(&seq.d_at(n), &seq.m);
        let bound = seq.bound(n);
        if observed > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::DeviationBoundViolated { n, observed, bound });
        }
    }

    let mut f = SquareMatrix::identity(seq.m.dim());
    let mut run = 0u32;
    for k in 0..k_max {
        let mut block = SquareMatrix::identity(seq.m.dim());
        for j in 1..=m {
            let d = seq.d_at(k * m + j);
            block = match direction {
                Direction::Right => block.mul(&d),
                Direction::Left => d.mul(&block),
            };
        }
        let next = match direction {
            Direction::Right => f.mul(&block),
            Direction::Left => block.mul(&f),
        };
        let delta = max_diff(&next, &f);
        f = next;
        run = if delta < tol { run + 1 } else { 0 };
        if run >= CAUCHY_RUN {
            let residue = (0..m)
                .map(|j| {
                    let mj = seq.m.pow(j);
                    match direction {
                        Direction::Right => f.mul(&mj),
                        Direction::Left => mj.mul(&f),
                    }
                })
                .collect();
            return Ok(ProductLimit {
                f,
                residue,
                blocks: k + 1,
            });
        }
    }
    Err(Error::NoConvergence { m, blocks: k_max })
}
