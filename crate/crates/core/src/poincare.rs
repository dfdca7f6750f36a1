//! Linear recurrences of Poincare type whose characteristic roots are
//! distinct roots of unity.
//!
//! A recurrence `x(n+p) = sum_r a(n,r) x(n+r)` with coefficients converging
//! summably to limits `a(r)` inherits the behaviour of its limiting
//! recurrence when the characteristic roots `alpha(1), ..., alpha(p)` of
//! `t^p - a(p-1) t^(p-1) - ... - a(0)` are distinct roots of unity: every
//! residue class `x(mn+j)` converges, where `m` is the least common order.
//! The limits satisfy the limiting recurrence themselves and are a linear
//! combination `l(n) = sum_i c(i) alpha(i)^n`, so the whole limit vector is
//! pinned down by its first `p` entries.

use crate::error::{Error, Result};
use crate::matprod::CAUCHY_RUN;
use crate::multilimit::DEFAULT_K_MAX;
use crate::roots::RootOfUnity;
use crate::seq::PerturbationSeq;
use crate::Complex64;
use std::sync::Arc;

/// Iteration aborts once a state entry exceeds this magnitude.
const OVERFLOW_LIMIT: f64 = 1e280;

/// `x(n+p) = sum_{r<p} coeff(n, r) x(n+r)` for `n >= 0`, with declared
/// summable deviation from the limiting coefficients.
#[derive(Clone)]
pub struct PoincareRecurrence {
    p: usize,
    coeff: Arc<dyn Fn(u64, usize) -> Complex64 + Send + Sync>,
    limit_coeff: Vec<Complex64>,
    init: Vec<Complex64>,
    bound: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    tail: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for PoincareRecurrence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoincareRecurrence")
            .field("p", &self.p)
            .field("limit_coeff", &self.limit_coeff)
            .field("init", &self.init)
            .finish()
    }
}

impl PoincareRecurrence {
    /// `limit_coeff[r] = a(r)`, `init[r] = x(r)`; `bound(n)` dominates
    /// `sum_r |a(r) - a(n,r)|` with declared tail sums `tail(cut)`.
    pub fn new(
        coeff: impl Fn(u64, usize) -> Complex64 + Send + Sync + 'static,
        limit_coeff: Vec<Complex64>,
        init: Vec<Complex64>,
        bound: impl Fn(u64) -> f64 + Send + Sync + 'static,
        tail: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let p = limit_coeff.len();
        if p == 0 {
            return Err(Error::InvalidParameter("order must be at least 1".into()));
        }
        if init.len() != p {
            return Err(Error::InvalidParameter(format!(
                "need {p} initial values, got {}",
                init.len()
            )));
        }
        Ok(Self {
            p,
            coeff: Arc::new(coeff),
            limit_coeff,
            init,
            bound: Arc::new(bound),
            tail: Arc::new(tail),
        })
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn limit_coeff(&self) -> &[Complex64] {
        &self.limit_coeff
    }

    pub fn init(&self) -> &[Complex64] {
        &self.init
    }

    pub fn coeff_at(&self, n: u64, r: usize) -> Complex64 {
        (self.coeff)(n, r)
    }

    pub fn deviation_tail(&self, cut: u64) -> f64 {
        (self.tail)(cut)
    }

    /// Checks that the supplied roots really are the characteristic roots of
    /// the limiting recurrence: pairwise distinct, and the monic polynomial
    /// with these zeros matches `t^p - a(p-1) t^(p-1) - ... - a(0)` to 1e-12
    /// per coefficient.  Returns their least common order `m`.
    pub fn validate_roots(&self, roots: &[RootOfUnity]) -> Result<u64> {
        if roots.len() != self.p {
            return Err(Error::InvalidParameter(format!(
                "need {} characteristic roots, got {}",
                self.p,
                roots.len()
            )));
        }
        for (i, a) in roots.iter().enumerate() {
            for b in roots.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::InvalidParameter(
                        "characteristic roots must be distinct".into(),
                    ));
                }
            }
        }
        // expand prod (t - alpha_i); poly[k] is the coefficient of t^k
        let mut poly = vec![Complex64::new(0.0, 0.0); self.p + 1];
        poly[0] = Complex64::new(1.0, 0.0);
        let mut deg = 0;
        for root in roots {
            let v = root.value();
            poly[deg + 1] = poly[deg];
            for k in (1..=deg).rev() {
                let lower = poly[k - 1];
                poly[k] = lower - v * poly[k];
            }
            poly[0] = -v * poly[0];
            deg += 1;
        }
        for r in 0..self.p {
            let residual = (poly[r] + self.limit_coeff[r]).norm();
            if residual > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {r} of the characteristic polynomial differs from the declared limit by {residual:e}"
                )));
            }
        }
        let mut m = 1;
        for root in roots {
            m = crate::roots::lcm(m, root.order());
        }
        Ok(m)
    }

    /// `x(0), ..., x(n_max)`.
    pub fn iterate(&self, n_max: u64) -> Result<Vec<Complex64>> {
        let mut x = Vec::with_capacity(n_max as usize + 1);
        x.extend_from_slice(&self.init);
        while x.len() <= n_max as usize {
            let n = (x.len() - self.p) as u64;
            let mut next = Complex64::new(0.0, 0.0);
            for r in 0..self.p {
                next += self.coeff_at(n, r) * x[n as usize + r];
            }
            if !next.norm().is_finite() || next.norm() > OVERFLOW_LIMIT {
                return Err(Error::Overflow { n: n + self.p as u64 });
            }
            x.push(next);
        }
        x.truncate(n_max as usize + 1);
        Ok(x)
    }

    /// Limits `l(j) = lim_k x(mk + j)` for every residue class, plus the
    /// expansion coefficients `c` with `l(n) = sum_i c(i) alpha(i)^n`.
    ///
    /// Stops after the whole limit vector moved less than `tol` for three
    /// consecutive blocks, then verifies the limiting recurrence and the
    /// reconstruction from `c` to `10 * tol` over a full period.
    pub fn residue_class_limits(
        &self,
        roots: &[RootOfUnity],
        tol: f64,
        k_max: u64,
    ) -> Result<LimitVector> {
        let m = self.validate_roots(roots)?;
        debug_assert!(self.p as u64 <= m);
        self.spot_check_bound()?;
        let l = self.residue_iterate(m, tol, k_max)?;
        let c = solve_vandermonde(roots, &l[..self.p])?;
        let lv = LimitVector {
            m,
            l,
            c,
            roots: roots.to_vec(),
        };
        self.verify_limit_vector(&lv, 10.0 * tol)?;
        Ok(lv)
    }

    /// The declared bound is the caller's assertion; sample it on the first
    /// few indices rather than trusting it blindly.
    fn spot_check_bound(&self) -> Result<()> {
        for n in 0..32u64 {
            let observed: f64 = (0..self.p)
                .map(|r| (self.limit_coeff[r] - self.coeff_at(n, r)).norm())
                .sum();
            let declared = (self.bound)(n);
            if observed > declared * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::DeviationBoundViolated {
                    n,
                    observed,
                    bound: declared,
                });
            }
        }
        Ok(())
    }

    fn residue_iterate(&self, m: u64, tol: f64, k_max: u64) -> Result<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let mut state: Vec<Complex64> = self.init.clone(); // x(g-p..g)
        let mut cur = vec![zero; m as usize];
        let mut prev = vec![zero; m as usize];
        let mut run = 0u32;
        for k in 0..k_max {
            for j in 0..m {
                let g = k * m + j;
                let val = if g < self.p as u64 {
                    self.init[g as usize]
                } else {
                    let n = g - self.p as u64;
                    let mut next = zero;
                    for r in 0..self.p {
                        next += self.coeff_at(n, r) * state[r];
                    }
                    if !next.norm().is_finite() || next.norm() > OVERFLOW_LIMIT {
                        return Err(Error::Overflow { n: g });
                    }
                    state.rotate_left(1);
                    state[self.p - 1] = next;
                    next
                };
                cur[j as usize] = val;
            }
            if k >= 1 {
                let delta = cur
                    .iter()
                    .zip(prev.iter())
                    .map(|(c, p)| (c - p).norm())
                    .fold(0.0, f64::max);
                run = if delta < tol { run + 1 } else { 0 };
                if run >= CAUCHY_RUN {
                    return Ok(cur);
                }
            }
            prev.copy_from_slice(&cur);
        }
        Err(Error::NoConvergence { m, blocks: k_max })
    }

    fn verify_limit_vector(&self, lv: &LimitVector, tol: f64) -> Result<()> {
        let m = lv.m as usize;
        let mut worst = 0.0f64;
        for n in 0..m {
            let mut rhs = Complex64::new(0.0, 0.0);
            for r in 0..self.p {
                rhs += self.limit_coeff[r] * lv.l[(n + r) % m];
            }
            worst = worst.max((lv.l[(n + self.p) % m] - rhs).norm());
        }
        for j in 0..m {
            worst = worst.max((lv.l[j] - lv.reconstruct(j as i64)).norm());
        }
        if worst > tol {
            return Err(Error::MismatchBeyondTolerance {
                residual: worst,
                tol,
            });
        }
        Ok(())
    }
}

/// Solve `sum_i c(i) alpha(i)^j = l(j)` for `j = 0..p-1` by Gaussian
/// elimination with partial pivoting.
fn solve_vandermonde(roots: &[RootOfUnity], l: &[Complex64]) -> Result<Vec<Complex64>> {
    let p = roots.len();
    let mut aug = vec![vec![Complex64::new(0.0, 0.0); p + 1]; p];
    for (j, row) in aug.iter_mut().enumerate() {
        for (i, root) in roots.iter().enumerate() {
            row[i] = root.power_value(j as i64);
        }
        row[p] = l[j];
    }
    for col in 0..p {
        let (pivot_row, pivot_mag) = (col..p)
            .map(|r| (r, aug[r][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_mag < 1e-13 {
            return Err(Error::SingularVandermonde);
        }
        aug.swap(col, pivot_row);
        for r in (col + 1)..p {
            let factor = aug[r][col] / aug[col][col];
            for k in col..=p {
                let sub = factor * aug[col][k];
                aug[r][k] -= sub;
            }
        }
    }
    let mut c = vec![Complex64::new(0.0, 0.0); p];
    for col in (0..p).rev() {
        let mut acc = aug[col][p];
        for k in (col + 1)..p {
            acc -= aug[col][k] * c[k];
        }
        c[col] = acc / aug[col][col];
    }
    Ok(c)
}

/// Residue-class limits of a Poincare recurrence and their expansion over
/// the characteristic roots.
#[derive(Clone, Debug)]
pub struct LimitVector {
    m: u64,
    l: Vec<Complex64>,
    c: Vec<Complex64>,
    roots: Vec<RootOfUnity>,
}

impl LimitVector {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// `l(j)` for `0 <= j < m`.
    pub fn limits(&self) -> &[Complex64] {
        &self.l
    }

    /// Expansion coefficients over the characteristic roots.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    pub fn roots(&self) -> &[RootOfUnity] {
        &self.roots
    }

    /// `l(j)` extended to all integers by periodicity.
    pub fn limit_ext(&self, j: i64) -> Complex64 {
        self.l[j.rem_euclid(self.m as i64) as usize]
    }

    /// `sum_i c(i) alpha(i)^j`.
    pub fn reconstruct(&self, j: i64) -> Complex64 {
        self.roots
            .iter()
            .zip(self.c.iter())
            .map(|(root, c)| c * root.power_value(j))
            .sum()
    }
}

/// The order-two instance
/// `x(n) = (w1 + w2 + a(n-1)) x(n-1) - (w1 w2 + b(n)) x(n-2)`, `x(0) = u`,
/// `x(1) = v` (note the different index offsets on the two perturbations).
///
/// Beyond the generic residue-class limits this verifies the order-two
/// specifics: for even `m` with both roots primitive the limits flip sign
/// half a period on (`l(m/2 + j) = -l(j)`), and among any three consecutive
/// limits at most one vanishes.
pub fn order_two(
    w1: &RootOfUnity,
    w2: &RootOfUnity,
    a: &PerturbationSeq,
    b: &PerturbationSeq,
    u: Complex64,
    v: Complex64,
    tol: f64,
) -> Result<LimitVector> {
    if w1 == w2 {
        return Err(Error::EqualRoots);
    }
    if u == Complex64::new(0.0, 0.0) && v == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroInitialPair);
    }
    let wsum = w1.value() + w2.value();
    let wprod = w1.mul(w2).value();
    let (ac, bc) = (a.clone(), b.clone());
    // computing x(n+2): multiplier of x(n+1) carries a(n+1), multiplier of
    // x(n) carries b(n+2)
    let coeff = move |n: u64, r: usize| -> Complex64 {
        if r == 1 {
            wsum + ac.at(n + 1)
        } else {
            -(wprod + bc.at(n + 2))
        }
    };
    let (ab, bb) = (a.clone(), b.clone());
    let (at, bt) = (a.clone(), b.clone());
    let rec = PoincareRecurrence::new(
        coeff,
        vec![-wprod, wsum],
        vec![u, v],
        move |n| ab.bound(n + 1) + bb.bound(n + 2),
        move |cut| at.tail(cut + 1) + bt.tail(cut + 2),
    )?;
    let lv = rec.residue_class_limits(&[*w1, *w2], tol, DEFAULT_K_MAX)?;

    let m = lv.m;
    if m % 2 == 0 && w1.order() == m && w2.order() == m {
        for j in 0..(m / 2) as usize {
            let residual = (lv.l[j] + lv.l[j + (m / 2) as usize]).norm();
            if residual > 10.0 * tol {
                return Err(Error::MismatchBeyondTolerance {
                    residual,
                    tol: 10.0 * tol,
                });
            }
        }
    }
    for j in 0..m as i64 {
        let zeros = [j - 1, j, j + 1]
            .iter()
            .filter(|&&k| lv.limit_ext(k).norm() < tol)
            .count();
        if zeros >= 2 {
            return Err(Error::MismatchBeyondTolerance {
                residual: lv.limit_ext(j).norm(),
                tol,
            });
        }
    }
    Ok(lv)
}
