//! Canonical numerators and denominators of a continued fraction.
//!
//! For `b0 + K(a(n)/b(n))` the wall recurrence is
//!
//! ```text
//! P(n) = b(n) P(n-1) + a(n) P(n-2),   P(-1) = 1, P(0) = b0
//! Q(n) = b(n) Q(n-1) + a(n) Q(n-2),   Q(-1) = 0, Q(0) = 1
//! ```
//!
//! and the approximants are the projective points `[P(n) : Q(n)]`.  The
//! module deliberately works projectively: for the fractions in this crate
//! the approximant *values* need not converge while `P` and `Q` separately
//! do along residue classes, so `[P : Q]` is the honest object.

use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::Complex64;

/// Magnitude at which a renormalizing run rescales the working pair.
pub const RENORM_THRESHOLD: f64 = 1e100;

/// Magnitude treated as overflow when renormalization is off.
const OVERFLOW_LIMIT: f64 = 1e300;

/// A continued fraction `b0 + K_{n>=1} (a(n) / b(n))`.
#[derive(Clone, Debug)]
pub struct CfSpec {
    b0: Complex64,
    a: Seq,
    b: Seq,
}

impl CfSpec {
    pub fn new(b0: Complex64, a: Seq, b: Seq) -> Self {
        Self { b0, a, b }
    }

    pub fn b0(&self) -> Complex64 {
        self.b0
    }

    /// Partial numerator `a(n)`, `n >= 1`.
    pub fn a_at(&self, n: u64) -> Complex64 {
        self.a.at(n)
    }

    /// Partial denominator `b(n)`, `n >= 1`.
    pub fn b_at(&self, n: u64) -> Complex64 {
        self.b.at(n)
    }

    /// The `k`-th tail `K_{n>=k+1} (a(n)/b(n))` as its own fraction (integer
    /// part zero).
    pub fn tail(&self, k: u64) -> CfSpec {
        let a = self.a.clone();
        let b = self.b.clone();
        CfSpec {
            b0: Complex64::new(0.0, 0.0),
            a: Seq::new(move |n| a.at(n + k)),
            b: Seq::new(move |n| b.at(n + k)),
        }
    }

    /// Equivalence transform by nonzero scale factors `c(n)` (`c(0) = 1`):
    /// `a'(n) = c(n) c(n-1) a(n)`, `b'(n) = c(n) b(n)`.  Approximants are
    /// unchanged.  Zero factors are rejected for `n <= check_depth`; deeper
    /// zeros surface later as [`Error::ZeroPartialNumerator`].
    pub fn equivalence_transform(&self, c: Seq, check_depth: u64) -> Result<CfSpec> {
        for n in 1..=check_depth {
            if c.at(n) == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroScaleFactor { n });
            }
        }
        let a = self.a.clone();
        let b = self.b.clone();
        let ca = c.clone();
        Ok(CfSpec {
            b0: self.b0,
            a: Seq::new(move |n| {
                let prev = if n == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    ca.at(n - 1)
                };
                ca.at(n) * prev * a.at(n)
            }),
            b: Seq::new(move |n| c.at(n) * b.at(n)),
        })
    }

    /// Runs the wall recurrence through index `depth`.
    ///
    /// With `renormalize` set, whenever the working pair exceeds
    /// [`RENORM_THRESHOLD`] both rows are divided by the largest magnitude and
    /// the natural log of the factor is accumulated; each stored row keeps the
    /// accumulated exponent it was computed under, so
    /// `true P(n) = P(n) * exp(log_scale(n))` and ratios within a row are
    /// exact.  Without it, exceeding `1e300` is an [`Error::Overflow`].
    pub fn approximants(&self, depth: u64, renormalize: bool) -> Result<ConvergentTable> {
        let len = depth as usize + 2; // indices -1..=depth
        let mut p = Vec::with_capacity(len);
        let mut q = Vec::with_capacity(len);
        let mut log_scale = vec![0.0; len];
        p.push(Complex64::new(1.0, 0.0));
        q.push(Complex64::new(0.0, 0.0));
        p.push(self.b0);
        q.push(Complex64::new(1.0, 0.0));

        let mut acc = 0.0_f64;
        // working pair, possibly rescaled independently of the stored rows
        let (mut p2, mut q2) = (p[0], q[0]);
        let (mut p1, mut q1) = (p[1], q[1]);
        for n in 1..=depth {
            let a = self.a.at(n);
            let b = self.b.at(n);
            if a == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroPartialNumerator { n });
            }
            let pn = b * p1 + a * p2;
            let qn = b * q1 + a * q2;
            let mag = pn.norm().max(qn.norm());
            if !mag.is_finite() {
                return Err(Error::Overflow { n });
            }
            p.push(pn);
            q.push(qn);
            log_scale[n as usize + 1] = acc;
            p2 = p1;
            q2 = q1;
            p1 = pn;
            q1 = qn;
            if renormalize {
                if mag > RENORM_THRESHOLD {
                    let inv = 1.0 / mag;
                    p1 *= inv;
                    q1 *= inv;
                    p2 *= inv;
                    q2 *= inv;
                    acc += mag.ln();
                }
            } else if mag > OVERFLOW_LIMIT {
                return Err(Error::Overflow { n });
            }
        }
        Ok(ConvergentTable {
            p,
            q,
            log_scale,
            renormalized: renormalize,
        })
    }
}

/// Computed wall of a continued fraction, indices `-1..=depth`.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    p: Vec<Complex64>,
    q: Vec<Complex64>,
    log_scale: Vec<f64>,
    renormalized: bool,
}

impl ConvergentTable {
    /// Largest stored index.
    pub fn depth(&self) -> i64 {
        self.p.len() as i64 - 2
    }

    fn slot(&self, n: i64) -> Result<usize> {
        if n < -1 || n > self.depth() {
            Err(Error::IndexOutOfRange {
                n,
                max: self.depth(),
            })
        } else {
            Ok((n + 1) as usize)
        }
    }

    pub fn p_at(&self, n: i64) -> Result<Complex64> {
        Ok(self.p[self.slot(n)?])
    }

    pub fn q_at(&self, n: i64) -> Result<Complex64> {
        Ok(self.q[self.slot(n)?])
    }

    /// Accumulated rescaling exponent for row `n`:
    /// `true P(n) = p_at(n) * exp(log_scale_at(n))`.  All zero when the run
    /// did not renormalize.
    pub fn log_scale_at(&self, n: i64) -> Result<f64> {
        Ok(self.log_scale[self.slot(n)?])
    }

    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// Approximant `[P(n) : Q(n)]`.
    pub fn value_at(&self, n: i64) -> Result<ProjectivePoint> {
        let s = self.slot(n)?;
        Ok(ProjectivePoint::new(self.p[s], self.q[s]))
    }

    /// `P(n) Q(n-1) - P(n-1) Q(n)`; equals `(-1)^(n-1) * prod_{k<=n} a(k)`
    /// when the rows share a scale (always true unnormalized).
    pub fn det_at(&self, n: i64) -> Result<Complex64> {
        let s = self.slot(n)?;
        let s1 = self.slot(n - 1)?;
        Ok(self.p[s] * self.q[s1] - self.p[s1] * self.q[s])
    }
}

/// A point `[p : q]` of the projective line, i.e. the extended plane.
/// `[p : 0]` is the point at infinity; `[0 : 0]` is not a point and only
/// occurs as the degenerate output of a failed computation.
#[derive(Clone, Copy, Debug)]
pub struct ProjectivePoint {
    pub p: Complex64,
    pub q: Complex64,
}

impl ProjectivePoint {
    pub fn new(p: Complex64, q: Complex64) -> Self {
        Self { p, q }
    }

    pub fn from_value(v: Complex64) -> Self {
        Self::new(v, Complex64::new(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// The affine value `p/q`, or `None` for the point at infinity
    /// (`|q| <= 1e-14 |p|`).
    pub fn ratio(&self) -> Option<Complex64> {
        if self.q.norm() <= 1e-14 * self.p.norm() {
            None
        } else {
            Some(self.p / self.q)
        }
    }

    /// Scale-free equality: `|p q' - p' q| <= tol * max(|p|,|q|) * max(|p'|,|q'|)`.
    pub fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        let cross = (self.p * other.q - other.p * self.q).norm();
        cross <= tol * self.p.norm().max(self.q.norm()) * other.p.norm().max(other.q.norm())
    }

    /// Chordal distance on the sphere, normalized to `[0, 1]`:
    /// `|p q' - p' q| / (sqrt(|p|^2+|q|^2) sqrt(|p'|^2+|q'|^2))`.
    pub fn chordal(&self, other: &Self) -> f64 {
        let cross = (self.p * other.q - other.p * self.q).norm();
        let n1 = (self.p.norm_sqr() + self.q.norm_sqr()).sqrt();
        let n2 = (other.p.norm_sqr() + other.q.norm_sqr()).sqrt();
        cross / (n1 * n2)
    }
}

/// Number of pairwise-distinct points at chordal separation `> sep`.
pub fn count_distinct(points: &[ProjectivePoint], sep: f64) -> usize {
    let mut reps: Vec<&ProjectivePoint> = Vec::new();
    for pt in points {
        if reps.iter().all(|r| r.chordal(pt) > sep) {
            reps.push(pt);
        }
    }
    reps.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Seq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_seq() -> Seq {
        Seq::constant(c(1.0, 0.0))
    }

    #[test]
    fn fibonacci_ratios() {
        let cf = CfSpec::new(c(1.0, 0.0), one_seq(), one_seq());
        let t = cf.approximants(4, false).unwrap();
        let expect = [1.0, 2.0, 1.5, 5.0 / 3.0, 1.6];
        for (n, e) in expect.iter().enumerate() {
            let v = t.value_at(n as i64).unwrap().ratio().unwrap();
            assert!((v.re - e).abs() < 1e-15, "n={n}");
            assert_eq!(v.im, 0.0);
        }
        let v2 = t.value_at(2).unwrap();
        assert_eq!((v2.p.re, v2.q.re), (3.0, 2.0));
    }

    #[test]
    fn period_three_cycle() {
        // a = -1, b = 1: approximants cycle -1, inf, 0
        let cf = CfSpec::new(c(0.0, 0.0), Seq::constant(c(-1.0, 0.0)), one_seq());
        let t = cf.approximants(9, false).unwrap();
        for k in 0..3 {
            let base = 3 * k + 1;
            assert_eq!(t.value_at(base).unwrap().ratio().unwrap(), c(-1.0, 0.0));
            assert!(t.value_at(base + 1).unwrap().ratio().is_none());
            assert_eq!(t.value_at(base + 2).unwrap().ratio().unwrap(), c(0.0, 0.0));
        }
        let v3 = t.value_at(3).unwrap();
        assert_eq!((v3.p, v3.q), (c(0.0, 0.0), c(-1.0, 0.0)));
    }

    #[test]
    fn determinant_identity_small() {
        let cf = CfSpec::new(c(1.0, 0.0), one_seq(), one_seq());
        let t = cf.approximants(10, false).unwrap();
        for n in 0..=10 {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(t.det_at(n).unwrap(), c(sign, 0.0), "n={n}");
        }
    }

    #[test]
    fn tail_composes_with_first_steps() {
        let cf = CfSpec::new(c(1.0, 0.0), one_seq(), one_seq());
        let tail = cf.tail(2);
        let tt = tail.approximants(20, false).unwrap();
        let ot = cf.approximants(22, false).unwrap();
        // wall matrix of the first two steps: [[b0,1],[1,0]] D1 D2
        // with D = [[b,1],[a,0]]; here all entries build from 1s
        let (b0, a1, b1, a2, b2) = (
            cf.b0(),
            cf.a_at(1),
            cf.b_at(1),
            cf.a_at(2),
            cf.b_at(2),
        );
        // [[b0,1],[1,0]] * [[b1,1],[a1,0]] = [[b0 b1 + a1, b0],[b1, 1]]
        let (m00, m01, m10, m11) = (b0 * b1 + a1, b0, b1, c(1.0, 0.0));
        // right-multiply by D2
        let w = (
            m00 * b2 + m01 * a2,
            m00,
            m10 * b2 + m11 * a2,
            m10,
        );
        // the tail table seeds its own wall with [[0,1],[1,0]], so the
        // composition picks up one extra column swap
        for n in 0..=20 {
            let tv = tt.value_at(n).unwrap();
            let mapped = ProjectivePoint::new(w.1 * tv.p + w.0 * tv.q, w.3 * tv.p + w.2 * tv.q);
            let ov = ot.value_at(n + 2).unwrap();
            assert!(mapped.eq_tol(&ov, 1e-12), "n={n}");
        }
    }

    #[test]
    fn zero_partial_numerator_rejected() {
        let cf = CfSpec::new(c(0.0, 0.0), Seq::constant(c(0.0, 0.0)), one_seq());
        assert!(matches!(
            cf.approximants(3, false),
            Err(Error::ZeroPartialNumerator { n: 1 })
        ));
    }

    #[test]
    fn equivalence_transform_preserves_approximants() {
        let cf = CfSpec::new(
            c(0.5, 0.25),
            Seq::new(|n| c(1.0 + 0.3 * n as f64, 0.2)),
            Seq::new(|n| c(0.7, -0.1 * n as f64)),
        );
        let scale = Seq::new(|n| c(0.3 + 0.1 * (n % 5) as f64, 0.4));
        let tr = cf.equivalence_transform(scale, 64).unwrap();
        let t0 = cf.approximants(30, false).unwrap();
        let t1 = tr.approximants(30, false).unwrap();
        for n in 0..=30 {
            assert!(
                t0.value_at(n).unwrap().eq_tol(&t1.value_at(n).unwrap(), 1e-11),
                "n={n}"
            );
        }
    }

    #[test]
    fn equivalence_transform_rejects_zero_scale() {
        let cf = CfSpec::new(c(0.0, 0.0), one_seq(), one_seq());
        let scale = Seq::new(|n| if n == 5 { c(0.0, 0.0) } else { c(1.0, 0.0) });
        assert!(matches!(
            cf.equivalence_transform(scale, 64),
            Err(Error::ZeroScaleFactor { n: 5 })
        ));
    }

    #[test]
    fn renormalized_run_matches_plain_run() {
        // Rogers-Ramanujan at q = 2: a(n) = 2^n explodes superexponentially
        let cf = CfSpec::new(
            c(1.0, 0.0),
            Seq::new(|n| c(2.0f64.powi(n as i32), 0.0)),
            one_seq(),
        );
        let plain = cf.approximants(40, false).unwrap();
        let renorm = cf.approximants(40, true).unwrap();
        for n in 0..=40 {
            assert!(
                plain
                    .value_at(n)
                    .unwrap()
                    .eq_tol(&renorm.value_at(n).unwrap(), 1e-12),
                "n={n}"
            );
        }
    }

    #[test]
    fn renormalization_engages_and_plain_overflows() {
        let cf = CfSpec::new(
            c(1.0, 0.0),
            Seq::new(|n| c(2.0f64.powi(n as i32), 0.0)),
            one_seq(),
        );
        assert!(matches!(
            cf.approximants(200, false),
            Err(Error::Overflow { .. })
        ));
        let t = cf.approximants(200, true).unwrap();
        assert!(t.log_scale_at(200).unwrap() > 0.0);
        assert!(t.p_at(200).unwrap().norm().is_finite());
        // stored rows exceed the threshold by at most one step factor,
        // here a(n) <= 2^201 ~ 3e60
        for n in 0..=200 {
            assert!(t.p_at(n).unwrap().norm() < 1e170);
        }
    }

    #[test]
    fn index_out_of_range() {
        let cf = CfSpec::new(c(1.0, 0.0), one_seq(), one_seq());
        let t = cf.approximants(3, false).unwrap();
        assert!(matches!(
            t.value_at(4),
            Err(Error::IndexOutOfRange { n: 4, max: 3 })
        ));
        assert!(t.value_at(-1).is_ok());
        assert!(matches!(t.value_at(-2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn chordal_distances() {
        let zero = ProjectivePoint::from_value(c(0.0, 0.0));
        let inf = ProjectivePoint::infinity();
        assert!((zero.chordal(&inf) - 1.0).abs() < 1e-15);
        assert!(zero.chordal(&zero) == 0.0);
        let near = ProjectivePoint::from_value(c(1e-9, 0.0));
        assert!(zero.chordal(&near) < 1e-8);
        assert_eq!(count_distinct(&[zero, inf, near], 1e-6), 2);
    }
}
