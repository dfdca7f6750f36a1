//! Generator-backed sequences.
//!
//! Coefficients of a continued fraction or recurrence are lazy functions of
//! the index, so deep tables never materialize more state than the caller
//! asks for.  A [`PerturbationSeq`] additionally declares how fast it decays:
//! a per-term bound and a closed-form tail sum.  The tail sum is what lets
//! infinite products and series truncate with a certificate instead of a
//! guess.

use crate::Complex64;
use std::sync::Arc;

/// A complex sequence `n -> terms(n)`, indexed from 1.
#[derive(Clone)]
pub struct Seq(Arc<dyn Fn(u64) -> Complex64 + Send + Sync>);

impl Seq {
    pub fn new(f: impl Fn(u64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(move |_| c)
    }

    pub fn at(&self, n: u64) -> Complex64 {
        (self.0)(n)
    }
}

impl std::fmt::Debug for Seq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Seq(<fn>)")
    }
}

/// An absolutely summable sequence together with its declared decay:
/// `|terms(n)| <= bound(n)` and `sum_{n > cut} |terms(n)| <= tail(cut)`.
///
/// The declaration is the caller's assertion; [`PerturbationSeq::spot_check`]
/// samples it, and the named constructors below are correct by construction.
#[derive(Clone)]
pub struct PerturbationSeq {
    terms: Seq,
    bound: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
    tail: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl PerturbationSeq {
    pub fn new(
        terms: Seq,
        bound: impl Fn(u64) -> f64 + Send + Sync + 'static,
        tail: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            terms,
            bound: Arc::new(bound),
            tail: Arc::new(tail),
        }
    }

    /// The identically zero perturbation.
    pub fn zero() -> Self {
        Self::new(Seq::constant(Complex64::new(0.0, 0.0)), |_| 0.0, |_| 0.0)
    }

    /// `c * r^n` for `0 < r < 1`.
    pub fn geometric(c: Complex64, r: f64) -> Self {
        assert!(r > 0.0 && r < 1.0, "geometric ratio must be in (0, 1)");
        let cn = c.norm();
        Self::new(
            Seq::new(move |n| c * r.powi(n as i32)),
            move |n| cn * r.powi(n as i32),
            move |cut| cn * r.powi(cut as i32 + 1) / (1.0 - r),
        )
    }

    /// `q^n` for `|q| < 1`.
    pub fn powers(q: Complex64) -> Self {
        let r = q.norm();
        assert!(r < 1.0, "powers base must satisfy |q| < 1");
        Self::new(
            Seq::new(move |n| q.powi(n as i32)),
            move |n| r.powi(n as i32),
            move |cut| {
                if r == 0.0 {
                    0.0
                } else {
                    r.powi(cut as i32 + 1) / (1.0 - r)
                }
            },
        )
    }

    /// `c / n^2`; tail sum uses `sum_{n > N} 1/n^2 < 1/N`.
    pub fn inverse_square(c: Complex64) -> Self {
        let cn = c.norm();
        Self::new(
            Seq::new(move |n| c / (n as f64 * n as f64)),
            move |n| cn / (n as f64 * n as f64),
            move |cut| {
                if cut == 0 {
                    cn * std::f64::consts::PI * std::f64::consts::PI / 6.0
                } else {
                    cn / cut as f64
                }
            },
        )
    }

    /// `1/q^ceil(n/2)` for `|q| > 1`: the pairwise-repeated geometric decay
    /// produced by rescaling the Rogers-Ramanujan fraction at `|q| > 1`.
    pub fn paired_inverse_powers(q: Complex64) -> Self {
        let r = 1.0 / q.norm();
        assert!(r < 1.0, "paired inverse powers need |q| > 1");
        let qi = 1.0 / q;
        Self::new(
            Seq::new(move |n| qi.powi(n.div_ceil(2) as i32)),
            move |n| r.powi(n.div_ceil(2) as i32),
            // terms n > cut: exponents ceil(n/2) >= ceil((cut+1)/2), each
            // exponent repeated at most twice
            move |cut| 2.0 * r.powi((cut + 1).div_ceil(2) as i32) / (1.0 - r),
        )
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.terms.at(n)
    }

    pub fn terms(&self) -> &Seq {
        &self.terms
    }

    pub fn bound(&self, n: u64) -> f64 {
        (self.bound)(n)
    }

    /// Declared bound on `sum_{n > cut} |terms(n)|`.
    pub fn tail(&self, cut: u64) -> f64 {
        (self.tail)(cut)
    }

    /// Samples `|terms(n)| <= bound(n)` for `n = 1..=cut`; `Err` carries the
    /// first offending index.
    pub fn spot_check(&self, cut: u64) -> Result<(), u64> {
        for n in 1..=cut {
            let t = self.at(n).norm();
            let b = self.bound(n);
            if t > b * (1.0 + 1e-12) + 1e-300 {
                return Err(n);
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for PerturbationSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PerturbationSeq(<fn>)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_dominates_partial_sums() {
        let s = PerturbationSeq::geometric(Complex64::new(1.0, 0.0), 0.5);
        // sum_{n > 3} 2^-n = 2^-3 = tail(3)
        let brute: f64 = (4..60).map(|n| s.at(n).norm()).sum();
        assert!(brute <= s.tail(3) + 1e-15);
        assert!((s.tail(3) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn inverse_square_tail_dominates() {
        let s = PerturbationSeq::inverse_square(Complex64::new(2.0, 0.0));
        let brute: f64 = (11..200_000).map(|n| s.at(n).norm()).sum();
        assert!(brute <= s.tail(10));
    }

    #[test]
    fn paired_inverse_powers_pattern() {
        let s = PerturbationSeq::paired_inverse_powers(Complex64::new(2.0, 0.0));
        assert!((s.at(1).re - 0.5).abs() < 1e-15);
        assert!((s.at(2).re - 0.5).abs() < 1e-15);
        assert!((s.at(3).re - 0.25).abs() < 1e-15);
        assert!((s.at(4).re - 0.25).abs() < 1e-15);
        let brute: f64 = (6..120).map(|n| s.at(n).norm()).sum();
        assert!(brute <= s.tail(5) + 1e-15);
    }

    #[test]
    fn spot_check_flags_a_lying_bound() {
        let lying = PerturbationSeq::new(
            Seq::constant(Complex64::new(1.0, 0.0)),
            |_| 0.1,
            |_| 0.0,
        );
        assert_eq!(lying.spot_check(8), Err(1));
        assert!(PerturbationSeq::zero().spot_check(8).is_ok());
    }
}
