//! Exact arithmetic on roots of unity.
//!
//! A root is stored as a reduced fraction of a full turn, so `exp(2*pi*i*3/8)`
//! is `3/8` and equality, powers and products are integer arithmetic.  Only
//! the final conversion to `Complex64` rounds.  This matters: the limit
//! formulas in [`crate::multilimit`] and [`crate::qseries`] cancel long sums
//! of root powers exactly, and computing those powers by repeated floating
//! multiplication would leak the cancellation.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// `exp(2*pi*i * num/den)` with `num/den` reduced and `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    /// Reduces `num/den` turns into canonical form.  Negative `num` wraps
    /// around the circle; `den` must be positive.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameter(format!(
                "turn denominator must be positive, got {den}"
            )));
        }
        let den_u = den as u64;
        let num_u = num.rem_euclid(den) as u64;
        let g = gcd(num_u, den_u);
        Ok(Self {
            num: num_u / g,
            den: den_u / g,
        })
    }

    /// The root `1` (zero turns).
    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    /// Primitive `m`-th root `exp(2*pi*i/m)`.
    pub fn primitive(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        Ok(Self {
            num: if m == 1 { 0 } else { 1 },
            den: if m == 1 { 1 } else { m },
        })
    }

    /// Numerator of the reduced turn fraction.
    pub fn turn_num(&self) -> u64 {
        self.num
    }

    /// Denominator of the reduced turn fraction.
    pub fn turn_den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order: least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = lcm(self.den, other.den);
        let num = (self.num * (den / self.den) + other.num * (den / other.den)) % den;
        let g = gcd(num, den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// Integer power, exponent of either sign.
    pub fn pow(&self, k: i64) -> Self {
        let den = self.den as i128;
        let num = (self.num as i128 * k as i128).rem_euclid(den);
        let g = gcd(num as u64, self.den);
        Self {
            num: num as u64 / g,
            den: self.den / g,
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// Embeds into the plane.  Quarter-turn multiples are returned exactly so
    /// that e.g. `-1` has no spurious imaginary dust.
    pub fn value(&self) -> Complex64 {
        let quarter = self.num as u128 * 4;
        if quarter % self.den as u128 == 0 {
            return match (quarter / self.den as u128) % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        let theta = 2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64);
        let (s, c) = theta.sin_cos();
        Complex64::new(c, s)
    }

    /// `self^k` as a complex number; exponent arithmetic stays exact.
    pub fn power_value(&self, k: i64) -> Complex64 {
        self.pow(k).value()
    }

    /// Least `m` with `w1^m = w2^m = 1`.
    pub fn common_order(w1: &Self, w2: &Self) -> u64 {
        lcm(w1.order(), w2.order())
    }
}

/// Writes a distinct pair as `w1 = exp(2*pi*i*a/m)`, `w2 = exp(2*pi*i*b/m)`
/// with `0 <= a < b < m` and `m` their common order.  Swapping the roots to
/// order the exponents is harmless for every consumer: the fraction, the
/// common order and the rank only depend on the unordered pair.
pub fn canonical_exponents(w1: &RootOfUnity, w2: &RootOfUnity) -> Result<(u64, u64, u64)> {
    if w1 == w2 {
        return Err(Error::EqualRoots);
    }
    let m = RootOfUnity::common_order(w1, w2);
    let a = w1.num * (m / w1.den);
    let b = w2.num * (m / w2.den);
    Ok(if a < b { (a, b, m) } else { (b, a, m) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_wrapping() {
        let w = RootOfUnity::new(10, 8).unwrap();
        assert_eq!((w.turn_num(), w.turn_den()), (1, 4));
        let w = RootOfUnity::new(-1, 6).unwrap();
        assert_eq!((w.turn_num(), w.turn_den()), (5, 6));
        assert!(RootOfUnity::new(3, 0).is_err());
    }

    #[test]
    fn order_of_reduced_fraction() {
        assert_eq!(RootOfUnity::new(2, 6).unwrap().order(), 3);
        assert_eq!(RootOfUnity::one().order(), 1);
        assert_eq!(RootOfUnity::primitive(12).unwrap().order(), 12);
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(RootOfUnity::new(1, 2).unwrap().value(), Complex64::new(-1.0, 0.0));
        assert_eq!(RootOfUnity::new(1, 4).unwrap().value(), Complex64::new(0.0, 1.0));
        assert_eq!(RootOfUnity::new(3, 4).unwrap().value(), Complex64::new(0.0, -1.0));
        assert_eq!(RootOfUnity::one().value(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn sixth_root_value() {
        let w = RootOfUnity::primitive(6).unwrap().value();
        assert!((w.re - 0.5).abs() < 1e-15);
        assert!((w.im - (3.0f64).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn negative_powers_wrap() {
        let w = RootOfUnity::primitive(6).unwrap();
        assert_eq!(w.pow(-1), RootOfUnity::new(5, 6).unwrap());
        assert_eq!(w.pow(6), RootOfUnity::one());
        assert_eq!(w.pow(-7), w.pow(5));
        assert_eq!(w.inv().mul(&w), RootOfUnity::one());
    }

    #[test]
    fn canonical_pair_orders_exponents() {
        let w1 = RootOfUnity::new(5, 6).unwrap();
        let w2 = RootOfUnity::new(1, 6).unwrap();
        assert_eq!(canonical_exponents(&w1, &w2).unwrap(), (1, 5, 6));
        // mixed denominators: 1/2 and 1/3 live in order 6 as 3/6 and 2/6
        let h = RootOfUnity::new(1, 2).unwrap();
        let t = RootOfUnity::new(1, 3).unwrap();
        assert_eq!(canonical_exponents(&h, &t).unwrap(), (2, 3, 6));
        assert!(matches!(
            canonical_exponents(&h, &h),
            Err(Error::EqualRoots)
        ));
    }
}
