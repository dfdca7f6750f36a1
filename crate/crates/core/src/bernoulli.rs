//! Interpolation route to prescribed limits: build a continued fraction
//! whose `n`-th approximant *equals* a given target sequence `K(n)`, then
//! choose `K` to cycle through several limits.
//!
//! The construction only needs consecutive targets to differ:
//!
//! ```text
//! b0 = K(0)
//! a(1) = K(1) - K(0)                      b(1) = 1
//! a(2) = K(1) - K(2)                      b(2) = K(2) - K(0)
//! a(n) = (K(n-2) - K(n-3))(K(n-1) - K(n)) b(n) = K(n) - K(n-2)    n >= 3
//! ```
//!
//! On top of it sit the rational multi-limit family and the analytic
//! three-limit fraction whose limit values have closed forms in `G(0)` and
//! `G(z)`.

use std::sync::Arc;

use crate::cf::CfSpec;
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::Complex64;

/// Total sequence of target approximants `n -> K(n)`.
#[derive(Clone)]
pub struct TargetSequence(Arc<dyn Fn(u64) -> Complex64 + Send + Sync>);

impl TargetSequence {
    pub fn new(f: impl Fn(u64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// Finite prefix; indexing past the end panics.
    pub fn from_values(values: Vec<Complex64>) -> Self {
        Self::new(move |n| {
            *values
                .get(n as usize)
                .unwrap_or_else(|| panic!("target sequence has no term {n}"))
        })
    }

    pub fn at(&self, n: u64) -> Complex64 {
        (self.0)(n)
    }
}

impl std::fmt::Debug for TargetSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TargetSequence").finish_non_exhaustive()
    }
}

/// Continued fraction whose approximant at depth `n` equals `K(n)` exactly,
/// for every `n` up to at least `n_max`.
///
/// Consecutive targets must differ; `K(i) == K(i-1)` for some `i <= n_max`
/// is [`Error::EqualConsecutiveTerms`], since it forces a zero partial
/// numerator.  Terms beyond `n_max` are not pre-checked and surface later
/// through the wall recurrence if degenerate.
pub fn bernoulli_cf(k: &TargetSequence, n_max: u64) -> Result<CfSpec> {
    for i in 0..=n_max {
        let v = k.at(i);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "target K({i}) is not finite"
            )));
        }
        if i >= 1 && v == k.at(i - 1) {
            return Err(Error::EqualConsecutiveTerms { i });
        }
    }
    let ka = k.clone();
    let kb = k.clone();
    let one = Complex64::new(1.0, 0.0);
    let a = Seq::new(move |n| match n {
        0 => unreachable!("partial numerators start at n = 1"),
        1 => ka.at(1) - ka.at(0),
        2 => ka.at(1) - ka.at(2),
        _ => (ka.at(n - 2) - ka.at(n - 3)) * (ka.at(n - 1) - ka.at(n)),
    });
    let b = Seq::new(move |n| match n {
        1 => one,
        _ => kb.at(n) - kb.at(n - 2),
    });
    Ok(CfSpec::new(k.at(0), a, b))
}

/// A sequence together with its declared limit.
#[derive(Clone, Debug)]
pub struct ConvergentGen {
    pub terms: Seq,
    pub limit: Complex64,
}

impl ConvergentGen {
    pub fn new(terms: Seq, limit: Complex64) -> Self {
        Self { terms, limit }
    }

    pub fn constant(value: Complex64) -> Self {
        Self {
            terms: Seq::constant(value),
            limit: value,
        }
    }
}

/// Fraction with the `m` rational limits `(d + je)/(a + jc)`, `j = 0..m`.
///
/// The targets interleave the convergents: `K((n-1)m + j) =
/// (d(n) + j e(n)) / (a(n) + j c(n))`.  Returns the fraction and the
/// predicted limit of each residue class.  A vanishing limit denominator
/// `a + jc` is [`Error::DegenerateLimit`]; coincidences among consecutive
/// targets surface as in [`bernoulli_cf`].
pub fn rational_multi_limit(
    a: &ConvergentGen,
    c: &ConvergentGen,
    d: &ConvergentGen,
    e: &ConvergentGen,
    m: u64,
    n_max: u64,
) -> Result<(CfSpec, Vec<Complex64>)> {
    if m == 0 {
        return Err(Error::InvalidParameter("modulus m must be positive".into()));
    }
    let mut limits = Vec::with_capacity(m as usize);
    for j in 0..m {
        let jc = Complex64::new(j as f64, 0.0);
        let den = a.limit + jc * c.limit;
        if den.norm() < 1e-12 * (1.0 + a.limit.norm() + jc.norm() * c.limit.norm()) {
            return Err(Error::DegenerateLimit { j });
        }
        limits.push((d.limit + jc * e.limit) / den);
    }
    let (ta, tc, td, te) = (
        a.terms.clone(),
        c.terms.clone(),
        d.terms.clone(),
        e.terms.clone(),
    );
    let k = TargetSequence::new(move |idx| {
        let n = idx / m + 1;
        let j = Complex64::new((idx % m) as f64, 0.0);
        (td.at(n) + j * te.at(n)) / (ta.at(n) + j * tc.at(n))
    });
    Ok((bernoulli_cf(&k, n_max)?, limits))
}

/// A function of one complex variable, assumed analytic where it is used.
#[derive(Clone)]
pub struct AnalyticFunction(Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>);

impl AnalyticFunction {
    pub fn new(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::new(|_| Complex64::new(0.0, 0.0))
    }

    pub fn at(&self, z: Complex64) -> Complex64 {
        (self.0)(z)
    }
}

impl std::fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticFunction").finish_non_exhaustive()
    }
}

/// Spot check of `|G| < 1/2` on the disc: 8 radii times 8 angles out to
/// `|z| = 0.99`, plus the origin.  A sampled violation is
/// [`Error::GBoundViolated`]; passing is necessary, not sufficient.
fn check_g_bound(g: &AnalyticFunction) -> Result<()> {
    let sample = |z: Complex64| -> Result<()> {
        let v = g.at(z).norm();
        if !(v < 0.5) {
            return Err(Error::GBoundViolated { z, value: v });
        }
        Ok(())
    };
    sample(Complex64::new(0.0, 0.0))?;
    for t in 0..8 {
        let r = 0.99 * (t + 1) as f64 / 8.0;
        for s in 0..8 {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / 8.0;
            sample(Complex64::from_polar(r, theta))?;
        }
    }
    Ok(())
}

/// Fraction with the `m` limits `G(0) - G(z) + j`, `j = 0..m`, built by
/// interpolating the targets `K(i) = G(z^(i+1)) - G(z) + (i mod m)`.
///
/// Needs `|z| < 1` and `|G| < 1/2` on the disc (spot-checked).  Under the
/// bound, consecutive targets always differ once `m >= 2`.
pub fn integer_ladder_cf(
    g: &AnalyticFunction,
    z: Complex64,
    m: u64,
    n_max: u64,
) -> Result<(CfSpec, Vec<Complex64>)> {
    if m == 0 {
        return Err(Error::InvalidParameter("modulus m must be positive".into()));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|z| must be below 1, got {}",
            z.norm()
        )));
    }
    check_g_bound(g)?;
    let g0 = g.at(Complex64::new(0.0, 0.0));
    let gz = g.at(z);
    let limits: Vec<Complex64> = (0..m)
        .map(|j| g0 - gz + Complex64::new(j as f64, 0.0))
        .collect();
    let gk = g.clone();
    let k = TargetSequence::new(move |i| {
        gk.at(z.powu(i as u32 + 1)) - gk.at(z) + Complex64::new((i % m) as f64, 0.0)
    });
    Ok((bernoulli_cf(&k, n_max)?, limits))
}

/// The three-limit fraction
/// `1/1 - 1/b(2) - 1/b(3) - ...` with
///
/// ```text
/// b(3t-1) = 1 + z^t F(z^t)
/// b(3t)   = 1 + z^t G(z^t)
/// b(3t+1) = F(z^t) + G(z^(t+1))
/// ```
///
/// Callers are expected to pair `F` and `G` through
/// `F = (1 - G)/(1 + zG)`; see [`three_limit_analytic_with`].
pub fn three_limit_cf(f: &AnalyticFunction, g: &AnalyticFunction, z: Complex64) -> CfSpec {
    let (f, g) = (f.clone(), g.clone());
    let one = Complex64::new(1.0, 0.0);
    let b = Seq::new(move |n| {
        if n == 1 {
            return one;
        }
        let t = (n + 1) / 3; // n = 3t-1, 3t or 3t+1
        let zt = z.powu(t as u32);
        match n % 3 {
            2 => one + zt * f.at(zt),
            0 => one + zt * g.at(zt),
            _ => f.at(zt) + g.at(zt * z),
        }
    });
    let a = Seq::new(move |n| if n == 1 { one } else { -one });
    CfSpec::new(Complex64::new(0.0, 0.0), a, b)
}

/// Equivalence-transformed variant of [`three_limit_cf`] with `F`
/// eliminated through the pairing condition; same approximants, only `G`
/// enters.  Writing `G_t = G(z^t)`:
///
/// ```text
/// a(1) = 1                                   b(1) = 1
/// a(2) = -(1 + z G_1)                        b(2) = 1 + z
/// a(3t-3) = -1                               b(3t-3) = 1
/// a(3t-2) = -1                               b(3t-2) = 1 - G_(t-1) + (1 + z^(t-1) G_(t-1)) G_t
/// a(3t-1) = -(1 + z^(t-1) G_(t-1))(1 + z^t G_t)   b(3t-1) = 1 + z^t
/// ```
///
/// for `t >= 2`.
pub fn three_limit_cf_reduced(g: &AnalyticFunction, z: Complex64) -> CfSpec {
    let one = Complex64::new(1.0, 0.0);
    let gt = {
        let g = g.clone();
        move |t: u64| g.at(z.powu(t as u32))
    };
    let ga = gt.clone();
    let a = Seq::new(move |n| match n {
        1 => one,
        2 => -(one + z * ga(1)),
        _ => {
            let t = n / 3 + 1; // n = 3t-3, 3t-2 or 3t-1
            match n % 3 {
                0 | 1 => -one,
                _ => -(one + z.powu(t as u32 - 1) * ga(t - 1)) * (one + z.powu(t as u32) * ga(t)),
            }
        }
    });
    let b = Seq::new(move |n| match n {
        1 => one,
        2 => one + z,
        _ => {
            let t = n / 3 + 1;
            match n % 3 {
                0 => one,
                1 => one - gt(t - 1) + (one + z.powu(t as u32 - 1) * gt(t - 1)) * gt(t),
                _ => one + z.powu(t as u32),
            }
        }
    });
    CfSpec::new(Complex64::new(0.0, 0.0), a, b)
}

/// Closed form for the three limits of [`three_limit_cf`]: the approximants
/// at depths `n mod 3 = 0, 1, 2` converge respectively to
///
/// ```text
/// L0 = z / (2z - zG(z) - 1)
/// L1 = (z + zG(0) - 1) / ((z + zG(0) - 1)(1 - G(z)) + (z - 1) G(0))
/// L2 = (1 - zG(0)) / ((1 - zG(0))(1 - G(z)) + (z - 1)(1 - G(0)))
/// ```
///
/// `n` selects the class.  `F` is derived from `G` internally.
pub fn three_limit_analytic(g: &AnalyticFunction, z: Complex64, n: i64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "|z| must be below 1, got {}",
            z.norm()
        )));
    }
    check_g_bound(g)?;
    let one = Complex64::new(1.0, 0.0);
    let g0 = g.at(Complex64::new(0.0, 0.0));
    let gz = g.at(z);
    match n.rem_euclid(3) {
        0 => {
            let den = 2.0 * z - z * gz - one;
            if den.norm() < 1e-13 * (1.0 + z.norm()) {
                return Err(Error::PoleInFormula { what: "2z - zG(z) - 1" });
            }
            Ok(z / den)
        }
        1 => {
            let num = z + z * g0 - one;
            let den = num * (one - gz) + (z - one) * g0;
            if den.norm() < 1e-13 * (1.0 + num.norm()) {
                return Err(Error::PoleInFormula {
                    what: "(z + zG(0) - 1)(1 - G(z)) + (z - 1)G(0)",
                });
            }
            Ok(num / den)
        }
        _ => {
            let num = one - z * g0;
            let den = num * (one - gz) + (z - one) * (one - g0);
            if den.norm() < 1e-13 * (1.0 + num.norm()) {
                return Err(Error::PoleInFormula {
                    what: "(1 - zG(0))(1 - G(z)) + (z - 1)(1 - G(0))",
                });
            }
            Ok(num / den)
        }
    }
}

/// Like [`three_limit_analytic`] but with `F` supplied explicitly; the
/// pairing `F + G + zFG = 1` is validated at the powers `z, z^2, ..., z^8`
/// before the closed form is evaluated.
pub fn three_limit_analytic_with(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    z: Complex64,
    n: i64,
) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    for k in 1..=8u32 {
        let zk = z.powu(k);
        let (fv, gv) = (f.at(zk), g.at(zk));
        let residual = (fv + gv + zk * fv * gv - one).norm();
        if residual > 1e-10 {
            return Err(Error::FunctionalEquationViolated { residual });
        }
    }
    three_limit_analytic(g, z, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Deterministic, wildly varying but bounded target values.
    fn scrambled_targets(len: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(len);
        let mut x = 0.37_f64;
        for i in 0..len {
            x = (4.61 * x * (1.0 - x)).fract().abs();
            out.push(c(2.0 * x - 1.0, (i as f64 * 0.7).sin()));
        }
        // enforce consecutive separation
        for i in 1..len {
            if (out[i] - out[i - 1]).norm() < 0.05 {
                out[i] += c(0.1, 0.1);
            }
        }
        out
    }

    #[test]
    fn approximants_reproduce_targets_exactly() {
        let values = scrambled_targets(40);
        let k = TargetSequence::from_values(values.clone());
        let cf = bernoulli_cf(&k, 39).unwrap();
        let table = cf.approximants(39, false).unwrap();
        for (n, want) in values.iter().enumerate() {
            let got = table.value_at(n as i64).unwrap();
            assert!(
                got.eq_tol(&crate::cf::ProjectivePoint::from_value(*want), 1e-10),
                "depth {n}"
            );
        }
    }

    #[test]
    fn equal_consecutive_targets_rejected() {
        let k = TargetSequence::from_values(vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            bernoulli_cf(&k, 2),
            Err(Error::EqualConsecutiveTerms { i: 2 })
        ));
    }

    #[test]
    fn rational_family_cycles_to_its_limits() {
        // a(n) = 2 + 4^-n, c = 1, d(n) = 1 - 3^-n, e = 2: limits (1+2j)/(2+j)
        let a = ConvergentGen::new(Seq::new(|n| c(2.0 + 0.25f64.powi(n as i32), 0.0)), c(2.0, 0.0));
        let cc = ConvergentGen::constant(c(1.0, 0.0));
        let d = ConvergentGen::new(
            Seq::new(|n| c(1.0 - (1.0 / 3.0f64).powi(n as i32), 0.0)),
            c(1.0, 0.0),
        );
        let e = ConvergentGen::constant(c(2.0, 0.0));
        let m = 3u64;
        let (cf, limits) = rational_multi_limit(&a, &cc, &d, &e, m, 200).unwrap();
        assert_eq!(limits.len(), 3);
        for (j, l) in limits.iter().enumerate() {
            let want = (1.0 + 2.0 * j as f64) / (2.0 + j as f64);
            assert!((l - c(want, 0.0)).norm() < 1e-14, "class {j}");
        }
        let table = cf.approximants(200, false).unwrap();
        for j in 0..m {
            let depth = (65 * m + j) as i64; // deep approximant in class j
            let got = table.value_at(depth).unwrap().ratio().unwrap();
            assert!((got - limits[j as usize]).norm() < 1e-9, "class {j}");
        }
    }

    #[test]
    fn degenerate_limit_denominator_rejected() {
        // a = 2, c = -1: class j = 2 has a + jc = 0
        let a = ConvergentGen::constant(c(2.0, 0.0));
        let cc = ConvergentGen::constant(c(-1.0, 0.0));
        let d = ConvergentGen::constant(c(1.0, 0.0));
        let e = ConvergentGen::constant(c(0.5, 0.0));
        assert!(matches!(
            rational_multi_limit(&a, &cc, &d, &e, 3, 50),
            Err(Error::DegenerateLimit { j: 2 })
        ));
    }

    #[test]
    fn g_bound_spot_check() {
        let ok = AnalyticFunction::new(|z| z / 4.0);
        assert!(check_g_bound(&ok).is_ok());
        let bad = AnalyticFunction::new(|z| z * 0.7);
        assert!(matches!(
            check_g_bound(&bad),
            Err(Error::GBoundViolated { .. })
        ));
    }

    #[test]
    fn interpolated_analytic_fraction_hits_stated_limits() {
        // G(z) = z/4, z = 1/2, m = 2: limits are -1/8 and 7/8
        let g = AnalyticFunction::new(|z| z / 4.0);
        let (cf, limits) = integer_ladder_cf(&g, c(0.5, 0.0), 2, 300).unwrap();
        assert!((limits[0] - c(-0.125, 0.0)).norm() < 1e-15);
        assert!((limits[1] - c(0.875, 0.0)).norm() < 1e-15);
        let table = cf.approximants(300, false).unwrap();
        for j in 0..2i64 {
            let got = table.value_at(120 + j).unwrap().ratio().unwrap();
            let want = limits[(120 + j) as usize % 2];
            assert!((got - want).norm() < 1e-10, "class {j}");
        }
    }

    #[test]
    fn reduced_three_limit_fraction_matches_full_one() {
        let g = AnalyticFunction::new(|z| z / 3.0);
        let z = c(0.3, 0.1);
        // paired partner, F(w) = (1 - G(w))/(1 + w G(w))
        let f = AnalyticFunction::new(|w| {
            let one = c(1.0, 0.0);
            let gv = w / 3.0;
            (one - gv) / (one + w * gv)
        });
        let full = three_limit_cf(&f, &g, z);
        let reduced = three_limit_cf_reduced(&g, z);
        let ta = full.approximants(40, false).unwrap();
        let tb = reduced.approximants(40, false).unwrap();
        for n in 0..=40i64 {
            let va = ta.value_at(n).unwrap();
            let vb = tb.value_at(n).unwrap();
            assert!(va.eq_tol(&vb, 1e-9), "depth {n}");
        }
    }

    #[test]
    fn zero_g_closed_forms() {
        let g = AnalyticFunction::zero();
        let z = c(0.4, 0.0);
        let l0 = three_limit_analytic(&g, z, 0).unwrap();
        let l1 = three_limit_analytic(&g, z, 1).unwrap();
        let l2 = three_limit_analytic(&g, z, 2).unwrap();
        assert!((l0 - c(0.4 / (0.8 - 1.0), 0.0)).norm() < 1e-14);
        assert!((l1 - c(1.0, 0.0)).norm() < 1e-14);
        assert!((l2 - c(2.5, 0.0)).norm() < 1e-14);
        // and the class argument is periodic
        assert_eq!(l1, three_limit_analytic(&g, z, 4).unwrap());
        assert_eq!(l2, three_limit_analytic(&g, z, -1).unwrap());
    }

    #[test]
    fn closed_forms_match_fraction_iteration() {
        let g = AnalyticFunction::new(|z| z / 3.0);
        let z = c(0.25, 0.0);
        let cf = three_limit_cf_reduced(&g, z);
        let table = cf.approximants(90, false).unwrap();
        for n in 0..3i64 {
            let want = three_limit_analytic(&g, z, n).unwrap();
            let got = table.value_at(84 + n).unwrap().ratio().unwrap();
            assert!((got - want).norm() < 1e-8, "class {n}: {got} vs {want}");
        }
    }

    #[test]
    fn pairing_validation() {
        let g = AnalyticFunction::new(|z| z / 4.0);
        let good_f = AnalyticFunction::new(|w| {
            let one = c(1.0, 0.0);
            let gv = w / 4.0;
            (one - gv) / (one + w * gv)
        });
        let z = c(0.3, 0.0);
        assert!(three_limit_analytic_with(&good_f, &g, z, 0).is_ok());
        let bad_f = AnalyticFunction::new(|_| c(0.9, 0.0));
        assert!(matches!(
            three_limit_analytic_with(&bad_f, &g, z, 0),
            Err(Error::FunctionalEquationViolated { .. })
        ));
    }
}
