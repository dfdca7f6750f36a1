//! q-series closed forms for the residue-class limits of the cycling
//! Rogers-Ramanujan relative.
//!
//! Throughout, `w` is a primitive `m`-th root of unity (`m >= 3`) and
//! `|q| < 1`.  The wall recurrence
//!
//! ```text
//! P(N) = (w + 1/w + q^(N-1)) P(N-1) - P(N-2),   P(1) = 1, P(0) = 0
//! Q(N) = same,                                  Q(1) = Q(0) = 1
//! ```
//!
//! has closed-form solutions as triple sums over Gaussian binomials, and the
//! residue-class limits `lim_k P(mk+i)` collapse to series in the kernel sums
//!
//! ```text
//! F(w, i, j, q) = lim_k  sum'_{u=0}^{floor((mk+i)/2)} (q^(u+1); q)_j (w^(2u-i) + w^(i-2u))
//! ```
//!
//! where the primed sum counts the final term once, without its root-of-unity
//! pair, when `mk + i` is even.  That convention is the single most
//! error-prone detail of the whole construction and is isolated in
//! [`f_partial`].

use crate::cf::ProjectivePoint;
use crate::error::{Error, Result};
use crate::roots::RootOfUnity;
use crate::Complex64;

/// Base of the q-series, kept strictly inside the unit disc:
/// `|q| <= 1 - 1e-6`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam(Complex64);

impl QParam {
    pub fn new(q: Complex64) -> Result<Self> {
        if !q.norm().is_finite() || q.norm() > 1.0 - 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "|q| must be at most 1 - 1e-6, got {}",
                q.norm()
            )));
        }
        Ok(Self(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Infinite product without the `QParam` guard; `|base| < 1` is asserted.
/// Truncates once the remaining relative error is certified below `tol`.
fn poch_inf(a: Complex64, base: Complex64, tol: f64) -> Complex64 {
    let r = base.norm();
    assert!(r < 1.0);
    if a == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    // after K factors the remaining log-magnitudes sum below |a| r^K / (1-r)
    let k = if r == 0.0 {
        1
    } else {
        let x = (tol * (1.0 - r) / a.norm()).ln() / r.ln();
        x.ceil().max(1.0) as u64
    };
    let mut prod = Complex64::new(1.0, 0.0);
    let mut apk = a;
    for _ in 0..k {
        prod *= Complex64::new(1.0, 0.0) - apk;
        apk *= base;
    }
    prod
}

/// `(a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)`; `n = None` is the infinite
/// product, truncated with certified relative error below `tol`.
pub fn qpochhammer(a: Complex64, q: &QParam, n: Option<u64>, tol: f64) -> Complex64 {
    match n {
        Some(n) => {
            let mut prod = Complex64::new(1.0, 0.0);
            let mut apk = a;
            for _ in 0..n {
                prod *= Complex64::new(1.0, 0.0) - apk;
                apk *= q.value();
            }
            prod
        }
        None => poch_inf(a, q.value(), tol),
    }
}

/// Gaussian binomial `[n choose k]_q`, zero outside `0 <= k <= n`.
pub fn gaussian_binomial(n: i64, k: i64, q: &QParam) -> Complex64 {
    if k < 0 || k > n {
        return Complex64::new(0.0, 0.0);
    }
    let k = k.min(n - k) as u64; // symmetry, fewer factors
    let n = n as u64;
    let mut num = Complex64::new(1.0, 0.0);
    let mut den = Complex64::new(1.0, 0.0);
    for i in 1..=k {
        num *= Complex64::new(1.0, 0.0) - q.value().powi((n - k + i) as i32);
        den *= Complex64::new(1.0, 0.0) - q.value().powi(i as i32);
    }
    num / den
}

/// Parameters of the kernel sums `F` and `G`: a primitive root `w` of order
/// `m >= 3`, an integer offset `i` (any sign; `F` is `m`-periodic in it),
/// a Pochhammer depth `j` and the base `q`.
#[derive(Clone, Debug)]
pub struct FSumSpec {
    omega: RootOfUnity,
    i: i64,
    j: u64,
    q: QParam,
}

impl FSumSpec {
    pub fn new(omega: RootOfUnity, i: i64, j: u64, q: QParam) -> Result<Self> {
        if omega.order() < 3 {
            return Err(Error::InvalidParameter(format!(
                "kernel sums need a root of order at least 3, got {}",
                omega.order()
            )));
        }
        Ok(Self { omega, i, j, q })
    }

    pub fn order(&self) -> u64 {
        self.omega.order()
    }

    pub fn offset(&self) -> i64 {
        self.i
    }

    /// The offset reduced into `0..m`; `F` does not change under this.
    pub fn canonical_offset(&self) -> i64 {
        self.i.rem_euclid(self.order() as i64)
    }

    pub fn with_offset(&self, i: i64) -> Self {
        Self { i, ..self.clone() }
    }
}

/// `G_k = sum_{u=0}^{mk+i} w^u (q^(u+1); q)_j`; empty (zero) when
/// `mk + i < 0`.
pub fn g_partial(spec: &FSumSpec, k: u64) -> Complex64 {
    let top = spec.order() as i64 * k as i64 + spec.i;
    if top < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let powers = root_powers(&spec.omega);
    let m = spec.order() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for u in 0..=top {
        sum += powers[(u % m) as usize] * poch_shifted(spec, u as u64);
    }
    sum
}

/// Limit of `G_k`, with `k` chosen so the proof-side tail bound
/// `m 2^j |q|^(mk+i) / (1 - |q|^m)` certifies error below `tol`.
pub fn g_limit(spec: &FSumSpec, tol: f64) -> Complex64 {
    let m = spec.order();
    let r = spec.q.norm();
    let k = if r == 0.0 {
        1
    } else {
        let margin = tol * (1.0 - r.powi(m as i32)) / (m as f64 * 2f64.powi(spec.j as i32));
        let target = margin.ln() / r.ln(); // need mk + i >= target
        (((target - spec.i as f64) / m as f64).ceil().max(1.0)) as u64
    };
    // never evaluate an empty range: grow k until mk + i >= 0
    let k = k.max(((-spec.i).max(0) as u64).div_ceil(m)).max(1);
    g_partial(spec, k)
}

/// `F_k = sum'_{u=0}^{floor((mk+i)/2)} (q^(u+1); q)_j (w^(2u-i) + w^(i-2u))`.
///
/// Primed sum: when `mk + i` is even the final term `u = (mk+i)/2` enters
/// once as `(q^(u+1); q)_j` -- its two root powers would both equal
/// `w^(mk) = 1`, and exactly one copy is kept.  `mk + i < 0` gives the empty
/// sum, zero.
pub fn f_partial(spec: &FSumSpec, k: u64) -> Complex64 {
    let m = spec.order() as i64;
    let top = m * k as i64 + spec.i;
    if top < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let powers = root_powers(&spec.omega);
    let half = top.div_euclid(2);
    let even = top % 2 == 0;
    let mut sum = Complex64::new(0.0, 0.0);
    for u in 0..=half {
        let poch = poch_shifted(spec, u as u64);
        let weight = if even && u == half {
            Complex64::new(1.0, 0.0)
        } else {
            let e = (2 * u - spec.i).rem_euclid(m) as usize;
            let ne = (spec.i - 2 * u).rem_euclid(m) as usize;
            powers[e] + powers[ne]
        };
        sum += poch * weight;
    }
    sum
}

/// `(q^(u+1); q)_j`.
fn poch_shifted(spec: &FSumSpec, u: u64) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut f = spec.q.value().powi(u as i32 + 1);
    for _ in 0..spec.j {
        prod *= Complex64::new(1.0, 0.0) - f;
        f *= spec.q.value();
    }
    prod
}

fn root_powers(w: &RootOfUnity) -> Vec<Complex64> {
    (0..w.order() as i64).map(|e| w.power_value(e)).collect()
}

/// Tail certificate `|F - F_k| <= m 2^j |q|^((mk+i)/2) / (1 - |q|^(m/2))`,
/// evaluated with the spec's stored offset.
pub fn ffk_bound(spec: &FSumSpec, k: u64) -> f64 {
    let m = spec.order();
    let r = spec.q.norm();
    let expo = (m as f64 * k as f64 + spec.i as f64) / 2.0;
    m as f64 * 2f64.powi(spec.j as i32) * r.powf(expo) / (1.0 - r.powf(m as f64 / 2.0))
}

/// Size majorant `|F| <= 2^j (|i| + 2 + m |q|^(i/2) / (1 - |q|^(m/2)))`.
pub fn f_est_bound(spec: &FSumSpec) -> f64 {
    let m = spec.order() as f64;
    let r = spec.q.norm();
    2f64.powi(spec.j as i32)
        * (spec.i.unsigned_abs() as f64 + 2.0 + m * r.powf(spec.i as f64 / 2.0) / (1.0 - r.powf(m / 2.0)))
}

/// Limit of `F_k`: the offset is first reduced mod `m` (allowed by
/// periodicity), then `k >= 1` is taken just large enough for
/// [`ffk_bound`] to certify error below `tol`.
pub fn f_limit(spec: &FSumSpec, tol: f64) -> Complex64 {
    let canon = spec.with_offset(spec.canonical_offset());
    let m = canon.order();
    let r = canon.q.norm();
    let k = if r == 0.0 {
        1
    } else {
        let margin =
            tol * (1.0 - r.powf(m as f64 / 2.0)) / (m as f64 * 2f64.powi(canon.j as i32));
        let target = 2.0 * margin.ln() / r.ln(); // need mk + i >= target
        (((target - canon.i as f64) / m as f64).ceil().max(1.0)) as u64
    };
    f_partial(&canon, k)
}

/// Triple-sum closed form for the wall numerator `P(n)`:
/// `sum_{r+j+s+1=n} q^(j(j+1)/2) w^(r-s) [j+r, j]_q [j+s, j]_q`.
/// Independent of the recurrence; the two must agree.
pub fn pn_sum(omega: &RootOfUnity, n: u64, q: &QParam) -> Complex64 {
    wall_sum(omega, n, q, 1)
}

/// Closed form for the wall denominator, valid for `n >= 1`:
/// `Q(n) = P(n)-sum - sum_{r+j+s+2=n} q^(j(j+3)/2) w^(r-s) [j+r, j]_q [j+s, j]_q`.
pub fn qn_sum(omega: &RootOfUnity, n: u64, q: &QParam) -> Complex64 {
    wall_sum(omega, n, q, 1) - wall_sum(omega, n, q, 2)
}

/// `sum_{r+j+s+shift=n} q^(j(j+2*shift-1)/2) w^(r-s) [j+r,j]_q [j+s,j]_q`.
fn wall_sum(omega: &RootOfUnity, n: u64, q: &QParam, shift: u64) -> Complex64 {
    if n < shift {
        return Complex64::new(0.0, 0.0);
    }
    let total = (n - shift) as i64; // r + j + s
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=total {
        let qexp = (j * (j + 2 * shift as i64 - 1) / 2) as i32;
        let qf = q.value().powi(qexp);
        for r in 0..=(total - j) {
            let s = total - j - r;
            sum += qf
                * omega.power_value(r - s)
                * gaussian_binomial(j + r, j, q)
                * gaussian_binomial(j + s, j, q);
        }
    }
    sum
}

/// `sum_j q^(e(j)) / (q; q)_j^2 * F(w, i - j - shift, j, q)` with
/// `e(j) = j(j+1)/2` for `shift = 1` and `j(j+3)/2` for `shift = 2`.
/// Truncated once the size majorant of the term drops below `tol` and is
/// decreasing; each kernel `F` is then evaluated to `tol / retained`.
fn f_series(omega: &RootOfUnity, i: i64, q: &QParam, tol: f64, shift: i64) -> Complex64 {
    const J_CAP: u64 = 200;
    let m = omega.order() as f64;
    let r = q.norm();
    let mut majorants = Vec::new();
    let mut poch = 1.0f64; // |(q;q)_j| lower bound via product of |1-q^l|
    let mut prev = f64::INFINITY;
    for j in 0..=J_CAP {
        if j > 0 {
            poch *= (1.0 - q.value().powi(j as i32)).norm();
        }
        let off = i - j as i64 - shift;
        let e = (j * (j as u64 + 2 * shift as u64 - 1) / 2) as f64;
        let est = 2f64.powi(j as i32)
            * (off.unsigned_abs() as f64
                + 2.0
                + m * r.powf(off as f64 / 2.0) / (1.0 - r.powf(m / 2.0)));
        let term = r.powf(e) * est / (poch * poch);
        majorants.push(term);
        // never trust the first couple of terms: 2^j can push the majorant
        // up before the quadratic q-exponent takes over
        if j >= 2 && term < tol && term < prev {
            break;
        }
        prev = term;
    }
    let retained = majorants.len();
    let inner_tol = tol / retained as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pochc = Complex64::new(1.0, 0.0);
    for j in 0..retained as u64 {
        if j > 0 {
            pochc *= Complex64::new(1.0, 0.0) - q.value().powi(j as i32);
        }
        let e = (j * (j + 2 * shift as u64 - 1) / 2) as i32;
        let spec = FSumSpec {
            omega: *omega,
            i: i - j as i64 - shift,
            j,
            q: *q,
        };
        sum += q.value().powi(e) / (pochc * pochc) * f_limit(&spec, inner_tol);
    }
    sum
}

/// Closed form for `lim_k P(mk+i)`, `1 <= i <= m`.
pub fn limit_p(omega: &RootOfUnity, i: u64, q: &QParam, tol: f64) -> Result<Complex64> {
    check_limit_args(omega, i)?;
    Ok(f_series(omega, i as i64, q, tol, 1))
}

/// Closed form for `lim_k Q(mk+i)`, `1 <= i <= m`.
pub fn limit_q(omega: &RootOfUnity, i: u64, q: &QParam, tol: f64) -> Result<Complex64> {
    check_limit_args(omega, i)?;
    Ok(f_series(omega, i as i64, q, tol / 2.0, 1) - f_series(omega, i as i64, q, tol / 2.0, 2))
}

fn check_limit_args(omega: &RootOfUnity, i: u64) -> Result<()> {
    if omega.order() < 3 {
        return Err(Error::InvalidParameter(format!(
            "wall limits need a root of order at least 3, got {}",
            omega.order()
        )));
    }
    if i < 1 || i > omega.order() {
        return Err(Error::InvalidParameter(format!(
            "residue index must satisfy 1 <= i <= {}, got {i}",
            omega.order()
        )));
    }
    Ok(())
}

/// Residue-class limit of the first tail of the cycling fraction, as the
/// projective quotient of the two closed-form series:
///
/// ```text
/// [ sum_j q^(j(j+3)/2)/(q;q)_j^2 F(w, i-j-2, j, q)
///   : sum_j q^(j(j+1)/2)/(q;q)_j^2 F(w, i-j-1, j, q) ]
/// ```
pub fn ramanujan_general_limit(
    mth: u64,
    i: u64,
    q: &QParam,
    tol: f64,
) -> Result<ProjectivePoint> {
    let omega = RootOfUnity::primitive(mth)?;
    check_limit_args(&omega, i)?;
    let num = f_series(&omega, i as i64, q, tol, 2);
    let den = f_series(&omega, i as i64, q, tol, 1);
    Ok(ProjectivePoint::new(num, den))
}

/// Ramanujan's closed form for the three limits of
/// `1/1 - 1/(1+q) - 1/(1+q^2) - ... - 1/(1+q^n+a)` as `n` grows in a fixed
/// class mod 3:
///
/// ```text
/// -w^2 (Omega - w^(n+1)) / (Omega - w^(n-1)) * (q^2; q^3)_inf / (q; q^3)_inf
/// Omega = (1 - a w^2)/(1 - a w) * (w^2 q; q)_inf / (w q; q)_inf
/// ```
///
/// with `w = exp(2*pi*i/3)`.  Only `n mod 3` enters, exactly.
pub fn ramanujan_three_limit_rhs(q: &QParam, n: i64, a: Complex64) -> Result<Complex64> {
    const PTOL: f64 = 1e-15;
    let w = RootOfUnity::primitive(3).expect("order 3");
    let w1 = w.value();
    let w2 = w.power_value(2);
    let one = Complex64::new(1.0, 0.0);
    let den_a = one - a * w1;
    if den_a.norm() < 1e-14 * (1.0 + a.norm()) {
        return Err(Error::PoleInFormula { what: "1 - a*w" });
    }
    let omega_big = (one - a * w2) / den_a * poch_inf(w2 * q.value(), q.value(), PTOL)
        / poch_inf(w1 * q.value(), q.value(), PTOL);
    let den = omega_big - w.power_value(n - 1);
    if den.norm() < 1e-12 * (1.0 + omega_big.norm()) {
        return Err(Error::PoleInFormula { what: "Omega - w^(n-1)" });
    }
    let q3 = q.value().powi(3);
    let ratio = poch_inf(q.value().powi(2), q3, PTOL) / poch_inf(q.value(), q3, PTOL);
    Ok(-w2 * (omega_big - w.power_value(n + 1)) / den * ratio)
}
