//! Residue-class limits of continued fractions built on two roots of unity.
//!
//! For distinct roots of unity `w1 != w2` with common order `m` and summable
//! perturbations `p`, `q` (with `q(n) != w1*w2`), the fraction
//!
//! ```text
//! K( (-w1*w2 + q(n)) / (w1 + w2 + p(n)) )
//! ```
//!
//! diverges in the classical sense, but its wall converges along every
//! residue class: `P(mk+i) -> A(i)` and `Q(mk+i) -> B(i)` as `k -> infinity`.
//! The limits satisfy closed forms that need only `A(0), A(1)` (resp. `B`),
//! and the pairings `A(i)B(j) - A(j)B(i)` collapse to root-of-unity data
//! times one infinite product.  The approximants therefore cycle between
//! `r = m / gcd(b - a, m)` projectively distinct limit points, where the
//! roots are `exp(2*pi*i*a/m)` and `exp(2*pi*i*b/m)`.

use crate::cf::{CfSpec, ProjectivePoint};
use crate::error::{Error, Result};
use crate::matprod::CAUCHY_RUN;
use crate::roots::{self, canonical_exponents, RootOfUnity};
use crate::seq::{PerturbationSeq, Seq};
use crate::Complex64;

/// How many leading terms of each perturbation are checked against their
/// declared bound, and how deep the `q(n) != w1*w2` guard samples.
const SPOT_CHECKS: u64 = 32;

/// Upper bound on factors when truncating certified infinite products.
const PRODUCT_CAP: u64 = 2_000_000;

/// A continued fraction of the cycling class, with its roots kept exact.
#[derive(Clone, Debug)]
pub struct MultiLimitCf {
    omega1: RootOfUnity,
    omega2: RootOfUnity,
    p: PerturbationSeq,
    q: PerturbationSeq,
    m: u64,
    cf: CfSpec,
}

/// Builds the fraction `K((-w1*w2 + q(n)) / (w1 + w2 + p(n)))`, integer
/// part zero.
pub fn build(
    omega1: RootOfUnity,
    omega2: RootOfUnity,
    p: PerturbationSeq,
    q: PerturbationSeq,
) -> Result<MultiLimitCf> {
    if omega1 == omega2 {
        return Err(Error::EqualRoots);
    }
    for (name, s) in [("p", &p), ("q", &q)] {
        if let Err(n) = s.spot_check(SPOT_CHECKS) {
            return Err(Error::InvalidParameter(format!(
                "perturbation {name} exceeds its declared bound at n = {n}"
            )));
        }
    }
    let w12 = omega1.mul(&omega2).value();
    for n in 1..=SPOT_CHECKS {
        if q.at(n) == w12 {
            return Err(Error::ZeroPartialNumerator { n });
        }
    }
    let m = RootOfUnity::common_order(&omega1, &omega2);
    let cf = cf_from_parts(&omega1, &omega2, &p, &q, Complex64::new(0.0, 0.0));
    Ok(MultiLimitCf {
        omega1,
        omega2,
        p,
        q,
        m,
        cf,
    })
}

fn cf_from_parts(
    w1: &RootOfUnity,
    w2: &RootOfUnity,
    p: &PerturbationSeq,
    q: &PerturbationSeq,
    b0: Complex64,
) -> CfSpec {
    let wsum = w1.value() + w2.value();
    let wprod = w1.mul(w2).value();
    let pt = p.terms().clone();
    let qt = q.terms().clone();
    CfSpec::new(
        b0,
        Seq::new(move |n| -wprod + qt.at(n)),
        Seq::new(move |n| wsum + pt.at(n)),
    )
}

impl MultiLimitCf {
    pub fn omega1(&self) -> &RootOfUnity {
        &self.omega1
    }

    pub fn omega2(&self) -> &RootOfUnity {
        &self.omega2
    }

    /// Common order of the two roots: the modulus of the residue classes.
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn cf(&self) -> &CfSpec {
        &self.cf
    }

    pub fn q_seq(&self) -> &PerturbationSeq {
        &self.q
    }

    /// Same fraction with a nonzero integer part.  `Q` is untouched; every
    /// `A(i)` shifts by `b0 * B(i)`, and pairings are unchanged.
    pub fn with_b0(mut self, b0: Complex64) -> Self {
        self.cf = cf_from_parts(&self.omega1, &self.omega2, &self.p, &self.q, b0);
        self
    }

    /// Iterates the wall until every residue class has settled, then packages
    /// limits, rank and the distinct limit points.
    pub fn residue_limits(&self, tol: f64, k_max: u64) -> Result<LimitProfile> {
        let wall = residue_wall(&self.cf, self.m, tol, k_max)?;
        let r = rank(&self.omega1, &self.omega2)?;
        Ok(LimitProfile::assemble(wall, r))
    }

    /// Closed form for the pairing `A(i)B(j) - A(j)B(i)`, cross-checked
    /// against the iterated profile within `tol`:
    ///
    /// ```text
    /// -(w1 w2)^(j+1) * (w1^(i-j) - w2^(i-j))/(w1 - w2) * prod (1 - q(n)/(w1 w2))
    /// ```
    pub fn det_pairing(
        &self,
        profile: &LimitProfile,
        i: i64,
        j: i64,
        tol: f64,
    ) -> Result<Complex64> {
        let closed = self.det_pairing_closed(i, j, tol / 10.0)?;
        let iterated =
            profile.a_ext(i) * profile.b_ext(j) - profile.a_ext(j) * profile.b_ext(i);
        let residual = (closed - iterated).norm();
        if residual > tol {
            return Err(Error::MismatchBeyondTolerance { residual, tol });
        }
        Ok(closed)
    }

    /// The closed form alone, with the infinite product truncated once the
    /// declared tail of `q` certifies relative error below `rel_tol`.
    pub fn det_pairing_closed(&self, i: i64, j: i64, rel_tol: f64) -> Result<Complex64> {
        let w12 = self.omega1.mul(&self.omega2);
        let lead = -w12.power_value(j + 1);
        let num = self.omega1.power_value(i - j) - self.omega2.power_value(i - j);
        let den = self.omega1.value() - self.omega2.value();
        let prod = perturbation_product(&self.q, w12.value(), rel_tol)?;
        Ok(lead * (num / den) * prod)
    }
}

/// `prod_{n>=1} (1 - q(n)/w12)`, truncated once `exp(tail(N)) - 1 <= rel_tol`.
fn perturbation_product(
    q: &PerturbationSeq,
    w12: Complex64,
    rel_tol: f64,
) -> Result<Complex64> {
    let goal = (1.0 + rel_tol).ln();
    let mut cut = 1u64;
    while q.tail(cut) > goal {
        cut *= 2;
        if cut > PRODUCT_CAP {
            return Err(Error::InvalidParameter(format!(
                "declared tail of q cannot certify relative error {rel_tol:e} within {PRODUCT_CAP} factors"
            )));
        }
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 1..=cut {
        prod *= Complex64::new(1.0, 0.0) - q.at(n) / w12;
    }
    Ok(prod)
}

/// Limits of one wall sequence along residue classes mod `m`.
#[derive(Clone, Debug)]
pub struct ResidueWall {
    pub m: u64,
    /// `a[i] = lim_k P(km + i)`
    pub a: Vec<Complex64>,
    /// `b[i] = lim_k Q(km + i)`
    pub b: Vec<Complex64>,
    /// Blocks consumed before the stopping rule fired.
    pub blocks: u64,
}

/// Runs the wall of `cf` and waits for per-class Cauchy agreement: the walk
/// stops after `P` and `Q` moved less than `tol` in every residue class for
/// three consecutive blocks.  Exhausting `k_max` blocks is the
/// `NoConvergence` outcome; for fractions outside the cycling class (for
/// instance when the two characteristic roots coincide) that is the
/// mathematically correct verdict, not a numerical failure.
pub fn residue_wall(cf: &CfSpec, m: u64, tol: f64, k_max: u64) -> Result<ResidueWall> {
    assert!(m >= 1, "modulus must be positive");
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // sliding wall pair at indices g-1, g-2
    let (mut p2, mut q2) = (one, zero);
    let (mut p1, mut q1) = (cf.b0(), one);
    let mut cur = vec![(zero, zero); m as usize];
    let mut prev = vec![(zero, zero); m as usize];
    cur[0] = (p1, q1);
    let mut run = 0u32;
    for k in 0..k_max {
        for i in 0..m {
            let g = k * m + i;
            if g == 0 {
                continue; // index 0 is the initial row, already in place
            }
            let a = cf.a_at(g);
            let b = cf.b_at(g);
            if a == zero {
                return Err(Error::ZeroPartialNumerator { n: g });
            }
            let pn = b * p1 + a * p2;
            let qn = b * q1 + a * q2;
            if !(pn.norm().is_finite() && qn.norm().is_finite()) {
                return Err(Error::Overflow { n: g });
            }
            p2 = p1;
            q2 = q1;
            p1 = pn;
            q1 = qn;
            cur[i as usize] = (pn, qn);
        }
        if k >= 1 {
            let delta = cur
                .iter()
                .zip(prev.iter())
                .map(|(c, p)| (c.0 - p.0).norm().max((c.1 - p.1).norm()))
                .fold(0.0, f64::max);
            run = if delta < tol { run + 1 } else { 0 };
            if run >= CAUCHY_RUN {
                return Ok(ResidueWall {
                    m,
                    a: cur.iter().map(|v| v.0).collect(),
                    b: cur.iter().map(|v| v.1).collect(),
                    blocks: k + 1,
                });
            }
        }
        prev.copy_from_slice(&cur);
    }
    Err(Error::NoConvergence {
        m,
        blocks: k_max,
    })
}

/// Residue-class limits of a cycling fraction, with rank and the distinct
/// limit points.
#[derive(Clone, Debug)]
pub struct LimitProfile {
    m: u64,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    rank: u64,
    limits: Vec<ProjectivePoint>,
    blocks: u64,
}

impl LimitProfile {
    fn assemble(wall: ResidueWall, rank: u64) -> Self {
        // the approximant limits repeat with period `rank`; classes
        // 1..=rank, with class m wrapping to stored index 0
        let limits = (1..=rank)
            .map(|j| {
                let idx = (j % wall.m) as usize;
                ProjectivePoint::new(wall.a[idx], wall.b[idx])
            })
            .collect();
        Self {
            m: wall.m,
            a: wall.a,
            b: wall.b,
            rank,
            limits,
            blocks: wall.blocks,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// `A(i)` for `0 <= i < m`.
    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// `A(i)` extended to all integers by periodicity mod `m`.
    pub fn a_ext(&self, i: i64) -> Complex64 {
        self.a[i.rem_euclid(self.m as i64) as usize]
    }

    pub fn b_ext(&self, i: i64) -> Complex64 {
        self.b[i.rem_euclid(self.m as i64) as usize]
    }

    /// Number of projectively distinct approximant limits.
    pub fn rank(&self) -> u64 {
        self.rank
    }

    /// The limit points `[A(j) : B(j)]` for classes `j = 1..=rank`.
    pub fn limits(&self) -> &[ProjectivePoint] {
        &self.limits
    }

    /// Approximant limit of the class of `i`, as a projective point.
    pub fn point(&self, i: i64) -> ProjectivePoint {
        ProjectivePoint::new(self.a_ext(i), self.b_ext(i))
    }

    pub fn blocks(&self) -> u64 {
        self.blocks
    }
}

/// Number of projectively distinct approximant limits for a root pair:
/// `m / gcd(b - a, m)` in canonical exponents.
pub fn rank(w1: &RootOfUnity, w2: &RootOfUnity) -> Result<u64> {
    let (a, b, m) = canonical_exponents(w1, w2)?;
    Ok(m / roots::gcd(b - a, m))
}

/// Reconstructs any `A(i)` (or `B(i)`) from the first two limits:
/// `A(i) = (A1 - w2 A0)/(w1 - w2) * w1^i + (w1 A0 - A1)/(w1 - w2) * w2^i`.
pub fn extend_limits(
    a0: Complex64,
    a1: Complex64,
    w1: &RootOfUnity,
    w2: &RootOfUnity,
    i: i64,
) -> Result<Complex64> {
    if w1 == w2 {
        return Err(Error::EqualRoots);
    }
    let d = w1.value() - w2.value();
    let c1 = (a1 - w2.value() * a0) / d;
    let c2 = (w1.value() * a0 - a1) / d;
    Ok(c1 * w1.power_value(i) + c2 * w2.power_value(i))
}

/// Generalized Stern-Stolz fraction `b0 + K((1 + a(n)) / b(n))` with both
/// perturbations summable: the wall splits into even and odd limits with
/// `A(1)B(0) - A(0)B(1) = prod (1 + a(n))`, which is verified internally
/// before the profile is returned.
pub fn stern_stolz(
    b: &PerturbationSeq,
    a: &PerturbationSeq,
    b0: Complex64,
    tol: f64,
) -> Result<LimitProfile> {
    let ml = build(
        RootOfUnity::one(),
        RootOfUnity::new(1, 2)?,
        b.clone(),
        a.clone(),
    )?
    .with_b0(b0);
    let profile = ml.residue_limits(tol, DEFAULT_K_MAX)?;
    ml.det_pairing(&profile, 1, 0, 10.0 * tol)?;
    Ok(profile)
}

// Large enough that polynomially decaying perturbations (1/n^2, the
// slowest the corollaries use) drive the block deltas below 1e-10; each
// block is O(m) work, so the cap is cheap even when reached.
pub(crate) const DEFAULT_K_MAX: u64 = 200_000;

/// The order-`mth` relative of the Stern-Stolz family,
/// `b0 + K((-1 + a(n)) / (w + 1/w + b(n)))` with `w = exp(2*pi*i/mth)`.
/// Rank is `mth` when odd and `mth/2` when even.
pub fn family_cf(
    mth: u64,
    a: &PerturbationSeq,
    b: &PerturbationSeq,
    b0: Complex64,
) -> Result<MultiLimitCf> {
    if mth < 3 {
        return Err(Error::InvalidParameter(format!(
            "family order must be at least 3, got {mth}"
        )));
    }
    let w = RootOfUnity::primitive(mth)?;
    Ok(build(w, w.inv(), b.clone(), a.clone())?.with_b0(b0))
}

/// Classical generally divergent fraction `K((-1 - 4/(4n^2 - 1)) / 2)`.
///
/// Its limiting recurrence has the double characteristic root 1, so no
/// modulus produces residue-class convergence; it is the negative control
/// showing the two roots must be distinct.
pub fn parabolic_divergent_cf() -> CfSpec {
    CfSpec::new(
        Complex64::new(0.0, 0.0),
        Seq::new(|n| {
            let n = n as f64;
            Complex64::new(-1.0 - 4.0 / (4.0 * n * n - 1.0), 0.0)
        }),
        Seq::constant(Complex64::new(2.0, 0.0)),
    )
}
