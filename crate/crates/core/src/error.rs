use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
///
/// Construction errors (`InvalidParameter`, `EqualRoots`, ...) mean the input
/// violates a precondition; `NoConvergence` means an iteration honestly ran
/// out of budget, which for some inputs (see `multilimit` docs) is the
/// mathematically correct answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("partial numerator a({n}) is zero; the fraction terminates")]
    ZeroPartialNumerator { n: u64 },

    #[error("overflow at index {n}; rerun with renormalization enabled")]
    Overflow { n: u64 },

    #[error("index {n} outside the computed range -1..={max}")]
    IndexOutOfRange { n: i64, max: i64 },

    #[error("scale factor c({n}) is zero in equivalence transform")]
    ZeroScaleFactor { n: u64 },

    #[error("no m <= {m_max} satisfies |M^m - I| <= {tol:e}")]
    NoPeriodFound { m_max: u64, tol: f64 },

    #[error("no convergence after {blocks} blocks of modulus {m}")]
    NoConvergence { m: u64, blocks: u64 },

    #[error("the two roots of unity must be distinct")]
    EqualRoots,

    #[error("closed form and iterated value differ by {residual:e} (tol {tol:e})")]
    MismatchBeyondTolerance { residual: f64, tol: f64 },

    #[error("observed deviation {observed:e} at n = {n} exceeds the declared bound {bound:e}")]
    DeviationBoundViolated { n: u64, observed: f64, bound: f64 },

    #[error("Vandermonde system of the characteristic roots is singular")]
    SingularVandermonde,

    #[error("initial pair (u, v) must not be (0, 0)")]
    ZeroInitialPair,

    #[error("consecutive target terms K({i}) and K({j}) coincide", j = i.saturating_sub(1))]
    EqualConsecutiveTerms { i: u64 },

    #[error("degenerate limit denominator in residue class {j}")]
    DegenerateLimit { j: u64 },

    #[error("|G| must stay below 1/2 on the unit disc; |G({z})| = {value}")]
    GBoundViolated { z: num_complex::Complex64, value: f64 },

    #[error("formula denominator vanishes: {what}")]
    PoleInFormula { what: &'static str },

    #[error("F + G + zFG = 1 fails with residual {residual:e}")]
    FunctionalEquationViolated { residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
