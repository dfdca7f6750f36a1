//! Flag-value parsers: turn fractions, complex numbers, named sequences.

use multilim::{CfSpec, Complex64, Error, PerturbationSeq, Result, RootOfUnity, Seq};

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

/// Root of unity as a turn fraction `num/den`; a bare integer is a whole
/// number of turns, i.e. the unit.
pub fn root(s: &str) -> Result<RootOfUnity> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim()
                .parse::<i64>()
                .map_err(|_| invalid(format!("bad turn numerator in {s:?}")))?,
            d.trim()
                .parse::<i64>()
                .map_err(|_| invalid(format!("bad turn denominator in {s:?}")))?,
        ),
        None => (
            s.trim()
                .parse::<i64>()
                .map_err(|_| invalid(format!("bad turn fraction {s:?}")))?,
            1,
        ),
    };
    RootOfUnity::new(num, den)
}

/// Complex number as `re,im`; a bare float is real.
pub fn complex(s: &str) -> Result<Complex64> {
    let parse = |part: &str| {
        part.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("bad float {part:?} in {s:?}")))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

fn named_param(s: &str, name: &str, key: &str) -> Result<f64> {
    let rest = s
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| invalid(format!("sequence {s:?} needs a {key}= parameter")))?;
    let val = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| invalid(format!("sequence {s:?}: expected {key}=<float>")))?;
    val.trim()
        .parse::<f64>()
        .map_err(|_| invalid(format!("sequence {s:?}: bad float {val:?}")))
}

/// Named perturbation sequences covering the worked examples:
/// `zero`, `invsq`, `geometric:r=..`, `power:q=..`, `ramanujan:q=..`,
/// `rrpair:q=..`.
pub fn seq(s: &str) -> Result<PerturbationSeq> {
    let s = s.trim();
    match s {
        "zero" => return Ok(PerturbationSeq::zero()),
        "invsq" => return Ok(PerturbationSeq::inverse_square(Complex64::new(1.0, 0.0))),
        _ => {}
    }
    if s.starts_with("geometric") {
        let r = named_param(s, "geometric", "r")?;
        if !(r > 0.0 && r < 1.0) {
            return Err(invalid(format!("geometric ratio must be in (0, 1), got {r}")));
        }
        return Ok(PerturbationSeq::geometric(Complex64::new(1.0, 0.0), r));
    }
    if s.starts_with("power") {
        let q = named_param(s, "power", "q")?;
        if q.abs() >= 1.0 {
            return Err(invalid(format!("power base must satisfy |q| < 1, got {q}")));
        }
        return Ok(PerturbationSeq::powers(Complex64::new(q, 0.0)));
    }
    if s.starts_with("ramanujan") {
        let q = named_param(s, "ramanujan", "q")?;
        return ramanujan_seq(q);
    }
    if s.starts_with("rrpair") {
        let q = named_param(s, "rrpair", "q")?;
        if q.abs() <= 1.0 {
            return Err(invalid(format!("rrpair base must satisfy |q| > 1, got {q}")));
        }
        return Ok(PerturbationSeq::paired_inverse_powers(Complex64::new(q, 0.0)));
    }
    Err(invalid(format!("unknown sequence {s:?}")))
}

/// `0, q, q^2, q^3, ...`: the denominator perturbation whose cycling
/// fraction is the three-limit q-fraction (in its tail-normalized form).
fn ramanujan_seq(q: f64) -> Result<PerturbationSeq> {
    let r = q.abs();
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!(
            "ramanujan base must satisfy 0 < |q| < 1, got {q}"
        )));
    }
    Ok(PerturbationSeq::new(
        Seq::new(move |n| {
            if n <= 1 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(q.powi(n as i32 - 1), 0.0)
            }
        }),
        move |n| if n <= 1 { 0.0 } else { r.powi(n as i32 - 1) },
        move |cut| r.powi(cut.max(1) as i32) / (1.0 - r),
    ))
}

/// Named fractions for `eval`: `fibonacci`, `parabolic`, `rr:q=..`.
pub fn named_cf(s: &str) -> Result<CfSpec> {
    let s = s.trim();
    let one = Complex64::new(1.0, 0.0);
    match s {
        "fibonacci" => return Ok(CfSpec::new(one, Seq::constant(one), Seq::constant(one))),
        "parabolic" => return Ok(multilim::multilimit::parabolic_divergent_cf()),
        _ => {}
    }
    if s.starts_with("rr") {
        let q = named_param(s, "rr", "q")?;
        return Ok(CfSpec::new(
            one,
            Seq::new(move |n| Complex64::new(q.powi(n as i32), 0.0)),
            Seq::constant(one),
        ));
    }
    Err(invalid(format!("unknown fraction {s:?}")))
}

/// Semicolon-separated complex targets, each `re,im` or bare `re`.
pub fn targets(s: &str) -> Result<Vec<Complex64>> {
    let vals = s
        .split(';')
        .filter(|part| !part.trim().is_empty())
        .map(complex)
        .collect::<Result<Vec<_>>>()?;
    if vals.len() < 2 {
        return Err(invalid("need at least two targets".into()));
    }
    Ok(vals)
}
