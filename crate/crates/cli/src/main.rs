//! `multilim`: evaluate continued fractions, extract residue-class limit
//! profiles, compute ranks, tabulate q-series limits, and run the
//! prescribed-approximant constructors.  Output is CSV (default) or a
//! single JSON object; reruns with the same flags are byte-identical.

mod output;
mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use multilim::bernoulli::{bernoulli_cf, TargetSequence};
use multilim::multilimit::{build, extend_limits, rank};
use multilim::poincare::order_two;
use multilim::qseries::{
    limit_p, limit_q, pn_sum, qn_sum, ramanujan_general_limit, ramanujan_three_limit_rhs,
};
use multilim::{
    CfSpec, Complex64, Error, PerturbationSeq, ProjectivePoint, QParam, Result, RootOfUnity, Seq,
};
use output::{Cell, Table};

#[derive(Parser)]
#[command(name = "multilim", version, about = "Residue-class limits of continued fractions")]
struct Cli {
    /// Output table format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Approximants 0..N-1 of a named fraction (fibonacci, parabolic, rr:q=..).
    Eval {
        #[arg(long)]
        cf: String,
        #[arg(long = "N", default_value_t = 10)]
        n: u64,
        /// Rescale rows that grow past the overflow guard.
        #[arg(long)]
        renormalize: bool,
    },
    /// Residue-class limit profile of a cycling fraction built from two
    /// roots of unity and two summable perturbations.
    Limits {
        /// First characteristic root, as a turn fraction num/den.
        #[arg(long)]
        omega1: String,
        /// Second characteristic root, distinct from the first.
        #[arg(long)]
        omega2: String,
        /// Perturbation of the partial denominators.
        #[arg(long, default_value = "zero")]
        p: String,
        /// Perturbation of the partial numerators.
        #[arg(long, default_value = "zero")]
        q: String,
        #[arg(long, default_value = "0")]
        b0: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 200_000)]
        kmax: u64,
    },
    /// Number of projectively distinct residue-class limits for a root pair.
    Rank {
        #[arg(long)]
        omega1: String,
        #[arg(long)]
        omega2: String,
    },
    /// Wall limits of the q-fraction in every residue class mod m.
    Qlimits {
        #[arg(long)]
        m: u64,
        /// Base of the q-powers, `re,im` or bare real, |q| < 1.
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// General-limit ratios of the q-fraction per residue class mod m.
    Ramanujan {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Residue-class limits of the order-two perturbed recurrence.
    Poincare {
        #[arg(long)]
        omega1: String,
        #[arg(long)]
        omega2: String,
        #[arg(long, default_value = "zero")]
        a: String,
        #[arg(long, default_value = "zero")]
        b: String,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value = "1")]
        x1: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Fraction whose approximants equal the given targets
    /// (semicolon-separated complex values).
    Bernoulli {
        #[arg(long)]
        targets: String,
    },
    /// Built-in cross-check battery: iteration against closed forms.
    Verify,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NoConvergence { .. } => 2,
                _ => 1,
            }
        }
    }
}

struct Run {
    command: &'static str,
    config: Vec<(String, String)>,
    table: Table,
    residuals: Vec<(&'static str, f64)>,
    code: i32,
}

fn run(cli: Cli) -> Result<i32> {
    let run = dispatch(&cli.command)?;
    let rendered = match cli.format {
        Format::Csv => output::csv(&run.table),
        Format::Json => output::json(run.command, &run.config, &run.table, &run.residuals),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(run.code)
}

fn cfg(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn value_cells(point: &ProjectivePoint) -> [Cell; 3] {
    match point.ratio() {
        Some(v) => [Cell::Float(v.re), Cell::Float(v.im), Cell::Bool(false)],
        None => [Cell::Float(0.0), Cell::Float(0.0), Cell::Bool(true)],
    }
}

fn dispatch(command: &Command) -> Result<Run> {
    match command {
        Command::Eval { cf, n, renormalize } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("N must be positive".into()));
            }
            let spec = parse::named_cf(cf)?;
            let table = spec.approximants(n - 1, *renormalize)?;
            let mut rows = Vec::new();
            for idx in 0..*n as i64 {
                let (p, q) = (table.p_at(idx)?, table.q_at(idx)?);
                let mut row = vec![
                    Cell::Int(idx),
                    Cell::Float(p.re),
                    Cell::Float(p.im),
                    Cell::Float(q.re),
                    Cell::Float(q.im),
                ];
                row.extend(value_cells(&table.value_at(idx)?));
                rows.push(row);
            }
            Ok(Run {
                command: "eval",
                config: cfg(&[
                    ("cf", cf),
                    ("N", &n.to_string()),
                    ("renormalize", &renormalize.to_string()),
                ]),
                table: Table {
                    columns: vec![
                        "n", "re_p", "im_p", "re_q", "im_q", "re_value", "im_value", "is_infinite",
                    ],
                    rows,
                },
                residuals: vec![],
                code: 0,
            })
        }

        Command::Limits {
            omega1,
            omega2,
            p,
            q,
            b0,
            tol,
            kmax,
        } => {
            let w1 = parse::root(omega1)?;
            let w2 = parse::root(omega2)?;
            let ml = build(w1, w2, parse::seq(p)?, parse::seq(q)?)?.with_b0(parse::complex(b0)?);
            let profile = ml.residue_limits(*tol, *kmax)?;
            let mut rows = Vec::new();
            for i in 0..profile.modulus() as i64 {
                let (a, b) = (profile.a_ext(i), profile.b_ext(i));
                let mut row = vec![
                    Cell::Int(i),
                    Cell::Float(a.re),
                    Cell::Float(a.im),
                    Cell::Float(b.re),
                    Cell::Float(b.im),
                ];
                row.extend(value_cells(&profile.point(i)));
                rows.push(row);
            }
            // consecutive pairing against its closed form, as a health figure
            let mut residuals = vec![];
            if let Ok(closed) = ml.det_pairing_closed(1, 0, 1e-9) {
                let iterated = profile.a_ext(1) * profile.b_ext(0) - profile.a_ext(0) * profile.b_ext(1);
                residuals.push(("consecutive_pairing", (closed - iterated).norm()));
            }
            Ok(Run {
                command: "limits",
                config: cfg(&[
                    ("omega1", omega1),
                    ("omega2", omega2),
                    ("p", p),
                    ("q", q),
                    ("b0", b0),
                    ("tol", &output::float17(*tol)),
                    ("kmax", &kmax.to_string()),
                ]),
                table: Table {
                    columns: vec![
                        "residue", "re_a", "im_a", "re_b", "im_b", "re_limit", "im_limit",
                        "is_infinite",
                    ],
                    rows,
                },
                residuals,
                code: 0,
            })
        }

        Command::Rank { omega1, omega2 } => {
            let r = rank(&parse::root(omega1)?, &parse::root(omega2)?)?;
            Ok(Run {
                command: "rank",
                config: cfg(&[("omega1", omega1), ("omega2", omega2)]),
                table: Table {
                    columns: vec!["rank"],
                    rows: vec![vec![Cell::Int(r as i64)]],
                },
                residuals: vec![],
                code: 0,
            })
        }

        Command::Qlimits { m, q, tol } => {
            let qp = QParam::new(parse::complex(q)?)?;
            let w = RootOfUnity::primitive(*m)?;
            let mut rows = Vec::new();
            for i in 1..=*m {
                let p = limit_p(&w, i, &qp, *tol)?;
                let qq = limit_q(&w, i, &qp, *tol)?;
                let mut row = vec![
                    Cell::Int(i as i64),
                    Cell::Float(p.re),
                    Cell::Float(p.im),
                    Cell::Float(qq.re),
                    Cell::Float(qq.im),
                ];
                row.extend(value_cells(&ProjectivePoint::new(p, qq)));
                rows.push(row);
            }
            Ok(Run {
                command: "qlimits",
                config: cfg(&[("m", &m.to_string()), ("q", q), ("tol", &output::float17(*tol))]),
                table: Table {
                    columns: vec![
                        "class", "re_p", "im_p", "re_q", "im_q", "re_ratio", "im_ratio",
                        "is_infinite",
                    ],
                    rows,
                },
                residuals: vec![],
                code: 0,
            })
        }

        Command::Ramanujan { m, q, tol } => {
            let qp = QParam::new(parse::complex(q)?)?;
            let mut rows = Vec::new();
            for i in 1..=*m {
                let pt = ramanujan_general_limit(*m, i, &qp, *tol)?;
                let mut row = vec![
                    Cell::Int(i as i64),
                    Cell::Float(pt.p.re),
                    Cell::Float(pt.p.im),
                    Cell::Float(pt.q.re),
                    Cell::Float(pt.q.im),
                ];
                row.extend(value_cells(&pt));
                rows.push(row);
            }
            Ok(Run {
                command: "ramanujan",
                config: cfg(&[("m", &m.to_string()), ("q", q), ("tol", &output::float17(*tol))]),
                table: Table {
                    columns: vec![
                        "class", "re_num", "im_num", "re_den", "im_den", "re_ratio", "im_ratio",
                        "is_infinite",
                    ],
                    rows,
                },
                residuals: vec![],
                code: 0,
            })
        }

        Command::Poincare {
            omega1,
            omega2,
            a,
            b,
            x0,
            x1,
            tol,
        } => {
            let w1 = parse::root(omega1)?;
            let w2 = parse::root(omega2)?;
            let lv = order_two(
                &w1,
                &w2,
                &parse::seq(a)?,
                &parse::seq(b)?,
                parse::complex(x0)?,
                parse::complex(x1)?,
                *tol,
            )?;
            let s = w1.value() + w2.value();
            let prod = w1.mul(&w2).value();
            let mut rows = Vec::new();
            let mut worst_rebuild = 0.0f64;
            let mut worst_recur = 0.0f64;
            for j in 0..lv.modulus() as i64 {
                let l = lv.limit_ext(j);
                rows.push(vec![Cell::Int(j), Cell::Float(l.re), Cell::Float(l.im)]);
                worst_rebuild = worst_rebuild.max((lv.reconstruct(j) - l).norm());
                worst_recur = worst_recur
                    .max((lv.limit_ext(j + 2) - s * lv.limit_ext(j + 1) + prod * l).norm());
            }
            Ok(Run {
                command: "poincare",
                config: cfg(&[
                    ("omega1", omega1),
                    ("omega2", omega2),
                    ("a", a),
                    ("b", b),
                    ("x0", x0),
                    ("x1", x1),
                    ("tol", &output::float17(*tol)),
                ]),
                table: Table {
                    columns: vec!["class", "re_limit", "im_limit"],
                    rows,
                },
                residuals: vec![
                    ("root_expansion", worst_rebuild),
                    ("limit_recurrence", worst_recur),
                ],
                code: 0,
            })
        }

        Command::Bernoulli { targets } => {
            let vals = parse::targets(targets)?;
            let n_max = vals.len() as u64 - 1;
            let cf = bernoulli_cf(&TargetSequence::from_values(vals.clone()), n_max)?;
            let table = cf.approximants(n_max, true)?;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for (n, &want) in vals.iter().enumerate() {
                let got = table.value_at(n as i64)?;
                let dist = got.chordal(&ProjectivePoint::from_value(want));
                worst = worst.max(dist);
                let mut row = vec![
                    Cell::Int(n as i64),
                    Cell::Float(want.re),
                    Cell::Float(want.im),
                ];
                row.extend(value_cells(&got));
                row.push(Cell::Float(dist));
                rows.push(row);
            }
            Ok(Run {
                command: "bernoulli",
                config: cfg(&[("targets", targets)]),
                table: Table {
                    columns: vec![
                        "n", "re_target", "im_target", "re_value", "im_value", "is_infinite",
                        "residual",
                    ],
                    rows,
                },
                residuals: vec![("max_residual", worst)],
                code: 0,
            })
        }

        Command::Verify => verify(),
    }
}

fn check(
    rows: &mut Vec<Vec<Cell>>,
    all_pass: &mut bool,
    name: &'static str,
    residual: f64,
    tol: f64,
) {
    let pass = residual <= tol;
    *all_pass &= pass;
    rows.push(vec![
        Cell::Str(name.to_string()),
        Cell::Float(residual),
        Cell::Float(tol),
        Cell::Bool(pass),
    ]);
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Small battery re-deriving the headline identities by iteration and
/// comparing against the closed forms.
fn verify() -> Result<Run> {
    let mut rows = Vec::new();
    let mut all_pass = true;

    // even/odd split of K(1/0): unit pairing, exactly
    {
        let ml = build(
            RootOfUnity::one(),
            RootOfUnity::new(1, 2)?,
            PerturbationSeq::zero(),
            PerturbationSeq::zero(),
        )?;
        let profile = ml.residue_limits(1e-12, 100)?;
        let det = profile.a_ext(1) * profile.b_ext(0) - profile.a_ext(0) * profile.b_ext(1);
        check(&mut rows, &mut all_pass, "trivial_profile_pairing", (det - c(1.0)).norm(), 1e-14);
    }

    // three-limit q-fraction against its closed form at q = 0.2
    {
        let qv = 0.2f64;
        let p = PerturbationSeq::new(
            Seq::new(move |n| if n <= 1 { c(0.0) } else { c(qv.powi(n as i32 - 1)) }),
            move |n| if n <= 1 { 0.0 } else { qv.powi(n as i32 - 1) },
            move |cut| qv.powi(cut.max(1) as i32) / (1.0 - qv),
        );
        let spike = PerturbationSeq::new(
            Seq::new(|n| if n == 1 { c(2.0) } else { c(0.0) }),
            |n| if n == 1 { 2.0 } else { 0.0 },
            |cut| if cut == 0 { 2.0 } else { 0.0 },
        );
        let ml = build(RootOfUnity::new(1, 6)?, RootOfUnity::new(5, 6)?, p, spike)?;
        let profile = ml.residue_limits(1e-10, 20_000)?;
        let q = QParam::real(qv)?;
        let mut worst = 0.0f64;
        for class in 0..3i64 {
            let rhs = ramanujan_three_limit_rhs(&q, class, c(0.0))?;
            worst = worst.max(
                profile
                    .point(class + 1)
                    .chordal(&ProjectivePoint::from_value(rhs)),
            );
        }
        check(&mut rows, &mut all_pass, "three_limit_closed_form", worst, 1e-9);
    }

    // closed-form reconstruction of every limit from the first two
    {
        let w1 = RootOfUnity::new(1, 10)?;
        let w2 = RootOfUnity::new(3, 10)?;
        let amp = Complex64::new(0.3, 0.2);
        let ml = build(
            w1,
            w2,
            PerturbationSeq::geometric(amp, 0.5),
            PerturbationSeq::geometric(amp, 0.5),
        )?;
        let profile = ml.residue_limits(1e-10, 20_000)?;
        let mut worst = 0.0f64;
        for i in 0..2 * profile.modulus() as i64 {
            let a = extend_limits(profile.a_ext(0), profile.a_ext(1), &w1, &w2, i)?;
            let b = extend_limits(profile.b_ext(0), profile.b_ext(1), &w1, &w2, i)?;
            worst = worst
                .max((a - profile.a_ext(i)).norm())
                .max((b - profile.b_ext(i)).norm());
        }
        check(&mut rows, &mut all_pass, "limit_reconstruction", worst, 1e-8);
    }

    // order-two recurrence: root expansion of the six limits
    {
        let lv = order_two(
            &RootOfUnity::new(1, 6)?,
            &RootOfUnity::new(5, 6)?,
            &PerturbationSeq::geometric(c(1.0), 0.5),
            &PerturbationSeq::zero(),
            c(0.0),
            c(1.0),
            1e-10,
        )?;
        let mut worst = 0.0f64;
        for j in 0..lv.modulus() as i64 {
            worst = worst.max((lv.reconstruct(j) - lv.limit_ext(j)).norm());
        }
        check(&mut rows, &mut all_pass, "order_two_reconstruction", worst, 1e-8);
    }

    // wall sums against the three-term recurrence, m = 5, q = 0.15
    {
        let m = 5u64;
        let qv = 0.15f64;
        let q = QParam::real(qv)?;
        let w = RootOfUnity::primitive(m)?;
        let wsum = w.value() + w.inv().value();
        let cf = CfSpec::new(
            c(0.0),
            Seq::new(|n| if n == 1 { c(1.0) } else { c(-1.0) }),
            Seq::new(move |n| if n == 1 { c(1.0) } else { wsum + c(qv.powi(n as i32 - 1)) }),
        );
        let table = cf.approximants(15, false)?;
        let mut worst = 0.0f64;
        for n in 0..=15u64 {
            worst = worst.max((pn_sum(&w, n, &q) - table.p_at(n as i64)?).norm());
            if n >= 1 {
                worst = worst.max((qn_sum(&w, n, &q) - table.q_at(n as i64)?).norm());
            }
        }
        check(&mut rows, &mut all_pass, "wall_sums", worst, 1e-11);
    }

    // prescribed approximants hit their targets
    {
        let vals: Vec<Complex64> = (0..60)
            .map(|n| Complex64::new((n as f64).sin(), (2.0 * n as f64).cos() / 2.0))
            .collect();
        let cf = bernoulli_cf(&TargetSequence::from_values(vals.clone()), 59)?;
        let table = cf.approximants(59, true)?;
        let mut worst = 0.0f64;
        for (n, &want) in vals.iter().enumerate() {
            worst = worst.max(
                table
                    .value_at(n as i64)?
                    .chordal(&ProjectivePoint::from_value(want)),
            );
        }
        check(&mut rows, &mut all_pass, "prescribed_approximants", worst, 1e-10);
    }

    let worst_overall = rows
        .iter()
        .filter_map(|r| match r[1] {
            Cell::Float(v) => Some(v),
            _ => None,
        })
        .fold(0.0f64, f64::max);
    Ok(Run {
        command: "verify",
        config: vec![],
        table: Table {
            columns: vec!["check", "residual", "tol", "pass"],
            rows,
        },
        residuals: vec![("max_residual", worst_overall)],
        code: if all_pass { 0 } else { 1 },
    })
}
