//! Command-line front end. Every input is an exact string, every invocation
//! writes exactly one JSON document to stdout.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 precondition violation.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fmstab::chern::{self, ChernVector, FmtDescriptor};
use fmstab::exactnum::{parse_rational, ExactComplex, Rational};
use fmstab::flow;
use fmstab::sl2cf::{self, GeneratorWord, SL2};
use fmstab::stability::{self, BgMode, ParamQuadruple, StabilityParams};
use fmstab::suites::{run_suite, Suite};
use fmstab::symrep::{self, Mat2};
use fmstab::{Error, ErrorKind};
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "fmstab",
    version,
    about = "Exact Fourier-Mukai and stability numerics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetric-power representation matrix ρ^(k)(M), or one entry of it.
    Rep {
        #[arg(long)]
        k: usize,
        /// x,y,z,w (rationals allowed)
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// row,col (1-based)
        #[arg(long)]
        entry: Option<String>,
    },
    /// Convergents, value and isometry of a generator word m_1,…,m_n.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 0)]
        shift_parity: u8,
    },
    /// Generator word realizing an SL(2,Z) matrix.
    Factorize {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Cohomological transform of a Chern vector.
    Transform {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 1)]
        scale: u64,
        /// Input at twist x/y, output at twist −w/y.
        #[arg(long)]
        antidiag: bool,
        /// Use the transform with matrix [[−w,y],[z,−x]].
        #[arg(long)]
        adjoint: bool,
        /// Use the transform with matrix [[−x,y],[z,−w]].
        #[arg(long)]
        dual_kernel: bool,
    },
    /// Re-express a Chern vector at another twist.
    Twist {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Derived dual of a Chern vector.
    Dual {
        #[command(flatten)]
        vector: VectorArgs,
    },
    /// Mukai pairing of two untwisted vectors.
    Pairing {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Central charge, or with --lambda/--matrix the Im Z closed-form and transfer identities.
    Charge {
        #[command(flatten)]
        vector: VectorArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Slope of an untwisted vector.
    Slope {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long, value_enum, default_value_t = SlopeKind::Mu)]
        kind: SlopeKind,
        #[command(flatten)]
        params: ParamArgs,
        /// twist q for the mu-q slope
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Bogomolov and B-G type inequality checks.
    Bg {
        #[arg(long, value_enum)]
        mode: BgKind,
        /// a_0,…,a_g (not used by the transfer mode)
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        twist: String,
        #[command(flatten)]
        params: ParamArgs,
        /// a0,a1,a3 for the transfer check
        #[arg(long, allow_hyphen_values = true)]
        transfer: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Semi-homogeneous Chern vectors for slopes p ± q.
    Semihom {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Möbius action on u = b + i·m, or the real-factor point with --lambda.
    Moebius {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 1)]
        scale: u64,
        #[arg(long, default_value_t = 3)]
        g: usize,
        /// u as {"re":…,"im":…} with exact scalar parts
        #[arg(long)]
        u: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        l: u32,
    },
    /// Transform and parameter quadruple for ω = α·ℓ, B = β·ℓ with α = alpha_coeff·√3.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        alpha_coeff: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Seeded batch verification.
    Verify {
        /// suite name, or "all"
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 500)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct VectorArgs {
    /// a_0,…,a_g in the ℓ^k/k! basis
    #[arg(long, allow_hyphen_values = true)]
    vector: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    twist: String,
}

#[derive(clap::Args, Debug)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// m = m_coeff·√3
    #[arg(long, allow_hyphen_values = true)]
    m_coeff: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SlopeKind {
    Mu,
    MuQ,
    Nu,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BgKind {
    Bogomolov,
    Discriminant,
    Weak,
    Strong,
    Transfer,
}

type CliResult = fmstab::Result<Value>;

fn rationals(text: &str) -> fmstab::Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn integers(text: &str) -> fmstab::Result<Vec<BigInt>> {
    rationals(text)?
        .into_iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::Parse(format!("expected an integer, got {q}")))
            }
        })
        .collect()
}

fn four<T>(items: Vec<T>, what: &str) -> fmstab::Result<[T; 4]> {
    let n = items.len();
    items
        .try_into()
        .map_err(|_| Error::Parse(format!("{what} needs 4 comma-separated entries, got {n}")))
}

fn sl2(text: &str) -> fmstab::Result<SL2> {
    let [x, y, z, w] = four(integers(text)?, "matrix")?;
    SL2::new(x, y, z, w)
}

fn vector(args: &VectorArgs) -> fmstab::Result<ChernVector> {
    let a = rationals(&args.vector)?;
    let g = a.len().saturating_sub(1);
    ChernVector::new(g, parse_rational(&args.twist)?, a)
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> fmstab::Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("missing --{flag}")))
}

fn params(args: &ParamArgs) -> fmstab::Result<StabilityParams> {
    StabilityParams::new(
        parse_rational(required(&args.b, "b")?)?,
        parse_rational(required(&args.m_coeff, "m-coeff")?)?,
    )
}

fn quadruple(lambda: &Option<String>, matrix: &Option<String>) -> fmstab::Result<ParamQuadruple> {
    ParamQuadruple::new(
        parse_rational(required(lambda, "lambda")?)?,
        &sl2(required(matrix, "matrix")?)?,
    )
}

fn to_json<T: serde::Serialize>(value: &T) -> CliResult {
    serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Rep { k, matrix, entry } => {
            let [x, y, z, w] = four(rationals(&matrix)?, "matrix")?;
            let m = Mat2::from_rationals(x, y, z, w);
            match entry {
                Some(entry) => {
                    let idx: Vec<usize> = entry
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad index {s:?}")))
                        })
                        .collect::<fmstab::Result<_>>()?;
                    let [row, col] = idx[..] else {
                        return Err(Error::Parse("--entry needs row,col".into()));
                    };
                    Ok(
                        json!({ "k": k, "row": row, "col": col, "value": symrep::rep_entry(k, row, col, &m)? }),
                    )
                }
                None => to_json(&symrep::rep_matrix(k, &m)?),
            }
        }
        Command::Cf { word, shift_parity } => {
            let word = GeneratorWord::new(integers(&word)?, shift_parity)?;
            let convergents = sl2cf::cf_convergents(&word.m);
            let value = sl2cf::cf_evaluate(&word.m)?;
            Ok(json!({
                "word": word,
                "convergents": convergents,
                "value": fmstab::exactnum::format_rational(&value),
                "isometry": sl2cf::isometry_of_word(&word),
                "signed_isometry": sl2cf::signed_isometry(&word),
            }))
        }
        Command::Factorize { matrix } => {
            let m = sl2(&matrix)?;
            let word = sl2cf::factorize(&m);
            Ok(json!({ "matrix": m, "word": word }))
        }
        Command::Transform {
            vector: v,
            matrix,
            scale,
            antidiag,
            adjoint,
            dual_kernel,
        } => {
            let mut f = FmtDescriptor::new(sl2(&matrix)?, scale)?;
            if adjoint {
                f = f.adjoint();
            }
            if dual_kernel {
                f = f.dual_kernel();
            }
            let v = vector(&v)?;
            let image = if antidiag {
                chern::apply_fmt_antidiag(&v, &f)?
            } else {
                chern::apply_fmt(&v, &f)?
            };
            to_json(&image)
        }
        Command::Twist { vector: v, to } => {
            to_json(&chern::twist_change(&vector(&v)?, &parse_rational(&to)?))
        }
        Command::Dual { vector: v } => to_json(&chern::dualize(&vector(&v)?)),
        Command::Pairing { left, right } => {
            let l = ChernVector::untwisted(rationals(&left)?)?;
            let r = ChernVector::untwisted(rationals(&right)?)?;
            Ok(
                json!({ "pairing": fmstab::exactnum::format_rational(&chern::mukai_pairing(&l, &r)?) }),
            )
        }
        Command::Charge {
            vector: v,
            params: p,
            lambda,
            matrix,
        } => {
            let v = vector(&v)?;
            if lambda.is_some() || matrix.is_some() {
                let q = quadruple(&lambda, &matrix)?;
                let identity = stability::im_charge_identity(&v, &q)?;
                let transfer = if v.twist == q.source_twist() {
                    to_json(&stability::charge_transfer_identity(&v, &q)?)?
                } else {
                    Value::Null
                };
                Ok(
                    json!({ "quadruple": q, "identity": identity, "holds": identity.holds(), "transfer": transfer }),
                )
            } else {
                let z = stability::central_charge(&v, &params(&p)?)?;
                Ok(json!({ "charge": z }))
            }
        }
        Command::Slope {
            vector: v,
            kind,
            params: p,
            q,
        } => {
            let v = vector(&v)?;
            let slope = match kind {
                SlopeKind::Mu => stability::twisted_slope_mu(&v, &params(&p)?)?,
                SlopeKind::Nu => stability::tilt_slope_nu(&v, &params(&p)?)?,
                SlopeKind::MuQ => stability::slope_mu_q(&v, &parse_rational(required(&q, "q")?)?)?,
            };
            to_json(&slope)
        }
        Command::Bg {
            mode,
            vector: v,
            twist,
            params: p,
            transfer,
            lambda,
            matrix,
        } => {
            let vector = || {
                vector(&VectorArgs {
                    vector: required(&v, "vector")?.to_string(),
                    twist: twist.clone(),
                })
            };
            match mode {
                BgKind::Transfer => {
                    let [a0, a1, a3]: [Rational; 3] = rationals(required(&transfer, "transfer")?)?
                        .try_into()
                        .map_err(|_| Error::Parse("--transfer needs a0,a1,a3".into()))?;
                    to_json(&stability::strong_bg_transfer(
                        &a0,
                        &a1,
                        &a3,
                        &quadruple(&lambda, &matrix)?,
                    )?)
                }
                BgKind::Bogomolov => {
                    Ok(json!({ "verdict": stability::bogomolov_check(&vector()?)? }))
                }
                BgKind::Discriminant => {
                    Ok(json!({ "discriminant_zero": stability::discriminant_zero(&vector()?)? }))
                }
                BgKind::Weak | BgKind::Strong => {
                    let bg = if matches!(mode, BgKind::Weak) {
                        BgMode::Weak
                    } else {
                        BgMode::Strong
                    };
                    let (v, p) = (vector()?, params(&p)?);
                    let (lhs, rhs) = stability::bg_sides(&v, &p, bg)?;
                    Ok(json!({
                        "mode": bg,
                        "verdict": stability::bg_check(&v, &p, bg)?,
                        "ch3": fmstab::exactnum::format_rational(&lhs),
                        "bound": fmstab::exactnum::format_rational(&rhs),
                    }))
                }
            }
        }
        Command::Semihom { p, q } => {
            let (p, q) = (parse_rational(&p)?, parse_rational(&q)?);
            let (plus, minus) = stability::semihomog_chern(&p, &q)?;
            let [plus_bg, minus_bg, minus_shifted_bg] = stability::semihomog_strong_bg(&p, &q)?;
            Ok(json!({
                "plus": plus,
                "minus": minus,
                "strong_bg": { "plus": plus_bg, "minus": minus_bg, "minus_shifted": minus_shifted_bg },
            }))
        }
        Command::Moebius {
            matrix,
            scale,
            g,
            u,
            params: p,
            lambda,
            l,
        } => {
            let f = FmtDescriptor::new(sl2(&matrix)?, scale)?;
            if let Some(lambda) = lambda {
                let lambda = parse_rational(&lambda)?;
                let point = flow::real_factor_parameters(&f, &lambda, g, l)?;
                let readings = flow::real_factor_closed_forms(&f, &lambda, l)?;
                return Ok(json!({ "point": point, "closed_forms": readings }));
            }
            let u = match u {
                Some(text) => serde_json::from_str::<ExactComplex>(&text)
                    .map_err(|e| Error::Parse(e.to_string()))?,
                None => params(&p)?.u(),
            };
            to_json(&flow::moebius_action(&f, &u, g)?)
        }
        Command::Solve { alpha_coeff, beta } => to_json(&flow::solve_polarization(
            &parse_rational(&alpha_coeff)?,
            &parse_rational(&beta)?,
        )?),
        Command::Verify { suite, cases, seed } => {
            if suite == "all" {
                let reports: Vec<_> = Suite::ALL
                    .iter()
                    .map(|&s| run_suite(s, cases, seed))
                    .collect();
                return to_json(&reports);
            }
            to_json(&run_suite(suite.parse::<Suite>()?, cases, seed))
        }
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Parse => 2,
        ErrorKind::Domain => 3,
        ErrorKind::Precondition => 4,
    }
}

fn kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::Parse => "parse",
        ErrorKind::Domain => "domain",
        ErrorKind::Precondition => "precondition",
    }
}

fn emit(doc: &Value) {
    let text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    // a closed stdout is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn fail(kind: ErrorKind, message: String) -> ExitCode {
    emit(&json!({ "error": { "kind": kind_name(kind), "message": message } }));
    ExitCode::from(exit_code(kind))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            return fail(
                ErrorKind::Parse,
                first.trim_start_matches("error: ").to_string(),
            );
        }
    };
    let outcome = run(cli.command);
    let report_failed = matches!(&outcome, Ok(doc) if verify_failed(doc));
    match outcome {
        Ok(doc) => {
            emit(&doc);
            if report_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(e.kind(), e.to_string()),
    }
}

/// A verify report with failures still prints, but exits with status 1.
fn verify_failed(doc: &Value) -> bool {
    let failed = |r: &Value| {
        r.get("failed")
            .and_then(Value::as_u64)
            .is_some_and(|n| n > 0)
    };
    match doc {
        Value::Array(items) => items.iter().any(failed),
        other => other.get("suite").is_some() && failed(other),
    }
}
