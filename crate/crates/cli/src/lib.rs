//! Command-line surface for `realgw`.

pub mod expr;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use realgw_core::charclass::{count_real_lines_quintic, oriented_g25_integrate_e3};
use realgw_core::clifford::{check_conjugation_lift, check_constant_lift, covering_map, CliffordModel, PinModel};
use realgw_core::maslov::{loop_w1, maslov_index, LoopDocument};
use realgw_core::signs::{
    boundary_action_sign, bubble_restriction, expected_dim_balance, sign_boundary, sign_orientable_odd, sign_phi_l,
    sign_t, verify_cancellation, BubbleContext, ParityHypothesis, SignContext, SweepBounds,
};
use realgw_core::strata::cancellation_certificate;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::expr::{parse_class_expression, top_integral};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "realgw", version, about = "Exact computations for real open Gromov-Witten theory")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = OutputMode::Text)]
    pub output: OutputMode,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Plus,
    Minus,
}

impl From<ModelArg> for PinModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Plus => PinModel::PinPlus,
            ModelArg::Minus => PinModel::PinMinus,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply generators and check the lifting conditions.
    Clifford(CliffordArgs),
    /// Maslov index of a loop of totally real frames.
    Maslov {
        #[arg(long = "loop", value_name = "FILE")]
        loop_file: PathBuf,
    },
    /// Conjugation signs on determinant lines.
    #[command(subcommand)]
    Sign(SignCommand),
    /// Boundary strata and their cancellation certificate.
    Strata {
        #[arg(long, value_name = "FILE")]
        context: PathBuf,
        #[arg(long, default_value_t = 12)]
        bound: i64,
    },
    /// Evaluate a class expression on G(2, n).
    Schubert {
        #[arg(long)]
        n: usize,
        expr: String,
    },
    /// Lines on the quintic threefold.
    Quintic(QuinticArgs),
    /// Exhaustive checks over bounded grids.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Args)]
pub struct CliffordArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Minus)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Generator indices multiplied left to right, e.g. `1,2`; empty is `1`.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub word: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SignCommand {
    /// Sign of the involution on a disk-bubble boundary stratum.
    Bubble {
        #[arg(long, value_name = "FILE")]
        json: PathBuf,
    },
    /// Conjugation signs for a bordered-surface context.
    Context {
        #[arg(long, value_name = "FILE")]
        json: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct QuinticArgs {
    #[arg(long)]
    pub real: bool,
    #[arg(long)]
    pub complex: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Sweep the boundary sign identities over a bounded grid.
    Cancellation {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..=3))]
        n: i64,
        #[arg(long, default_value_t = 12)]
        bound: u32,
        /// Tie `w1(d_b)` to `k_b` instead of `k_b + 1`.
        #[arg(long)]
        break_hypothesis: bool,
    },
}

/// Exit code and captured streams of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<realgw_core::Error> for Failure {
    fn from(e: realgw_core::Error) -> Self {
        input_error(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Text or json rendering plus the exit code it implies.
struct Rendered {
    code: i32,
    text: String,
    json: String,
}

fn ok<T: Serialize>(text: String, report: &T) -> Rendered {
    Rendered {
        code: EXIT_OK,
        text,
        json: json(report),
    }
}

fn dispatch(cmd: &Command) -> Result<Rendered, Failure> {
    match cmd {
        Command::Clifford(a) => clifford(a),
        Command::Maslov { loop_file } => {
            let doc: LoopDocument = read_json(loop_file)?;
            let l = doc.to_loop()?;
            let mu = maslov_index(&l)?;
            let report = MaslovReport {
                schema: MASLOV.into(),
                n: l.dim(),
                samples: l.samples().len(),
                mu,
                w1: loop_w1(&l)?,
            };
            Ok(ok(format!("{mu}\n"), &report))
        }
        Command::Sign(SignCommand::Bubble { json }) => {
            let b: BubbleContext = read_json(json)?;
            b.validate()?;
            let sign = sign_boundary(&b)?;
            let report = SignBubbleReport {
                schema: SIGN_BUBBLE.into(),
                stratum_sign: boundary_action_sign(&b)?,
                orientable_odd: sign_orientable_odd(&b).ok(),
                restriction: bubble_restriction(&b).ok().flatten(),
                context: b,
                sign,
            };
            Ok(ok(format!("{sign}\n"), &report))
        }
        Command::Sign(SignCommand::Context { json }) => {
            let c: SignContext = read_json(json)?;
            c.validate()?;
            let report = SignContextReport {
                schema: SIGN_CONTEXT.into(),
                s_t_minus: sign_t(c.mu_d, c.n, c.g0, c.m, &c.w1_da, PinModel::PinMinus),
                s_t_plus: sign_t(c.mu_d, c.n, c.g0, c.m, &c.w1_da, PinModel::PinPlus),
                sign_phi_l: sign_phi_l(&c),
                dim_balance: expected_dim_balance(&c),
                parity_hypothesis_holds: c.parity_hypothesis_holds(),
                maslov_parity_consistent: c.maslov_parity_consistent(),
                context: c,
            };
            let text = format!(
                "s_T- = {}\ns_T+ = {}\nphi_L = {}\ndim {} = {} ({})\n",
                report.s_t_minus,
                report.s_t_plus,
                report.sign_phi_l,
                report.dim_balance.lhs,
                report.dim_balance.rhs,
                if report.dim_balance.admissible { "admissible" } else { "not admissible" },
            );
            Ok(ok(text, &report))
        }
        Command::Strata { context, bound } => {
            let c: SignContext = read_json(context)?;
            c.validate()?;
            let report = cancellation_certificate(&c, *bound)?;
            let text = format!(
                "strata {}\npairs {} fixed {} unmatched {}\nsign failures {}\nunhandled {}\nformal total {}\n{}\n",
                report.strata.len(),
                report.pairing.pairs,
                report.pairing.fixed,
                report.pairing.unmatched,
                report.sign_failures.len(),
                report.unhandled.len(),
                report.formal_total,
                if report.certified { "certified" } else { "NOT certified" },
            );
            Ok(Rendered {
                code: if report.certified { EXIT_OK } else { EXIT_VERIFY },
                text,
                json: json(&report),
            })
        }
        Command::Schubert { n, expr } => {
            let parsed = parse_class_expression(expr, *n).map_err(|e| input_error(e.to_string()))?;
            let u = parsed.evaluate()?;
            let integral = top_integral(&u).map(|r| r.to_string());
            let mut text = format!("{u}\n");
            if let Some(i) = &integral {
                text.push_str(&format!("integral {i}\n"));
            }
            let report = SchubertReport {
                schema: SCHUBERT.into(),
                n: *n,
                expression: parsed.root.to_string(),
                class: u.to_string(),
                terms: SchubertReport::terms_of(&u),
                integral,
            };
            Ok(ok(text, &report))
        }
        Command::Quintic(q) if q.real => {
            let c = count_real_lines_quintic()?;
            let base = oriented_g25_integrate_e3();
            let report = QuinticRealReport {
                schema: QUINTIC_REAL.into(),
                count: c.count,
                euler_coeff: c.euler_coeff,
                base_integral: c.base_integral,
                trace: format!("{} × {}", c.euler_coeff, c.base_integral),
                orientation_cover_degree: base.orientation_cover_degree,
                unoriented_count: base.unoriented_count,
                quadric_degree: base.quadric_degree,
                pontryagin_coeff: c.pontryagin_coeff,
            };
            Ok(ok(format!("{}\n", c.count), &report))
        }
        Command::Quintic(_) => {
            let u = realgw_core::charclass::chern_top_sym_dual_taut(5, 5)?;
            let count = u.integrate_integer()?;
            let report = QuinticComplexReport {
                schema: QUINTIC_COMPLEX.into(),
                count: count.to_string(),
                class: u.to_string(),
            };
            Ok(ok(format!("{count}\n"), &report))
        }
        Command::Verify(VerifyCommand::Cancellation {
            n,
            bound,
            break_hypothesis,
        }) => {
            let hypothesis = if *break_hypothesis {
                ParityHypothesis::Broken
            } else {
                ParityHypothesis::Enforced
            };
            let report = verify_cancellation(&SweepBounds::new(*n, *bound).with_hypothesis(hypothesis))?;
            let verified = report.verified();
            let text = format!(
                "n {} bound {}\ntuples {}\nadmissible {} (no z1 {}, z1 {})\nfailures {}\n{}\n",
                report.n,
                report.bound,
                report.tuples_checked,
                report.admissible,
                report.admissible_no_z1,
                report.admissible_with_z1,
                report.failures.len(),
                if verified { "verified" } else { "FAILED" },
            );
            let doc = CancellationDocument {
                schema: CANCELLATION.into(),
                verified,
                report,
            };
            Ok(Rendered {
                code: if verified { EXIT_OK } else { EXIT_VERIFY },
                text,
                json: json(&doc),
            })
        }
    }
}

fn clifford(a: &CliffordArgs) -> Result<Rendered, Failure> {
    let model = CliffordModel::new(a.model.into(), a.n)?;
    let x = model.word(&a.word)?;
    let covering = covering_map(&x)?;
    let conjugation_lift = match check_conjugation_lift(&x) {
        Ok(v) => Some(v),
        Err(realgw_core::Error::CoveringMismatch { .. }) | Err(realgw_core::Error::Dimension(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let report = CliffordReport {
        schema: CLIFFORD.into(),
        model: a.model.into(),
        n: a.n,
        element: x.to_string(),
        covering: covering.to_string(),
        determinant: covering.determinant(),
        constant_lift: check_constant_lift(&x)?,
        conjugation_lift,
    };
    let text = format!(
        "{}\ncovers {}\nconstant lift {}\nconjugation lift {}\n",
        report.element,
        report.covering,
        report.constant_lift,
        report.conjugation_lift.map_or("n/a".to_string(), |v| v.to_string()),
    );
    Ok(ok(text, &report))
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(&cli.command) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: match cli.output {
                OutputMode::Text => r.text,
                OutputMode::Json => r.json,
            },
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: match cli.output {
                OutputMode::Text => String::new(),
                OutputMode::Json => json(&ErrorReport {
                    schema: ERROR.into(),
                    error: f.message.clone(),
                }),
            },
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Parses `args` (including the program name) and runs the command. Usage
/// errors map to exit code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            }
        }
    }
}
