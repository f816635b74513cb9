//! Command-line front end for `lrn-core`.
//!
//! [`run`] executes one invocation and returns the exit code and the text
//! written to stdout/stderr, so the whole surface is testable without
//! spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lrn_core::arith::{ArithError, FactorBudget, Integer};
use lrn_core::classnum::{self, ClassNumberError};
use lrn_core::lehmer::{self, LehmerError, LehmerParams};
use lrn_core::parse::{self, ParseError};
use lrn_core::solver::{
    self, CorollaryError, CorollaryId, ProblemInstance, SolveError, SolveOptions, Verdict,
};
use lrn_core::{fiblucas, rsums};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_INCOMPLETE_FACTORIZATION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable holding the Pollard-rho iteration budget.
pub const FACTOR_BUDGET_ENV: &str = "LRN_FACTOR_BUDGET";

fn integer(s: &str) -> Result<Integer, ParseError> {
    parse::parse_integer(s)
}

fn small_u32(s: &str) -> Result<u32, ParseError> {
    parse::parse_u32(s, "u32")
}

fn small_u64(s: &str) -> Result<u64, ParseError> {
    parse::parse_u64(s, "u64")
}

#[derive(Debug, Parser)]
#[command(
    name = "lrn",
    version,
    about = "Solve and certify c*x^2 + p^(2m) = 4*y^n"
)]
pub struct Cli {
    /// Emit a JSON output record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the equation for one (c, p, m, n).
    Solve(SolveArgs),
    /// Brute-force search over y <= y-max and m <= m-max.
    Search(SearchArgs),
    /// Class number h(-c).
    Classnum {
        #[arg(value_parser = integer)]
        c: Integer,
        /// Also list the reduced forms.
        #[arg(long)]
        forms: bool,
    },
    /// R(c,u,v,t), I(c,u,v,t) and their congruences.
    Rsums {
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        c: Integer,
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        u: Integer,
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        v: Integer,
        #[arg(value_parser = small_u32)]
        t: u32,
    },
    /// Lehmer numbers, primitive divisors and defect tables.
    #[command(subcommand)]
    Lehmer(LehmerCommand),
    /// Fibonacci numbers, or `fib squares --max K`.
    Fib(FibArgs),
    /// Lucas number L_k.
    Lucas {
        #[arg(value_parser = small_u64)]
        k: u64,
    },
    /// Replay one corollary's fixtures (or the given instances).
    VerifyCorollary(CorollaryArgs),
    /// Replay every corollary fixture and print CSV.
    Table {
        /// Also run the brute-force oracle up to this y.
        #[arg(long, value_parser = small_u64)]
        oracle_y_max: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_parser = integer, allow_hyphen_values = true)]
    pub c: Integer,
    #[arg(long, value_parser = integer, allow_hyphen_values = true)]
    pub p: Integer,
    #[arg(long, value_parser = small_u32)]
    pub m: u32,
    #[arg(long, value_parser = small_u32)]
    pub n: u32,
    /// Enable the mod-q / mod-c screens before each witness scan.
    #[arg(long)]
    pub screens: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = integer, allow_hyphen_values = true)]
    pub c: Integer,
    #[arg(long, value_parser = integer, allow_hyphen_values = true)]
    pub p: Integer,
    #[arg(long, value_parser = small_u32)]
    pub n: u32,
    #[arg(long, value_parser = small_u32)]
    pub m_max: u32,
    #[arg(long, value_parser = small_u64)]
    pub y_max: u64,
    /// Report progress on stderr; results are unchanged.
    #[arg(long)]
    pub seed_check: bool,
}

#[derive(Debug, Subcommand)]
pub enum LehmerCommand {
    /// L_ell for parameters (a, b).
    Number {
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        a: Integer,
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        b: Integer,
        #[arg(value_parser = small_u32)]
        ell: u32,
    },
    /// Whether L_ell has a primitive divisor.
    Primdiv {
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        a: Integer,
        #[arg(value_parser = integer, allow_hyphen_values = true)]
        b: Integer,
        #[arg(value_parser = small_u32)]
        ell: u32,
    },
    /// Parameters without a primitive divisor at ell.
    Defects {
        #[arg(value_parser = small_u32)]
        ell: u32,
        #[arg(long, default_value = "10", value_parser = small_u32)]
        bound: u32,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct FibArgs {
    #[command(subcommand)]
    pub sub: Option<FibCommand>,
    #[arg(value_parser = small_u64)]
    pub k: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum FibCommand {
    /// Indices k <= max with F_k, L_k square, and F_k = 5*square.
    Squares {
        #[arg(long, value_parser = small_u64)]
        max: u64,
    },
}

#[derive(Debug, Args)]
pub struct CorollaryArgs {
    /// 1, 2, 3 or 4.
    pub which: u8,
    /// Instances like `c=7,p=3,m=1,n=9`; default fixtures when omitted.
    pub instances: Vec<String>,
    #[arg(long, value_parser = small_u64)]
    pub oracle_y_max: Option<u64>,
    #[arg(long)]
    pub screens: bool,
}

/// One invocation as written to stdout under `--json`.
///
/// Every integer inside `inputs` and `result` is a decimal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub timing_ms: u64,
}

impl OutputRecord {
    pub fn new(command: String, mut inputs: Value, mut result: Value, timing_ms: u64) -> Self {
        stringify_integers(&mut inputs);
        stringify_integers(&mut result);
        OutputRecord {
            command,
            inputs,
            result,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("values are always serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// The record without the timing field, for comparing runs.
    pub fn without_timing(&self) -> OutputRecord {
        OutputRecord {
            timing_ms: 0,
            ..self.clone()
        }
    }
}

/// Rewrites every integral JSON number as a decimal string.
pub fn stringify_integers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            *v = Value::String(n.to_string());
        }
        Value::Array(items) => items.iter_mut().for_each(stringify_integers),
        Value::Object(map) => map.values_mut().for_each(stringify_integers),
        _ => {}
    }
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(ParseError),
    Solve(SolveError),
    ClassNumber(ClassNumberError),
    Lehmer(LehmerError),
    Corollary(CorollaryError),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Solve(e) if e.is_incomplete_factorization() => EXIT_INCOMPLETE_FACTORIZATION,
            CliError::ClassNumber(ClassNumberError::Arith(
                ArithError::IncompleteFactorization { .. },
            )) => EXIT_INCOMPLETE_FACTORIZATION,
            CliError::Corollary(CorollaryError::Solve(e)) if e.is_incomplete_factorization() => {
                EXIT_INCOMPLETE_FACTORIZATION
            }
            CliError::Corollary(CorollaryError::Unknown(_)) => EXIT_USAGE,
            CliError::ClassNumber(ClassNumberError::TooLarge(_))
            | CliError::Solve(SolveError::ClassNumber(ClassNumberError::TooLarge(_))) => {
                EXIT_FAILURE
            }
            CliError::ClassNumber(_)
            | CliError::Lehmer(_)
            | CliError::Solve(_)
            | CliError::Corollary(_) => EXIT_HYPOTHESIS,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(s) => s.clone(),
            CliError::Parse(e) => e.to_string(),
            CliError::Solve(e) => e.to_string(),
            CliError::ClassNumber(e) => e.to_string(),
            CliError::Lehmer(e) => e.to_string(),
            CliError::Corollary(e) => e.to_string(),
        }
    }
}

macro_rules! from_err {
    ($($t:ty => $v:ident),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self { CliError::$v(e) }
        }
    )*};
}
from_err!(ParseError => Parse, SolveError => Solve, ClassNumberError => ClassNumber,
          LehmerError => Lehmer, CorollaryError => Corollary);

/// What a subcommand produced: the JSON payload, its text rendering and exit code.
struct Produced {
    inputs: Value,
    result: Value,
    text: String,
    code: i32,
}

impl Produced {
    fn ok(inputs: Value, result: Value, text: String) -> Self {
        Produced {
            inputs,
            result,
            text,
            code: EXIT_OK,
        }
    }
}

/// Parses the factorization budget override; `None` keeps the default.
pub fn budget_from_env(value: Option<&str>) -> Result<FactorBudget, String> {
    match value {
        None => Ok(FactorBudget::default()),
        Some(s) => parse::parse_u64(s, FACTOR_BUDGET_ENV)
            .map(FactorBudget::with_rho_iterations)
            .map_err(|e| format!("{FACTOR_BUDGET_ENV}: {e}")),
    }
}

/// Runs the CLI with the budget override read from the environment.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(FACTOR_BUDGET_ENV).ok();
    run_with_budget(args, env.as_deref())
}

pub fn run_with_budget<I, T>(args: I, budget_env: Option<&str>) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                RunOutput {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                RunOutput {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let budget = match budget_from_env(budget_env) {
        Ok(b) => b,
        Err(msg) => {
            return RunOutput {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: msg + "\n",
            }
        }
    };

    let start = Instant::now();
    let mut stderr = String::new();
    match dispatch(&cli.command, budget, &mut stderr) {
        Ok(prod) => {
            let stdout = if cli.json && !matches!(cli.command, Command::Table { .. }) {
                let rec = OutputRecord::new(
                    command_name(&cli.command).to_string(),
                    prod.inputs,
                    prod.result,
                    start.elapsed().as_millis() as u64,
                );
                rec.to_json() + "\n"
            } else {
                prod.text
            };
            RunOutput {
                code: prod.code,
                stdout,
                stderr,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            RunOutput {
                code: e.code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve(_) => "solve",
        Command::Search(_) => "search",
        Command::Classnum { .. } => "classnum",
        Command::Rsums { .. } => "rsums",
        Command::Lehmer(LehmerCommand::Number { .. }) => "lehmer number",
        Command::Lehmer(LehmerCommand::Primdiv { .. }) => "lehmer primdiv",
        Command::Lehmer(LehmerCommand::Defects { .. }) => "lehmer defects",
        Command::Fib(FibArgs { sub: Some(_), .. }) => "fib squares",
        Command::Fib(_) => "fib",
        Command::Lucas { .. } => "lucas",
        Command::VerifyCorollary(_) => "verify-corollary",
        Command::Table { .. } => "table",
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn pretty(v: &Value) -> String {
    let mut v = v.clone();
    stringify_integers(&mut v);
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn dispatch(cmd: &Command, budget: FactorBudget, stderr: &mut String) -> Result<Produced, CliError> {
    match cmd {
        Command::Solve(a) => {
            let inst = ProblemInstance {
                c: a.c.clone(),
                p: a.p.clone(),
                m: a.m,
                n: a.n,
            };
            let opts = SolveOptions {
                budget,
                congruence_screens: a.screens,
            };
            let out = solver::solve_with(&inst, &opts)?;
            let mut text = format!("{inst}\n");
            match &out.verdict {
                Verdict::Solutions(list) => {
                    for s in list {
                        let _ = writeln!(
                            text,
                            "solution (x, y) = ({}, {})  [u = {}, v = {}, q = {}]",
                            s.x, s.y, s.u, s.v, s.q
                        );
                    }
                }
                Verdict::NoSolutions(r) => {
                    let _ = writeln!(text, "no solutions: {r}");
                }
                Verdict::HypothesisViolation => {
                    let _ = writeln!(
                        text,
                        "hypothesis violation: {}",
                        out.report.failures().join(", ")
                    );
                }
            }
            let code = if out.verdict == Verdict::HypothesisViolation {
                EXIT_HYPOTHESIS
            } else {
                EXIT_OK
            };
            Ok(Produced {
                inputs: to_value(&inst),
                result: to_value(&out.to_json()),
                text,
                code,
            })
        }
        Command::Search(a) => {
            let mut found = Vec::new();
            if a.seed_check {
                let chunks = 10u64;
                let step = (a.y_max / chunks).max(1);
                let mut lo = 2u64;
                while lo <= a.y_max {
                    let hi = (lo + step - 1).min(a.y_max);
                    found.extend(solver::brute_force_range(&a.c, &a.p, a.n, a.m_max, lo, hi));
                    let _ = writeln!(stderr, "checked y <= {hi}: {} found", found.len());
                    lo = hi + 1;
                }
            } else {
                found = solver::brute_force_solutions(&a.c, &a.p, a.n, a.m_max, a.y_max);
            }
            let mut text = String::new();
            for s in &found {
                let _ = writeln!(text, "x = {}, y = {}, m = {}", s.x, s.y, s.m);
            }
            if found.is_empty() {
                text.push_str("no solutions in range\n");
            }
            Ok(Produced::ok(
                json!({"c": a.c.to_string(), "p": a.p.to_string(), "n": a.n,
                       "m_max": a.m_max, "y_max": a.y_max}),
                json!({"solutions": to_value(&found)}),
                text,
            ))
        }
        Command::Classnum { c, forms } => {
            let disc = classnum::fundamental_discriminant(c)?;
            let list = classnum::reduced_forms(disc);
            let mut text = format!("{}\n", list.len());
            if *forms {
                for f in &list {
                    let _ = writeln!(text, "({}, {}, {})", f.a, f.b, f.k);
                }
            }
            let mut result = json!({
                "discriminant": disc.value().to_string(),
                "class_number": list.len(),
            });
            if *forms {
                result["forms"] = list
                    .iter()
                    .map(|f| json!([f.a.to_string(), f.b.to_string(), f.k.to_string()]))
                    .collect();
            }
            Ok(Produced::ok(json!({"c": c.to_string()}), result, text))
        }
        Command::Rsums { c, u, v, t } => {
            let r = rsums::r_sum(c, u, v, *t).map_err(|e| CliError::Usage(e.to_string()))?;
            let i = rsums::i_sum(c, u, v, *t).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut result = json!({"R": r.to_string(), "I": i.to_string()});
            if let Ok(ring) = rsums::power_in_ring(c, u, v, *t) {
                result["ring_identity_holds"] = json!(ring.r == r && ring.i == i);
            }
            if let Ok(rep) = rsums::congruence_check(c, u, v, *t) {
                result["congruences"] = to_value(&rep.lines);
            }
            Ok(Produced::ok(
                json!({"c": c.to_string(), "u": u.to_string(), "v": v.to_string(), "t": t}),
                result.clone(),
                pretty(&result),
            ))
        }
        Command::Lehmer(sub) => {
            let (inputs, result) = match sub {
                LehmerCommand::Number { a, b, ell } => {
                    let params = LehmerParams::new(a.clone(), b.clone())?;
                    let value = lehmer::lehmer_number(&params, *ell)?;
                    (
                        json!({"a": a.to_string(), "b": b.to_string(), "ell": ell}),
                        json!({"value": value.to_string()}),
                    )
                }
                LehmerCommand::Primdiv { a, b, ell } => {
                    let params = LehmerParams::new(a.clone(), b.clone())?;
                    let pd = lehmer::primitive_divisor_exists(&params, *ell)?;
                    (
                        json!({"a": a.to_string(), "b": b.to_string(), "ell": ell}),
                        to_value(&pd),
                    )
                }
                LehmerCommand::Defects { ell, bound } => {
                    let table = lehmer::defective_pairs(*ell, *bound)?;
                    (json!({"ell": ell, "bound": bound}), to_value(&table))
                }
            };
            let text = pretty(&result);
            Ok(Produced::ok(inputs, result, text))
        }
        Command::Fib(a) => match (&a.sub, a.k) {
            (Some(FibCommand::Squares { max }), _) => {
                let fib = fiblucas::square_terms(fiblucas::Kind::Fib, *max);
                let lucas = fiblucas::square_terms(fiblucas::Kind::Lucas, *max);
                let five = fiblucas::five_square_terms(*max);
                let join = |s: &std::collections::BTreeSet<u64>| {
                    s.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
                };
                let text = format!(
                    "F_k square: {{{}}}\nL_k square: {{{}}}\nF_k = 5x^2: {{{}}}\n",
                    join(&fib),
                    join(&lucas),
                    join(&five)
                );
                Ok(Produced::ok(
                    json!({"max": max}),
                    json!({"fib_squares": fib, "lucas_squares": lucas, "fib_five_squares": five}),
                    text,
                ))
            }
            (None, Some(k)) => {
                let v = fiblucas::fibonacci(k);
                Ok(Produced::ok(
                    json!({"k": k}),
                    json!({"value": v.to_string()}),
                    format!("{v}\n"),
                ))
            }
            (None, None) => Err(CliError::Usage(
                "fib needs an index k or the `squares` subcommand".into(),
            )),
        },
        Command::Lucas { k } => {
            let v = fiblucas::lucas(*k);
            Ok(Produced::ok(
                json!({"k": k}),
                json!({"value": v.to_string()}),
                format!("{v}\n"),
            ))
        }
        Command::VerifyCorollary(a) => {
            let id = CorollaryId::try_from(a.which)?;
            let instances = if a.instances.is_empty() {
                None
            } else {
                Some(
                    a.instances
                        .iter()
                        .map(|s| parse::parse_instance(s))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            };
            let opts = SolveOptions {
                budget,
                congruence_screens: a.screens,
            };
            let rep = solver::corollary_report(id, instances, a.oracle_y_max, &opts)?;
            let mut text = format!("corollary {id}: {} instances\n", rep.rows.len());
            for r in &rep.rows {
                let _ = writeln!(
                    text,
                    "{}  c={} p={} m={} n={}  {} {}{}",
                    if r.pass && r.oracle_agrees != Some(false) { "PASS" } else { "FAIL" },
                    r.instance.c,
                    r.instance.p,
                    r.instance.m,
                    r.instance.n,
                    r.verdict,
                    r.reason.unwrap_or(""),
                    match r.oracle_agrees {
                        Some(true) => "  oracle: agrees",
                        Some(false) => "  oracle: DISAGREES",
                        None => "",
                    }
                );
            }
            if let Some(sigma) = &rep.sigma {
                for row in sigma.iter().filter(|r| !r.confirmed) {
                    let _ = writeln!(
                        text,
                        "flagged: c = {} (c mod 4 = {}, h(-c) = {})",
                        row.c,
                        row.c_mod4,
                        row.class_number
                            .map_or_else(|| "?".to_string(), |h| h.to_string())
                    );
                }
            }
            let code = if rep.all_pass() { EXIT_OK } else { EXIT_FAILURE };
            Ok(Produced {
                inputs: json!({"which": a.which, "instances": a.instances,
                               "oracle_y_max": a.oracle_y_max}),
                result: to_value(&rep),
                text,
                code,
            })
        }
        Command::Table { oracle_y_max } => {
            let mut text = String::from("c,p,m,n,verdict,reason,x,y\n");
            let opts = SolveOptions {
                budget,
                ..SolveOptions::default()
            };
            let mut all_pass = true;
            for id in CorollaryId::ALL {
                for inst in solver::corollary_fixtures(id) {
                    let out = solver::solve_with(&inst, &opts)?;
                    if let Some(y_max) = oracle_y_max {
                        let hits = solver::brute_force_solutions(&inst.c, &inst.p, inst.n, inst.m, *y_max);
                        if hits.iter().any(|s| s.m == inst.m) {
                            all_pass = false;
                            let _ = writeln!(stderr, "oracle found a solution for {inst}");
                        }
                    }
                    let head = format!("{},{},{},{}", inst.c, inst.p, inst.m, inst.n);
                    let reason = out.reason().map(|r| r.as_str()).unwrap_or("");
                    if out.solutions().is_empty() {
                        let _ = writeln!(text, "{head},{},{reason},,", out.verdict.label());
                    } else {
                        all_pass = false;
                        for s in out.solutions() {
                            let _ = writeln!(text, "{head},{},,{},{}", out.verdict.label(), s.x, s.y);
                        }
                    }
                }
            }
            Ok(Produced {
                inputs: json!({"oracle_y_max": oracle_y_max}),
                result: Value::Null,
                text,
                code: if all_pass { EXIT_OK } else { EXIT_FAILURE },
            })
        }
    }
}
